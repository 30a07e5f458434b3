#include "gaussdens/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gaussdens {

namespace {

void check_edges_distinct(const std::vector<Vec2>& verts, bool closed) {
    const std::size_t n = verts.size();
    const std::size_t edges = closed ? n : n - 1;
    // Relative duplicate threshold against the overall extent.
    Vec2 lo = verts[0], hi = verts[0];
    for (const Vec2& v : verts) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    const double extent = (hi - lo).norm();
    const double tol = 1e-14 * std::max(extent, 1e-300);
    for (std::size_t i = 0; i < edges; ++i) {
        const Vec2& a = verts[i];
        const Vec2& b = verts[(i + 1) % n];
        if ((b - a).norm() <= tol)
            throw std::invalid_argument("DiscreteCurve: duplicate consecutive vertices");
    }
}

}  // namespace

DiscreteCurve::DiscreteCurve(std::vector<Vec2> verts, bool is_closed)
    : vertices(std::move(verts)), closed(is_closed) {
    const std::size_t min_count = closed ? 3 : 2;
    if (vertices.size() < min_count)
        throw std::invalid_argument("DiscreteCurve: too few vertices");
    check_edges_distinct(vertices, closed);
    if (closed && signed_area() <= 0.0)
        throw std::invalid_argument("DiscreteCurve: closed curves must be counterclockwise");
}

double DiscreteCurve::min_edge_length() const {
    const int n = size();
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < edge_count(); ++i)
        m = std::min(m, (vertices[(i + 1) % n] - vertices[i]).norm());
    return m;
}

double DiscreteCurve::max_edge_length() const {
    const int n = size();
    double m = 0.0;
    for (int i = 0; i < edge_count(); ++i)
        m = std::max(m, (vertices[(i + 1) % n] - vertices[i]).norm());
    return m;
}

double DiscreteCurve::diameter() const {
    Vec2 lo = vertices[0], hi = vertices[0];
    for (const Vec2& v : vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    return (hi - lo).norm();
}

double DiscreteCurve::signed_area() const {
    const int n = size();
    double twice_area = 0.0;
    for (int i = 0; i < n; ++i) twice_area += cross2(vertices[i], vertices[(i + 1) % n]);
    return 0.5 * twice_area;
}

double signed_menger_curvature(const Vec2& a, const Vec2& b, const Vec2& c) {
    const Vec2 e1 = b - a;
    const Vec2 e2 = c - b;
    const Vec2 e3 = c - a;
    const double denom = e1.norm() * e2.norm() * e3.norm();
    if (denom == 0.0) return 0.0;
    return 2.0 * cross2(e1, e2) / denom;
}

CurveGeometry compute_geometry(const DiscreteCurve& curve) {
    const int n = curve.size();
    const auto& v = curve.vertices;
    CurveGeometry g;
    g.curvature.resize(n);
    g.normal.resize(n);
    g.dual_length.resize(n);

    std::vector<double> edge_len(curve.edge_count());
    for (int i = 0; i < curve.edge_count(); ++i)
        edge_len[i] = (v[(i + 1) % n] - v[i]).norm();

    g.bbox_min = v[0];
    g.bbox_max = v[0];
    for (const Vec2& p : v) {
        g.bbox_min = g.bbox_min.cwiseMin(p);
        g.bbox_max = g.bbox_max.cwiseMax(p);
    }

    if (curve.closed) {
        for (int i = 0; i < n; ++i) {
            const Vec2& prev = v[(i + n - 1) % n];
            const Vec2& next = v[(i + 1) % n];
            g.curvature[i] = signed_menger_curvature(prev, v[i], next);
            g.normal[i] = rot90((next - prev).normalized());
            g.dual_length[i] = 0.5 * (edge_len[(i + n - 1) % n] + edge_len[i]);
        }
    } else {
        for (int i = 0; i < n; ++i) {
            if (i == 0) {
                g.curvature[i] = 0.0;
                g.normal[i] = rot90((v[1] - v[0]).normalized());
                g.dual_length[i] = 0.5 * edge_len[0];
            } else if (i == n - 1) {
                g.curvature[i] = 0.0;
                g.normal[i] = rot90((v[n - 1] - v[n - 2]).normalized());
                g.dual_length[i] = 0.5 * edge_len[n - 2];
            } else {
                g.curvature[i] = signed_menger_curvature(v[i - 1], v[i], v[i + 1]);
                g.normal[i] = rot90((v[i + 1] - v[i - 1]).normalized());
                g.dual_length[i] = 0.5 * (edge_len[i - 1] + edge_len[i]);
            }
        }
    }

    g.length = 0.0;
    for (double e : edge_len) g.length += e;
    g.centroid = Vec2::Zero();
    for (int i = 0; i < n; ++i) g.centroid += g.dual_length[i] * v[i];
    g.centroid /= g.length;
    return g;
}

double CurveGeometry::max_abs_curvature() const {
    double m = 0.0;
    for (double k : curvature) m = std::max(m, std::abs(k));
    return m;
}

double CurveGeometry::total_turning() const {
    double s = 0.0;
    for (std::size_t i = 0; i < curvature.size(); ++i) s += curvature[i] * dual_length[i];
    return s;
}

Vec2 Isometry2::operator()(const Vec2& x) const {
    const double c = std::cos(angle), s = std::sin(angle);
    return Vec2(c * x.x() - s * x.y(), s * x.x() + c * x.y()) + translation;
}

DiscreteCurve transform(const DiscreteCurve& curve, const Isometry2& iso, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("transform: scale must be positive");
    std::vector<Vec2> out;
    out.reserve(curve.vertices.size());
    for (const Vec2& x : curve.vertices) out.push_back(scale * iso(x));
    return DiscreteCurve(std::move(out), curve.closed);
}

SphereState::SphereState(Eigen::VectorXd c, double r, int dim) : center(std::move(c)), radius(r), n(dim) {
    if (n < 1) throw std::invalid_argument("SphereState: intrinsic dimension must be >= 1");
    if (!(radius > 0.0)) throw std::invalid_argument("SphereState: radius must be positive");
    if (center.size() != n + 1) throw std::invalid_argument("SphereState: center must live in (n+1)-space");
}

double unit_sphere_area(int n) {
    if (n < 1) throw std::invalid_argument("unit_sphere_area: n must be >= 1");
    const double pi = std::numbers::pi;
    return 2.0 * std::pow(pi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

SphereGeometry sphere_geometry(const SphereState& s) {
    return {static_cast<double>(s.n) / s.radius, unit_sphere_area(s.n) * std::pow(s.radius, s.n)};
}

DiscreteCurve make_regular_polygon(int n_vertices, double radius, const Vec2& center) {
    if (n_vertices < 3) throw std::invalid_argument("make_regular_polygon: need at least 3 vertices");
    if (!(radius > 0.0)) throw std::invalid_argument("make_regular_polygon: radius must be positive");
    std::vector<Vec2> verts;
    verts.reserve(n_vertices);
    for (int i = 0; i < n_vertices; ++i) {
        const double th = 2.0 * std::numbers::pi * i / n_vertices;
        verts.push_back(center + radius * Vec2(std::cos(th), std::sin(th)));
    }
    return DiscreteCurve(std::move(verts));
}

DiscreteCurve make_ellipse(int n_vertices, double a, double b, const Vec2& center) {
    if (n_vertices < 3) throw std::invalid_argument("make_ellipse: need at least 3 vertices");
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("make_ellipse: semi-axes must be positive");
    // Dense angular sampling, then resample to uniform arc length.
    const int dense = std::max(16 * n_vertices, 1024);
    std::vector<Vec2> verts;
    verts.reserve(dense);
    for (int i = 0; i < dense; ++i) {
        const double th = 2.0 * std::numbers::pi * i / dense;
        verts.push_back(center + Vec2(a * std::cos(th), b * std::sin(th)));
    }
    return resample_uniform(DiscreteCurve(std::move(verts)), n_vertices);
}

DiscreteCurve make_square(double side, int refinements) {
    if (!(side > 0.0)) throw std::invalid_argument("make_square: side must be positive");
    const double h = 0.5 * side;
    DiscreteCurve c({Vec2(h, -h), Vec2(h, h), Vec2(-h, h), Vec2(-h, -h)});
    for (int r = 0; r < refinements; ++r) c = midpoint_refine(c);
    return c;
}

DiscreteCurve make_rounded_square(int n_vertices, double side, double corner_radius) {
    if (!(side > 0.0) || !(corner_radius > 0.0) || corner_radius >= 0.5 * side)
        throw std::invalid_argument("make_rounded_square: need 0 < corner_radius < side/2");
    const double straight = side - 2.0 * corner_radius;
    const double arc = 0.5 * std::numbers::pi * corner_radius;
    const double perimeter = 4.0 * (straight + arc);
    const double h = 0.5 * side;
    const double r = corner_radius;

    // Walk counterclockwise starting at the middle of the right edge.
    auto point_at = [&](double s) -> Vec2 {
        s = std::fmod(s, perimeter);
        // Pieces: half right edge, corner, top edge, corner, left edge, corner,
        // bottom edge, corner, half right edge.
        struct Piece {
            double len;
            int kind;  // 0 = straight, 1 = arc
            Vec2 origin;
            Vec2 dir;          // straight: direction; arc: center is origin
            double angle0 = 0; // arc start angle
        };
        const std::vector<Piece> pieces = {
            {0.5 * straight, 0, Vec2(h, 0.0), Vec2(0, 1)},
            {arc, 1, Vec2(h - r, h - r), Vec2::Zero(), 0.0},
            {straight, 0, Vec2(h - r, h), Vec2(-1, 0)},
            {arc, 1, Vec2(-(h - r), h - r), Vec2::Zero(), 0.5 * std::numbers::pi},
            {straight, 0, Vec2(-h, h - r), Vec2(0, -1)},
            {arc, 1, Vec2(-(h - r), -(h - r)), Vec2::Zero(), std::numbers::pi},
            {straight, 0, Vec2(-(h - r), -h), Vec2(1, 0)},
            {arc, 1, Vec2(h - r, -(h - r)), Vec2::Zero(), 1.5 * std::numbers::pi},
            {0.5 * straight, 0, Vec2(h, -(h - r)), Vec2(0, 1)},
        };
        for (const Piece& p : pieces) {
            if (s <= p.len + 1e-12) {
                if (p.kind == 0) return p.origin + s * p.dir;
                const double th = p.angle0 + s / r;
                return p.origin + r * Vec2(std::cos(th), std::sin(th));
            }
            s -= p.len;
        }
        return Vec2(h, 0.0);
    };

    std::vector<Vec2> verts;
    verts.reserve(n_vertices);
    for (int i = 0; i < n_vertices; ++i) verts.push_back(point_at(perimeter * i / n_vertices));
    return DiscreteCurve(std::move(verts));
}

DiscreteCurve make_segment(const Vec2& a, const Vec2& b, int n_vertices) {
    if (n_vertices < 2) throw std::invalid_argument("make_segment: need at least 2 vertices");
    std::vector<Vec2> verts;
    verts.reserve(n_vertices);
    for (int i = 0; i < n_vertices; ++i) {
        const double t = static_cast<double>(i) / (n_vertices - 1);
        verts.push_back((1.0 - t) * a + t * b);
    }
    return DiscreteCurve(std::move(verts), /*is_closed=*/false);
}

DiscreteCurve midpoint_refine(const DiscreteCurve& curve) {
    const int n = curve.size();
    std::vector<Vec2> out;
    out.reserve(2 * n);
    for (int i = 0; i < n; ++i) {
        out.push_back(curve.vertices[i]);
        if (!curve.closed && i == n - 1) break;
        out.push_back(0.5 * (curve.vertices[i] + curve.vertices[(i + 1) % n]));
    }
    return DiscreteCurve(std::move(out), curve.closed);
}

DiscreteCurve resample_uniform(const DiscreteCurve& curve, int n_vertices) {
    const int min_count = curve.closed ? 3 : 2;
    if (n_vertices < min_count) throw std::invalid_argument("resample_uniform: too few vertices");
    const int n = curve.size();
    const int edges = curve.edge_count();

    std::vector<double> cum(edges + 1, 0.0);
    for (int i = 0; i < edges; ++i)
        cum[i + 1] = cum[i] + (curve.vertices[(i + 1) % n] - curve.vertices[i]).norm();
    const double total = cum[edges];

    std::vector<Vec2> out;
    out.reserve(n_vertices);
    const double spacing = curve.closed ? total / n_vertices : total / (n_vertices - 1);
    int seg = 0;
    for (int j = 0; j < n_vertices; ++j) {
        double s = spacing * j;
        if (!curve.closed && j == n_vertices - 1) s = total;  // pin the far endpoint
        while (seg < edges - 1 && cum[seg + 1] < s) ++seg;
        const double seg_len = cum[seg + 1] - cum[seg];
        const double t = seg_len > 0.0 ? (s - cum[seg]) / seg_len : 0.0;
        out.push_back((1.0 - t) * curve.vertices[seg] + t * curve.vertices[(seg + 1) % n]);
    }
    return DiscreteCurve(std::move(out), curve.closed);
}

}  // namespace gaussdens
