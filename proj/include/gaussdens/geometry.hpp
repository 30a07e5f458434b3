#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <vector>

namespace gaussdens {

using Vec2 = Eigen::Vector2d;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Rotate a vector by +90 degrees (counterclockwise).
inline Vec2 rot90(const Vec2& v) { return Vec2(-v.y(), v.x()); }

/// Polygonal curve in the plane. Closed curves are oriented counterclockwise
/// and the vertex list does not repeat the first vertex; open polylines are
/// used for probe geometry (segments).
struct DiscreteCurve {
    std::vector<Vec2> vertices;
    bool closed = true;

    explicit DiscreteCurve(std::vector<Vec2> verts, bool is_closed = true);

    int size() const { return static_cast<int>(vertices.size()); }
    int edge_count() const { return closed ? size() : size() - 1; }

    double min_edge_length() const;
    double max_edge_length() const;
    /// Diagonal of the bounding box.
    double diameter() const;
    double signed_area() const;
};

/// Per-vertex differential quantities of a DiscreteCurve.
///
/// curvature is the signed circumradius (Menger) curvature of each vertex and
/// its two neighbours; normal is the unit inner normal (for a counterclockwise
/// circle it points at the center); dual_length is the half-sum of the two
/// adjacent edge lengths, so the dual lengths partition the perimeter exactly.
struct CurveGeometry {
    std::vector<double> curvature;
    std::vector<Vec2> normal;
    std::vector<double> dual_length;
    double length = 0.0;
    Vec2 centroid = Vec2::Zero();
    Vec2 bbox_min = Vec2::Zero();
    Vec2 bbox_max = Vec2::Zero();

    double max_abs_curvature() const;
    /// Discrete total turning, sum of curvature times dual length.
    double total_turning() const;
};

CurveGeometry compute_geometry(const DiscreteCurve& curve);

/// Signed curvature of the circle through three consecutive points; zero for
/// collinear triples, positive for a left turn.
double signed_menger_curvature(const Vec2& a, const Vec2& b, const Vec2& c);

/// Rotation by `angle` followed by translation.
struct Isometry2 {
    double angle = 0.0;
    Vec2 translation = Vec2::Zero();

    Vec2 operator()(const Vec2& x) const;
};

/// Maps every vertex x to scale * L(x). Orientation is preserved.
DiscreteCurve transform(const DiscreteCurve& curve, const Isometry2& iso, double scale);

/// Exact round n-sphere of radius `radius` centered at `center` in (n+1)-space.
struct SphereState {
    Eigen::VectorXd center;
    double radius = 1.0;
    int n = 1;

    SphereState(Eigen::VectorXd c, double r, int dim);
};

struct SphereGeometry {
    double mean_curvature;  // n / R, inner normal convention
    double area;            // omega_n R^n
};

/// Surface area of the unit n-sphere in (n+1)-space.
double unit_sphere_area(int n);

SphereGeometry sphere_geometry(const SphereState& s);

// Built-in shapes. Closed shapes are counterclockwise.
DiscreteCurve make_regular_polygon(int n_vertices, double radius, const Vec2& center = Vec2::Zero());
DiscreteCurve make_ellipse(int n_vertices, double a, double b, const Vec2& center = Vec2::Zero());
DiscreteCurve make_square(double side, int refinements = 0);
DiscreteCurve make_rounded_square(int n_vertices, double side, double corner_radius);
/// Open polyline from a to b with n_vertices points.
DiscreteCurve make_segment(const Vec2& a, const Vec2& b, int n_vertices);

/// Insert the midpoint of every edge.
DiscreteCurve midpoint_refine(const DiscreteCurve& curve);

/// Resample to n_vertices points uniformly spaced in arc length. Vertices stay
/// on the input polyline; vertex 0 (resp. both endpoints) is kept in place.
DiscreteCurve resample_uniform(const DiscreteCurve& curve, int n_vertices);

}  // namespace gaussdens
