#include "gaussdens/singularity.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gaussdens {

namespace {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

std::vector<Vec2> sample_curve(const DiscreteCurve& c, int samples_per_edge) {
    std::vector<Vec2> out;
    const int n = c.size();
    out.reserve(static_cast<std::size_t>(c.edge_count()) * samples_per_edge);
    for (int e = 0; e < c.edge_count(); ++e) {
        const Vec2& a = c.vertices[e];
        const Vec2& b = c.vertices[(e + 1) % n];
        for (int q = 0; q < samples_per_edge; ++q)
            out.push_back(a + (b - a) * (static_cast<double>(q) / samples_per_edge));
    }
    if (!c.closed) out.push_back(c.vertices.back());
    return out;
}

double directed_hausdorff(const std::vector<Vec2>& pts, const DiscreteCurve& target) {
    const int n = target.size();
    double worst = 0.0;
    for (const Vec2& p : pts) {
        double best = std::numeric_limits<double>::infinity();
        for (int e = 0; e < target.edge_count(); ++e)
            best = std::min(best,
                            point_segment_distance(p, target.vertices[e], target.vertices[(e + 1) % n]));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

RescaledFrame rescale_transform(const DiscreteCurve& curve, double t, double T, const Vec2& p) {
    if (!(t < T)) throw std::invalid_argument("rescale_transform: requires t < T");
    const double factor = 1.0 / std::sqrt(2.0 * (T - t));
    std::vector<Vec2> verts;
    verts.reserve(curve.vertices.size());
    for (const Vec2& x : curve.vertices) verts.push_back(factor * (x - p));
    return {-0.5 * std::log(T - t), DiscreteCurve(std::move(verts), curve.closed), t, p};
}

DiscreteCurve inverse_rescale(const RescaledFrame& frame) {
    const double factor = std::sqrt(2.0 * std::exp(-2.0 * frame.s));
    std::vector<Vec2> verts;
    verts.reserve(frame.curve.vertices.size());
    for (const Vec2& y : frame.curve.vertices) verts.push_back(factor * y + frame.center);
    return DiscreteCurve(std::move(verts), frame.curve.closed);
}

double limit_density(const RescaledFrame& frame) {
    return huisken_functional(frame.curve, Vec2::Zero(), 0.5);
}

double hausdorff_distance(const DiscreteCurve& a, const DiscreteCurve& b, int samples_per_edge) {
    const auto pa = sample_curve(a, samples_per_edge);
    const auto pb = sample_curve(b, samples_per_edge);
    return std::max(directed_hausdorff(pa, b), directed_hausdorff(pb, a));
}

double distance_to_origin_line(const DiscreteCurve& curve) {
    const CurveGeometry geom = compute_geometry(curve);
    Eigen::Matrix2d moment = Eigen::Matrix2d::Zero();
    for (int i = 0; i < curve.size(); ++i)
        moment += geom.dual_length[i] * curve.vertices[i] * curve.vertices[i].transpose();
    // Normal of the best-fit line is the minor eigenvector of the second
    // moment matrix.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(moment);
    const Vec2 normal = es.eigenvectors().col(0);
    double worst = 0.0;
    for (const Vec2& v : curve.vertices) worst = std::max(worst, std::abs(normal.dot(v)));
    return worst;
}

SingularityReport classify(const Trajectory& traj, const ClassifyOptions& options) {
    SingularityReport report;
    const double T = traj.estimated_T;
    if (!(T > 0.0) || traj.frames.size() < 3) return report;  // Unresolved

    struct Usable {
        double tau;
        const Frame* frame;
        double max_k;
    };
    std::vector<Usable> usable;
    for (const Frame& f : traj.frames) {
        if (f.t >= T) continue;
        const CurveGeometry g = compute_geometry(f.curve);
        if (frame_is_reliable(g, f.curve.min_edge_length()))
            usable.push_back({T - f.t, &f, g.max_abs_curvature()});
    }
    if (usable.size() < 3) return report;
    std::sort(usable.begin(), usable.end(), [](const Usable& a, const Usable& b) { return a.tau < b.tau; });

    // Type I constant over the late window.
    const double window = options.window_fraction * T;
    double c_max = 0.0, c_last = 0.0;
    int window_count = 0;
    for (const Usable& u : usable) {
        if (u.tau > window) continue;
        const double c = u.max_k * std::sqrt(2.0 * u.tau);
        c_max = std::max(c_max, c);
        if (window_count == 0) c_last = c;  // usable is sorted, first is latest
        ++window_count;
    }
    if (window_count < 3) return report;
    report.typeI_constant = c_max;
    const bool bounded = c_max <= options.type_II_threshold || c_last < 0.8 * c_max;
    report.type = bounded ? SingularityType::TypeI : SingularityType::TypeII;

    // Rescale around the density-maximizing centers at geometrically spaced
    // scales approaching the singular time.
    for (int j = 0; j < options.levels; ++j) {
        const double target = window * std::pow(2.0, -j);
        const Usable* pick = nullptr;
        double best_err = std::numeric_limits<double>::infinity();
        for (const Usable& u : usable) {
            const double err = std::abs(std::log(u.tau / target));
            if (err < best_err) {
                best_err = err;
                pick = &u;
            }
        }
        if (pick == nullptr) continue;
        if (!report.rescaled_frames.empty() &&
            report.rescaled_frames.back().source_t == pick->frame->t)
            continue;
        const DensityReport dens = sigma(pick->frame->curve, pick->tau, options.sigma_options);
        report.center_path.push_back(dens.maximizer_center);
        report.rescaled_frames.push_back(
            rescale_transform(pick->frame->curve, pick->frame->t, T, dens.maximizer_center));
    }
    for (std::size_t i = 0; i + 1 < report.center_path.size(); ++i) {
        const double tau_next = std::exp(-2.0 * report.rescaled_frames[i + 1].s);
        if ((report.center_path[i + 1] - report.center_path[i]).norm() >
            std::sqrt(2.0 * tau_next))
            report.large_center_jump = true;
    }
    if (report.rescaled_frames.empty()) return report;

    // Final frame: the latest rescaled frame whose curvature is still trusted.
    const RescaledFrame* final_frame = nullptr;
    for (const RescaledFrame& rf : report.rescaled_frames) {
        if (compute_geometry(rf.curve).max_abs_curvature() <= options.rescaled_curvature_cap)
            final_frame = &rf;
    }
    if (final_frame == nullptr) final_frame = &report.rescaled_frames.back();

    report.final_residual =
        shrinker_residual(final_frame->curve, compute_geometry(final_frame->curve), Vec2::Zero(), 0.5);
    report.limit_density_value = limit_density(*final_frame);
    report.hausdorff_circle =
        hausdorff_distance(final_frame->curve, make_regular_polygon(2048, 1.0));
    report.hausdorff_line = distance_to_origin_line(final_frame->curve);

    if (report.hausdorff_circle < options.hausdorff_tol)
        report.limit_match = LimitShape::UnitCircle;
    else if (report.hausdorff_line < options.hausdorff_tol &&
             std::abs(report.limit_density_value - 1.0) < options.hausdorff_tol)
        report.limit_match = LimitShape::Line;

    report.Sigma = sigma_limit_estimate(traj, options.sigma_options).value;
    return report;
}

BreatherResult breather_check(const Trajectory& traj, const BreatherHypothesis& hypothesis,
                              const BreatherOptions& options) {
    if (!(hypothesis.scale > 0.0) || hypothesis.scale >= 1.0)
        throw std::invalid_argument("breather_check: compact breathers need scale in (0, 1)");
    if (traj.frames.empty()) throw std::invalid_argument("breather_check: empty trajectory");
    const double span = traj.frames.back().t;
    if (!(hypothesis.t_bar > 0.0) || hypothesis.t_bar > span * (1.0 + 1e-9))
        throw std::invalid_argument("breather_check: t_bar outside the trajectory");

    BreatherResult result;
    result.C = hypothesis.t_bar / (1.0 - hypothesis.scale * hypothesis.scale);
    if (result.C > options.horizon_factor * span)
        throw std::invalid_argument("breather_check: C exceeds the usable horizon");

    const Frame& frame0 = traj.frames.front();
    const Frame& frameT = traj.frame_nearest(hypothesis.t_bar);

    const DiscreteCurve mapped = transform(frame0.curve, hypothesis.isometry, hypothesis.scale);
    result.shape_distance = hausdorff_distance(mapped, frameT.curve);
    const bool shape_match =
        result.shape_distance <= options.shape_tol_rel * frameT.curve.diameter();

    const double sigma0 = sigma(frame0.curve, result.C, options.sigma_options).value;
    const double sigma1 =
        sigma(frameT.curve, result.C - frameT.t, options.sigma_options).value;
    result.sigma_gap = sigma0 - sigma1;

    // Trapezoid rule over the stored frames for the integrated residual at
    // the maximizing centers.
    std::vector<std::pair<double, double>> samples;  // (t, residual)
    for (const Frame& f : traj.frames) {
        if (f.t > frameT.t * (1.0 + 1e-12)) break;
        const double tau = result.C - f.t;
        const DensityReport rep = sigma(f.curve, tau, options.sigma_options);
        samples.emplace_back(f.t, rep.residual);
    }
    for (std::size_t i = 0; i + 1 < samples.size(); ++i)
        result.residual_integral += 0.5 * (samples[i].second + samples[i + 1].second) *
                                    (samples[i + 1].first - samples[i].first);

    result.is_breather = shape_match && result.residual_integral <= options.residual_tol;
    return result;
}

BreatherHypothesis fit_breather_hypothesis(const Trajectory& traj, double t_bar) {
    if (traj.frames.empty()) throw std::invalid_argument("fit_breather_hypothesis: empty trajectory");
    const Frame& frame0 = traj.frames.front();
    const Frame& frameT = traj.frame_nearest(t_bar);

    const CurveGeometry g0 = compute_geometry(frame0.curve);
    const CurveGeometry g1 = compute_geometry(frameT.curve);
    const double scale = g1.length / g0.length;

    auto misfit = [&](double angle, const DiscreteCurve& coarse_target,
                      const std::vector<Vec2>& coarse_pts) {
        const double c = std::cos(angle), s = std::sin(angle);
        double worst = 0.0;
        const int n = coarse_target.size();
        for (const Vec2& x0 : coarse_pts) {
            const Vec2 rel = x0 - g0.centroid;
            const Vec2 p = g1.centroid + scale * Vec2(c * rel.x() - s * rel.y(),
                                                      s * rel.x() + c * rel.y());
            double best = std::numeric_limits<double>::infinity();
            for (int e = 0; e < coarse_target.edge_count(); ++e)
                best = std::min(best, point_segment_distance(p, coarse_target.vertices[e],
                                                             coarse_target.vertices[(e + 1) % n]));
            worst = std::max(worst, best);
        }
        return worst;
    };

    // Subsample the source for the angular grid search.
    std::vector<Vec2> coarse_pts;
    const int stride = std::max(1, frame0.curve.size() / 64);
    for (int i = 0; i < frame0.curve.size(); i += stride) coarse_pts.push_back(frame0.curve.vertices[i]);

    const int grid = 720;
    double best_angle = 0.0, best_val = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / grid;
        const double val = misfit(angle, frameT.curve, coarse_pts);
        if (val < best_val) {
            best_val = val;
            best_angle = angle;
        }
    }

    // Golden-section polish around the best grid angle.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = best_angle - 2.0 * std::numbers::pi / grid;
    double b = best_angle + 2.0 * std::numbers::pi / grid;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = misfit(c, frameT.curve, coarse_pts), fd = misfit(d, frameT.curve, coarse_pts);
    for (int it = 0; it < 40 && b - a > 1e-10; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = misfit(c, frameT.curve, coarse_pts);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = misfit(d, frameT.curve, coarse_pts);
        }
    }
    best_angle = 0.5 * (a + b);

    // x -> scale * (R x + tr) must send centroid0 to centroid1.
    const double ca = std::cos(best_angle), sa = std::sin(best_angle);
    const Vec2 rot_centroid(ca * g0.centroid.x() - sa * g0.centroid.y(),
                            sa * g0.centroid.x() + ca * g0.centroid.y());
    const Vec2 translation = g1.centroid / scale - rot_centroid;
    return {frameT.t, scale, Isometry2{best_angle, translation}};
}

}  // namespace gaussdens
