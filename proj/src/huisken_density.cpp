#include "gaussdens/huisken_density.hpp"

#include "gaussdens/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gaussdens {

namespace {

constexpr double kPi = std::numbers::pi;

double check_tau(double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("kernel scale tau must be positive");
    return tau;
}

struct Candidate {
    Vec2 p = Vec2::Zero();
    double value = -std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

// Mean-shift ascent for the Gaussian-weighted length: the stationarity
// condition of the center is exactly the weighted-mean fixed point.
Candidate mean_shift(const CurveQuadrature& quad, double tau, Vec2 p, double step_tol,
                     int max_iters) {
    Candidate out;
    const double inv4tau = 1.0 / (4.0 * tau);
    double total_weight = 0.0;
    for (double w : quad.weights) total_weight += w;

    for (int iter = 0; iter < max_iters; ++iter) {
        Vec2 num = Vec2::Zero();
        double den = 0.0;
        for (std::size_t i = 0; i < quad.points.size(); ++i) {
            const double g = quad.weights[i] * std::exp(-(quad.points[i] - p).squaredNorm() * inv4tau);
            num += g * quad.points[i];
            den += g;
        }
        out.iterations = iter + 1;
        if (den <= 1e-280 * total_weight) {
            out.p = p;
            out.converged = false;
            return out;  // start is in the Gaussian tail of the whole curve
        }
        const Vec2 next = num / den;
        const double move = (next - p).norm();
        p = next;
        if (move <= step_tol) {
            out.converged = true;
            break;
        }
    }
    out.p = p;
    return out;
}

// Two-dimensional Nelder-Mead maximization polish.
template <class F>
Candidate nelder_mead(F&& f, Vec2 start, double init_size, double size_tol, int max_iters) {
    struct Pt {
        Vec2 x;
        double v;
    };
    std::array<Pt, 3> s = {Pt{start, f(start)},
                           Pt{start + Vec2(init_size, 0.0), f(start + Vec2(init_size, 0.0))},
                           Pt{start + Vec2(0.0, init_size), f(start + Vec2(0.0, init_size))}};
    auto order = [&] { std::sort(s.begin(), s.end(), [](const Pt& a, const Pt& b) { return a.v > b.v; }); };
    order();

    Candidate out;
    int iter = 0;
    for (; iter < max_iters; ++iter) {
        const double size = std::max((s[0].x - s[2].x).norm(), (s[1].x - s[2].x).norm());
        const double spread = std::abs(s[0].v - s[2].v);
        if (size <= size_tol || spread <= 1e-14 * std::abs(s[0].v)) {
            out.converged = true;
            break;
        }
        const Vec2 centroid = 0.5 * (s[0].x + s[1].x);
        const Vec2 refl = centroid + (centroid - s[2].x);
        const double refl_v = f(refl);
        if (refl_v > s[0].v) {
            const Vec2 exp_pt = centroid + 2.0 * (centroid - s[2].x);
            const double exp_v = f(exp_pt);
            s[2] = exp_v > refl_v ? Pt{exp_pt, exp_v} : Pt{refl, refl_v};
        } else if (refl_v > s[1].v) {
            s[2] = Pt{refl, refl_v};
        } else {
            const Vec2 con = centroid + 0.5 * (s[2].x - centroid);
            const double con_v = f(con);
            if (con_v > s[2].v) {
                s[2] = Pt{con, con_v};
            } else {
                for (int i = 1; i < 3; ++i) {
                    s[i].x = s[0].x + 0.5 * (s[i].x - s[0].x);
                    s[i].v = f(s[i].x);
                }
            }
        }
        order();
    }
    out.p = s[0].x;
    out.value = s[0].v;
    out.iterations = iter;
    return out;
}

}  // namespace

double huisken_functional(const CurveQuadrature& quad, const Vec2& p, double tau) {
    check_tau(tau);
    const double inv4tau = 1.0 / (4.0 * tau);
    const double norm = 1.0 / std::sqrt(4.0 * kPi * tau);
    double sum = 0.0;
    for (std::size_t i = 0; i < quad.points.size(); ++i)
        sum += quad.weights[i] * std::exp(-(quad.points[i] - p).squaredNorm() * inv4tau);
    return norm * sum;
}

double huisken_functional(const DiscreteCurve& curve, const Vec2& p, double tau,
                          int points_per_edge) {
    return huisken_functional(build_curve_quadrature(curve, points_per_edge), p, tau);
}

double huisken_functional(const DiscreteCurve& curve, const KernelParams& params) {
    if (params.center.size() != 2)
        throw std::invalid_argument("huisken_functional: center must be planar");
    return huisken_functional(curve, Vec2(params.center[0], params.center[1]), params.scale);
}

DensityReport sigma(const DiscreteCurve& curve, double tau, const SigmaOptions& options) {
    check_tau(tau);
    const CurveGeometry geom = compute_geometry(curve);
    const CurveQuadrature quad = build_curve_quadrature(curve, options.points_per_edge);

    // All optimizer thresholds are relative to this spatial scale, so the
    // whole search commutes with rescaling and translation.
    const double extent = (geom.bbox_max - geom.bbox_min).norm();
    const double space_scale = std::max(std::sqrt(tau), 0.5 * extent);

    std::vector<Vec2> starts;
    starts.push_back(geom.centroid);
    const double inflate = 2.0 * std::sqrt(tau);
    const Vec2 lo = geom.bbox_min - Vec2(inflate, inflate);
    const Vec2 hi = geom.bbox_max + Vec2(inflate, inflate);
    for (int i = 0; i < options.grid; ++i) {
        for (int j = 0; j < options.grid; ++j) {
            const double fx = options.grid == 1 ? 0.5 : static_cast<double>(i) / (options.grid - 1);
            const double fy = options.grid == 1 ? 0.5 : static_cast<double>(j) / (options.grid - 1);
            starts.push_back(Vec2(lo.x() + fx * (hi.x() - lo.x()), lo.y() + fy * (hi.y() - lo.y())));
        }
    }

    auto objective = [&](const Vec2& p) { return huisken_functional(quad, p, tau); };

    std::vector<Candidate> results(starts.size());
    parallel_for(static_cast<int>(starts.size()), [&](int i) {
        Candidate ms = mean_shift(quad, tau, starts[i], 1e-11 * space_scale,
                                  options.max_mean_shift_iters);
        Candidate polished = nelder_mead(objective, ms.p, 0.02 * space_scale,
                                         1e-11 * space_scale, options.max_polish_iters);
        polished.iterations += ms.iterations;
        polished.converged = polished.converged && (ms.converged || polished.value > 0.0);
        results[i] = polished;
    });

    // Deterministic reduction: best value, ties broken by distance to the
    // centroid and then lexicographically.
    const Candidate* best = &results[0];
    for (const Candidate& c : results) {
        if (c.value > best->value * (1.0 + 1e-12)) {
            best = &c;
        } else if (c.value >= best->value * (1.0 - 1e-12)) {
            const double dc = (c.p - geom.centroid).norm();
            const double db = (best->p - geom.centroid).norm();
            if (dc < db * (1.0 - 1e-12) ||
                (dc <= db * (1.0 + 1e-12) &&
                 (c.p.x() < best->p.x() || (c.p.x() == best->p.x() && c.p.y() < best->p.y()))))
                best = &c;
        }
    }

    DensityReport report;
    report.value = best->value;
    report.maximizer_center = best->p;
    report.residual = shrinker_residual(curve, geom, best->p, tau, options.points_per_edge);
    report.diagnostics.restarts = static_cast<int>(starts.size());
    for (const Candidate& c : results) report.diagnostics.iterations += c.iterations;
    report.diagnostics.converged = best->converged;
    report.diagnostics.quadrature_error =
        std::abs(huisken_functional(curve, best->p, tau, 8) - best->value);
    return report;
}

double sigma_sphere(const SphereState& s, double tau) {
    check_tau(tau);
    const double area = sphere_geometry(s).area;
    return area * std::exp(-s.radius * s.radius / (4.0 * tau)) /
           std::pow(4.0 * kPi * tau, 0.5 * s.n);
}

DensityReport nu(const DiscreteCurve& curve, const NuOptions& options) {
    const CurveGeometry geom = compute_geometry(curve);
    const double tau_lo = 4.0 * curve.max_edge_length() * curve.max_edge_length();

    struct Sample {
        double log_tau;
        DensityReport report;
    };
    std::vector<Sample> scan;
    auto eval = [&](double log_tau) -> DensityReport {
        return sigma(curve, std::exp(log_tau), options.sigma_options);
    };

    // Coarse scan upward in log tau until the length bound rules out any
    // larger scale.
    const double step = 0.5 * std::log(2.0);
    double best_value = 0.0;
    bool bracketed = false;
    for (int k = 0; k < options.max_scan; ++k) {
        const double log_tau = std::log(tau_lo) + step * k;
        scan.push_back({log_tau, eval(log_tau)});
        best_value = std::max(best_value, scan.back().report.value);
        const double bound = geom.length / std::sqrt(4.0 * kPi * std::exp(log_tau));
        if (k >= 2 && bound < 0.5 * best_value) {
            bracketed = true;
            break;
        }
    }

    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < scan.size(); ++i)
        if (scan[i].report.value > scan[best_idx].report.value) best_idx = i;

    double a = scan[best_idx > 0 ? best_idx - 1 : 0].log_tau;
    double b = scan[std::min(best_idx + 1, scan.size() - 1)].log_tau;

    // Golden-section refinement on log tau.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    DensityReport rc = eval(c), rd = eval(d);
    int golden_iters = 0;
    while (b - a > options.golden_tol) {
        if (rc.value >= rd.value) {
            b = d;
            d = c;
            rd = rc;
            c = b - gr * (b - a);
            rc = eval(c);
        } else {
            a = c;
            c = d;
            rc = rd;
            d = a + gr * (b - a);
            rd = eval(d);
        }
        ++golden_iters;
    }

    DensityReport result = rc.value >= rd.value ? rc : rd;
    const double log_tau_star = rc.value >= rd.value ? c : d;
    if (scan[best_idx].report.value > result.value) {
        result = scan[best_idx].report;
        result.maximizer_scale = std::exp(scan[best_idx].log_tau);
    } else {
        result.maximizer_scale = std::exp(log_tau_star);
    }
    result.diagnostics.restarts = static_cast<int>(scan.size()) + 2 * golden_iters;
    result.diagnostics.converged = result.diagnostics.converged && bracketed;
    return result;
}

double shrinker_residual(const DiscreteCurve& curve, const CurveGeometry& geom, const Vec2& p,
                         double tau, int points_per_edge) {
    check_tau(tau);
    const double inv4tau = 1.0 / (4.0 * tau);
    const double norm = 1.0 / std::sqrt(4.0 * kPi * tau);
    return integrate_fields(
        curve, geom,
        [&](const Vec2& x, double k, const Vec2& nu) {
            const Vec2 dx = x - p;
            const double defect = k + dx.dot(nu) / (2.0 * tau);
            return norm * std::exp(-dx.squaredNorm() * inv4tau) * defect * defect;
        },
        points_per_edge);
}

double shrinker_residual(const DiscreteCurve& curve, const KernelParams& params) {
    if (params.center.size() != 2)
        throw std::invalid_argument("shrinker_residual: center must be planar");
    return shrinker_residual(curve, compute_geometry(curve),
                             Vec2(params.center[0], params.center[1]), params.scale);
}

bool frame_is_reliable(const CurveGeometry& geom, double min_edge, double threshold) {
    return geom.max_abs_curvature() * min_edge <= threshold;
}

namespace {

// Select frames at scales near tau_last * {1, 2, 4} and extrapolate the
// sampled values to scale zero with the quadratic Lagrange polynomial. The
// geometric spacing keeps the extrapolation well conditioned.
template <class Eval>
LimitEstimate extrapolate_to_singular_time(const Trajectory& traj, Eval&& eval) {
    const double T = traj.estimated_T;
    if (!(T > 0.0)) throw std::invalid_argument("trajectory lacks a singular-time estimate");

    std::vector<std::pair<double, const Frame*>> usable;  // (tau, frame)
    for (const Frame& f : traj.frames) {
        if (f.t >= T) continue;
        const CurveGeometry g = compute_geometry(f.curve);
        if (frame_is_reliable(g, f.curve.min_edge_length())) usable.emplace_back(T - f.t, &f);
    }
    if (usable.empty())
        throw std::invalid_argument("no usable frames before the singular time");
    std::sort(usable.begin(), usable.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    const double tau_last = usable.front().first;
    std::vector<std::size_t> picks;
    for (double target : {tau_last, 2.0 * tau_last, 4.0 * tau_last}) {
        std::size_t best = 0;
        double best_err = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < usable.size(); ++i) {
            const double err = std::abs(std::log(usable[i].first / target));
            if (err < best_err) {
                best_err = err;
                best = i;
            }
        }
        if (std::find(picks.begin(), picks.end(), best) == picks.end()) picks.push_back(best);
    }

    LimitEstimate out;
    if (picks.size() < 3) {
        out.value = eval(*usable.front().second, tau_last);
        out.frames_used = 1;
        out.extrapolated = false;
        return out;
    }

    std::array<double, 3> taus{}, vals{};
    for (int j = 0; j < 3; ++j) {
        taus[j] = usable[picks[j]].first;
        vals[j] = eval(*usable[picks[j]].second, taus[j]);
    }
    double value = 0.0;
    for (int j = 0; j < 3; ++j) {
        double coeff = 1.0;
        for (int mth = 0; mth < 3; ++mth)
            if (mth != j) coeff *= (0.0 - taus[mth]) / (taus[j] - taus[mth]);
        value += coeff * vals[j];
    }
    out.value = value;
    out.frames_used = 3;
    out.extrapolated = true;
    return out;
}

}  // namespace

LimitEstimate theta_estimate(const Trajectory& traj, const Vec2& p) {
    return extrapolate_to_singular_time(
        traj, [&](const Frame& f, double tau) { return huisken_functional(f.curve, p, tau); });
}

LimitEstimate sigma_limit_estimate(const Trajectory& traj, const SigmaOptions& options) {
    return extrapolate_to_singular_time(
        traj, [&](const Frame& f, double tau) { return sigma(f.curve, tau, options).value; });
}

}  // namespace gaussdens
