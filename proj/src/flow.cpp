#include "gaussdens/flow.hpp"

#include "gaussdens/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace gaussdens {

namespace {

// Cyclic tridiagonal solve via Sherman-Morrison on top of the Thomas
// algorithm. sub[i], diag[i], sup[i] are the coefficients of x[i-1], x[i],
// x[i+1] in row i, with wrap-around in rows 0 and n-1. The system must be
// diagonally dominant (ours is: diag = 1 + |sub| + |sup|).
Eigen::VectorXd solve_tridiagonal(const Eigen::VectorXd& sub, Eigen::VectorXd diag,
                                  const Eigen::VectorXd& sup, Eigen::VectorXd rhs) {
    const int n = static_cast<int>(diag.size());
    for (int i = 1; i < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    Eigen::VectorXd x(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
    return x;
}

Eigen::VectorXd solve_cyclic(const Eigen::VectorXd& sub, const Eigen::VectorXd& diag,
                             const Eigen::VectorXd& sup, const Eigen::VectorXd& rhs) {
    const int n = static_cast<int>(diag.size());
    const double alpha = sup[n - 1];  // row n-1, column 0
    const double beta = sub[0];       // row 0, column n-1
    const double gamma = -diag[0];
    Eigen::VectorXd d = diag;
    d[0] -= gamma;
    d[n - 1] -= alpha * beta / gamma;
    const Eigen::VectorXd y = solve_tridiagonal(sub, d, sup, rhs);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    u[0] = gamma;
    u[n - 1] = alpha;
    const Eigen::VectorXd z = solve_tridiagonal(sub, d, sup, u);
    const double fact = (y[0] + beta * y[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    return y - fact * z;
}

struct TimeFit {
    double T;
    double T_uncertainty;
    double constant;
    bool ok;
};

// Least squares on 1/sup|k|^2 = a + b t over the final steps; the singular
// time is the root of the line, the constant is sqrt(-2/b). Residuals are
// weighted by 1/y^2 so every decade of the blow-up contributes equally.
TimeFit fit_singular_time(const std::vector<StepDiagnostics>& diags) {
    if (diags.size() < 8) return {0.0, 0.0, 0.0, false};
    const double k_final = diags.back().max_curvature;
    std::vector<std::pair<double, double>> pts;
    for (const auto& d : diags) {
        if (d.max_curvature >= 0.25 * k_final && d.max_curvature > 0.0)
            pts.emplace_back(d.t, 1.0 / (d.max_curvature * d.max_curvature));
    }
    if (pts.size() < 8) {
        const std::size_t take = std::min<std::size_t>(diags.size(), 16);
        pts.clear();
        for (std::size_t i = diags.size() - take; i < diags.size(); ++i)
            pts.emplace_back(diags[i].t, 1.0 / (diags[i].max_curvature * diags[i].max_curvature));
    }

    double sw = 0, swt = 0, swtt = 0, swy = 0, swty = 0;
    for (auto [t, y] : pts) {
        const double w = 1.0 / (y * y);
        sw += w;
        swt += w * t;
        swtt += w * t * t;
        swy += w * y;
        swty += w * t * y;
    }
    const double det = sw * swtt - swt * swt;
    if (det == 0.0) return {0.0, 0.0, 0.0, false};
    const double a = (swtt * swy - swt * swty) / det;
    const double b = (sw * swty - swt * swy) / det;
    if (!(b < 0.0)) return {0.0, 0.0, 0.0, false};

    double rss = 0.0;
    for (auto [t, y] : pts) {
        const double r = (y - a - b * t) / y;
        rss += r * r;
    }
    const double dof = std::max<double>(1.0, static_cast<double>(pts.size()) - 2.0);
    const double var_a = (rss / dof) * swtt / det;
    const double var_b = (rss / dof) * sw / det;
    const double T = -a / b;
    // First-order propagation of the intercept/slope uncertainty.
    const double sigma_T =
        std::sqrt(std::max(0.0, var_a / (b * b) + var_b * a * a / (b * b * b * b)));
    return {T, sigma_T, std::sqrt(-2.0 / b), true};
}

}  // namespace

DiscreteCurve mcf_step(const DiscreteCurve& curve, double dt, bool redistribute, double max_cfl) {
    if (!curve.closed) throw std::invalid_argument("mcf_step: flow is defined for closed curves");
    if (!(dt >= 0.0)) throw std::invalid_argument("mcf_step: dt must be nonnegative");
    if (dt == 0.0) return curve;

    const int n = curve.size();
    const auto& v = curve.vertices;
    std::vector<double> h(n);
    double h_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        h[i] = (v[(i + 1) % n] - v[i]).norm();
        h_min = std::min(h_min, h[i]);
    }
    if (dt > max_cfl * h_min * h_min * (1.0 + 1e-9))
        throw std::invalid_argument("mcf_step: dt exceeds the CFL bound");

    Eigen::VectorXd sub(n), diag(n), sup(n), bx(n), by(n);
    for (int i = 0; i < n; ++i) {
        const double h_prev = h[(i + n - 1) % n];
        const double dual = 0.5 * (h_prev + h[i]);
        const double a = 1.0 / (dual * h_prev);
        const double c = 1.0 / (dual * h[i]);
        sub[i] = -dt * a;
        sup[i] = -dt * c;
        diag[i] = 1.0 + dt * (a + c);
        bx[i] = v[i].x();
        by[i] = v[i].y();
    }

    Eigen::VectorXd nx, ny;
    if (n >= 4) {
        nx = solve_cyclic(sub, diag, sup, bx);
        ny = solve_cyclic(sub, diag, sup, by);
    } else {
        Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            full(i, i) = diag[i];
            full(i, (i + n - 1) % n) += sub[i];
            full(i, (i + 1) % n) += sup[i];
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(full);
        nx = lu.solve(bx);
        ny = lu.solve(by);
    }

    std::vector<Vec2> moved(n);
    for (int i = 0; i < n; ++i) moved[i] = Vec2(nx[i], ny[i]);

    double mean_new_edge = 0.0;
    for (int i = 0; i < n; ++i) mean_new_edge += (moved[(i + 1) % n] - moved[i]).norm();
    mean_new_edge /= n;
    for (int i = 0; i < n; ++i) {
        const Vec2 e_new = moved[(i + 1) % n] - moved[i];
        const Vec2 e_old = v[(i + 1) % n] - v[i];
        if (e_new.norm() < 1e-9 * mean_new_edge)
            throw StepRejected("mcf_step: step collapses an edge");
        if (e_new.dot(e_old) <= 0.0)
            throw StepRejected("mcf_step: step inverts local orientation");
    }

    DiscreteCurve next(std::move(moved));
    if (redistribute) next = resample_uniform(next, n);
    return next;
}

const Frame& Trajectory::frame_nearest(double t) const {
    if (frames.empty()) throw std::invalid_argument("Trajectory: no frames");
    const Frame* best = &frames.front();
    for (const Frame& f : frames)
        if (std::abs(f.t - t) < std::abs(best->t - t)) best = &f;
    return *best;
}

Trajectory evolve(const DiscreteCurve& curve, const FlowOptions& options) {
    if (!curve.closed) throw std::invalid_argument("evolve: flow is defined for closed curves");
    if (!(options.c_cfl > 0.0) || options.c_cfl > 1.0)
        throw std::invalid_argument("evolve: c_cfl must lie in (0, 1]");

    Trajectory traj;
    traj.initial_length = compute_geometry(curve).length;
    traj.initial_diameter = curve.diameter();
    traj.frames.push_back({0.0, curve});

    std::vector<double> pending = options.extra_frame_times;
    std::sort(pending.begin(), pending.end());

    DiscreteCurve current = curve;
    double t = 0.0;
    double last_stored_length = traj.initial_length;
    const double length_stop = options.length_stop_rel * traj.initial_length;

    for (long step = 0; step < options.max_steps; ++step) {
        const double h_min = current.min_edge_length();
        double dt = options.c_cfl * h_min * h_min;

        DiscreteCurve next = current;
        bool stepped = false;
        for (int attempt = 0; attempt < 40 && !stepped; ++attempt) {
            try {
                next = mcf_step(current, dt, options.redistribute);
                stepped = true;
            } catch (const StepRejected&) {
                dt *= 0.5;
            }
        }
        if (!stepped || dt < 1e-18 * traj.initial_length * traj.initial_length) {
            traj.truncated = true;
            traj.flag_reason = "step rejection cascade";
            break;
        }

        t += dt;
        current = std::move(next);
        const CurveGeometry geom = compute_geometry(current);
        const double k_max = geom.max_abs_curvature();
        traj.step_diagnostics.push_back({t, dt, k_max, current.min_edge_length(), geom.length});

        bool store = geom.length <= options.frame_length_ratio * last_stored_length;
        while (!pending.empty() && t >= pending.front()) {
            pending.erase(pending.begin());
            store = true;
        }
        const bool stop = k_max * traj.initial_diameter > options.curvature_stop ||
                          geom.length < length_stop;
        if (store || stop) {
            traj.frames.push_back({t, current});
            last_stored_length = geom.length;
        }
        if (stop) break;
        if (step + 1 == options.max_steps) {
            traj.truncated = true;
            traj.flag_reason = "max step count reached";
        }
    }

    const TimeFit fit = fit_singular_time(traj.step_diagnostics);
    if (fit.ok) {
        traj.estimated_T = fit.T;
        traj.estimated_T_uncertainty = fit.T_uncertainty;
        traj.curvature_fit_constant = fit.constant;
    } else {
        traj.truncated = true;
        if (!traj.flag_reason.empty()) traj.flag_reason += "; ";
        traj.flag_reason += "singular-time fit failed";
        traj.estimated_T = traj.frames.back().t;
    }
    return traj;
}

SphereState sphere_evolve(const SphereState& s, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("sphere_evolve: time must be nonnegative");
    const double T = s.radius * s.radius / (2.0 * s.n);
    if (t >= T) throw std::invalid_argument("sphere_evolve: time is past the vanishing time");
    return SphereState(s.center, std::sqrt(s.radius * s.radius - 2.0 * s.n * t), s.n);
}

HamiltonDecomposition hamilton_decomposition(const DiscreteCurve& curve, const GaussianMixture& m,
                                             double C, double t) {
    if (m.ambient_dim != 2)
        throw std::invalid_argument("hamilton_decomposition: curve integrals need ambient dimension 2");
    if (!(t >= 0.0) || !(t < C) || !(t < m.base_scale))
        throw std::invalid_argument("hamilton_decomposition: need 0 <= t < min(C, base scale)");

    const CurveGeometry geom = compute_geometry(curve);
    const double root = std::sqrt(2.0 * (C - t));
    Eigen::VectorXd xv(2), nv(2);

    double term1 = 0.0, term2 = 0.0;
    term1 = integrate_fields(curve, geom, [&](const Vec2& x, double k, const Vec2& nu) {
        xv << x.x(), x.y();
        const MixtureDerivatives der = mixture_gradients(m, xv, t);
        if (der.value <= 0.0) return 0.0;
        const double gn = der.gradient.x() * nu.x() + der.gradient.y() * nu.y();
        const double diff = k - gn / der.value;
        return der.value * diff * diff;
    });
    term2 = integrate_fields(curve, geom, [&](const Vec2& x, double, const Vec2& nu) {
        xv << x.x(), x.y();
        nv << nu.x(), nu.y();
        return second_term_integrand(m, xv, t, nv, C);
    });

    HamiltonDecomposition out;
    out.shrinker_term = -root * term1;
    out.kernel_term = -root * term2;
    out.total = out.shrinker_term + out.kernel_term;
    return out;
}

}  // namespace gaussdens
