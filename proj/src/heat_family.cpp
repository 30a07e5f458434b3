#include "gaussdens/heat_family.hpp"

#include "gaussdens/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gaussdens {

namespace {

constexpr double kPi = std::numbers::pi;

void check_kernel(const Eigen::VectorXd& x, const KernelParams& params) {
    if (!(params.scale > 0.0)) throw std::invalid_argument("heat_kernel: scale must be positive");
    if (x.size() != params.center.size())
        throw std::invalid_argument("heat_kernel: dimension mismatch");
}

}  // namespace

double heat_kernel(const Eigen::VectorXd& x, const KernelParams& params) {
    check_kernel(x, params);
    const double d = static_cast<double>(x.size());
    const double r2 = (x - params.center).squaredNorm();
    return std::exp(-r2 / (4.0 * params.scale)) / std::pow(4.0 * kPi * params.scale, 0.5 * d);
}

double log_heat_kernel(const Eigen::VectorXd& x, const KernelParams& params) {
    check_kernel(x, params);
    const double d = static_cast<double>(x.size());
    const double r2 = (x - params.center).squaredNorm();
    return -r2 / (4.0 * params.scale) - 0.5 * d * std::log(4.0 * kPi * params.scale);
}

GaussianMixture::GaussianMixture(std::vector<Atom> atoms_, double base_scale_, int ambient_dim_)
    : atoms(std::move(atoms_)), base_scale(base_scale_), ambient_dim(ambient_dim_) {
    if (atoms.empty()) throw std::invalid_argument("GaussianMixture: needs at least one atom");
    if (!(base_scale > 0.0)) throw std::invalid_argument("GaussianMixture: base scale must be positive");
    if (ambient_dim < 1) throw std::invalid_argument("GaussianMixture: ambient dimension must be >= 1");
    double total = 0.0;
    for (const Atom& a : atoms) {
        if (a.center.size() != ambient_dim)
            throw std::invalid_argument("GaussianMixture: atom dimension mismatch");
        if (!(a.weight > 0.0)) throw std::invalid_argument("GaussianMixture: weights must be positive");
        total += a.weight;
    }
    for (Atom& a : atoms) a.weight /= total;
}

GaussianMixture GaussianMixture::delta(const KernelParams& params) {
    return GaussianMixture({Atom{params.center, 1.0}},
                           params.scale, static_cast<int>(params.center.size()));
}

void GaussianMixture::check_time(double t) const {
    if (!(t >= 0.0) || !(t < base_scale))
        throw std::invalid_argument("GaussianMixture: time must satisfy 0 <= t < base scale");
}

double GaussianMixture::value(const Eigen::VectorXd& x, double t) const {
    check_time(t);
    const double sigma = base_scale - t;
    double sum = 0.0;
    for (const Atom& a : atoms) sum += a.weight * heat_kernel(x, {a.center, sigma});
    return sum;
}

double GaussianMixture::log_value(const Eigen::VectorXd& x, double t) const {
    check_time(t);
    const double sigma = base_scale - t;
    double max_term = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        terms[i] = std::log(atoms[i].weight) + log_heat_kernel(x, {atoms[i].center, sigma});
        max_term = std::max(max_term, terms[i]);
    }
    double acc = 0.0;
    for (double term : terms) acc += std::exp(term - max_term);
    return max_term + std::log(acc);
}

MixtureDerivatives mixture_gradients(const GaussianMixture& m, const Eigen::VectorXd& x, double t) {
    if (!(t >= 0.0) || !(t < m.base_scale))
        throw std::invalid_argument("mixture_gradients: time must satisfy 0 <= t < base scale");
    const double sigma = m.base_scale - t;
    const int d = m.ambient_dim;
    MixtureDerivatives out{0.0, Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Zero(d, d)};
    for (const auto& a : m.atoms) {
        const double u = a.weight * heat_kernel(x, {a.center, sigma});
        const Eigen::VectorXd dx = x - a.center;
        out.value += u;
        out.gradient -= u / (2.0 * sigma) * dx;
        out.hessian += u * (dx * dx.transpose() / (4.0 * sigma * sigma) -
                            Eigen::MatrixXd::Identity(d, d) / (2.0 * sigma));
    }
    return out;
}

LiYauResult li_yau_check(const GaussianMixture& m, const Eigen::VectorXd& x, double t,
                         const Eigen::VectorXd& y, double s, double slack) {
    if (!(s >= 0.0) || s > t || !(t < m.base_scale))
        throw std::invalid_argument("li_yau_check: need 0 <= s <= t < base scale");
    const double d = static_cast<double>(m.ambient_dim);
    const double log_lhs = m.log_value(x, t);
    double log_rhs = m.log_value(y, s) +
                     0.5 * d * std::log((m.base_scale - s) / (m.base_scale - t));
    const double r2 = (x - y).squaredNorm();
    if (t > s)
        log_rhs += r2 / (4.0 * (t - s));
    else if (r2 > 0.0)
        log_rhs = std::numeric_limits<double>::infinity();
    LiYauResult res;
    res.lhs = std::exp(log_lhs);
    res.rhs = std::exp(log_rhs);
    res.holds = log_lhs <= log_rhs + std::log1p(slack);
    return res;
}

double mixture_mass_quadrature(const GaussianMixture& m, double t, int points_per_axis) {
    if (!(t >= 0.0) || !(t < m.base_scale))
        throw std::invalid_argument("mixture_mass_quadrature: bad time");
    if (points_per_axis < 2) throw std::invalid_argument("mixture_mass_quadrature: too few points");
    const int d = m.ambient_dim;
    if (d > 4) throw std::invalid_argument("mixture_mass_quadrature: tensor rule limited to d <= 4");
    const QuadratureRule& rule = gauss_hermite(points_per_axis);
    const int npts = static_cast<int>(rule.nodes.size());
    const double sigma = m.base_scale - t;
    const double jac = std::pow(4.0 * sigma, 0.5 * d);

    // The mixture is split with the unweighted kernel partition of unity
    // mu_i = K_i / sum_j K_j; each piece concentrates at its atom, where the
    // Gauss-Hermite grid is centered with the matching width.
    double total = 0.0;
    std::vector<int> idx(d, 0);
    for (const auto& atom : m.atoms) {
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            Eigen::VectorXd z(d);
            double w = 1.0;
            for (int k = 0; k < d; ++k) {
                z[k] = rule.nodes[idx[k]];
                w *= rule.weights[idx[k]];
            }
            const Eigen::VectorXd x = atom.center + 2.0 * std::sqrt(sigma) * z;
            const double v = m.value(x, t);
            if (v > 0.0) {
                double kernel_sum = 0.0;
                for (const auto& other : m.atoms)
                    kernel_sum += heat_kernel(x, {other.center, sigma});
                const double part = heat_kernel(x, {atom.center, sigma}) / kernel_sum;
                total += jac * w * std::exp(z.squaredNorm()) * part * v;
            }
            int k = 0;
            for (; k < d; ++k) {
                if (++idx[k] < npts) break;
                idx[k] = 0;
            }
            if (k == d) break;
        }
    }
    return total;
}

bool extremality_check(const DiscreteCurve& curve, double tau, const GaussianMixture& m,
                       const KernelParams& best_delta, double slack) {
    if (!(tau > 0.0)) throw std::invalid_argument("extremality_check: tau must be positive");
    if (m.ambient_dim != 2 || best_delta.center.size() != 2)
        throw std::invalid_argument("extremality_check: curve integrals need ambient dimension 2");
    if (std::abs(m.base_scale - tau) > 1e-12 * tau)
        throw std::invalid_argument("extremality_check: mixture base scale must equal tau");

    const CurveQuadrature quad = build_curve_quadrature(curve);
    const double norm = std::sqrt(4.0 * kPi * tau);
    Eigen::VectorXd x(2);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < quad.points.size(); ++i) {
        x << quad.points[i].x(), quad.points[i].y();
        lhs += quad.weights[i] * m.value(x, 0.0);
        rhs += quad.weights[i] * heat_kernel(x, best_delta);
    }
    return norm * lhs <= norm * rhs * (1.0 + slack);
}

double second_term_integrand(const GaussianMixture& m, const Eigen::VectorXd& x, double t,
                             const Eigen::VectorXd& unit_normal, double C) {
    if (!(t >= 0.0) || !(t < C) || !(t < m.base_scale))
        throw std::invalid_argument("second_term_integrand: need 0 <= t < min(C, base scale)");
    const MixtureDerivatives der = mixture_gradients(m, x, t);
    if (der.value <= 0.0) return 0.0;
    const double nn = unit_normal.dot(der.hessian * unit_normal);
    const double gn = der.gradient.dot(unit_normal);
    return nn - gn * gn / der.value + der.value / (2.0 * (C - t));
}

}  // namespace gaussdens
