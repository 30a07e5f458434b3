#pragma once

#include <Eigen/Core>

#include "gaussdens/geometry.hpp"

#include <vector>

namespace gaussdens {

/// Gaussian kernel center and scale.
struct KernelParams {
    Eigen::VectorXd center;
    double scale = 1.0;  // must be positive
};

inline KernelParams make_kernel_params(const Vec2& p, double tau) {
    return {Eigen::Vector2d(p), tau};
}

/// Heat kernel of R^d at scale tau: exp(-|x-p|^2 / 4 tau) / (4 pi tau)^{d/2}.
double heat_kernel(const Eigen::VectorXd& x, const KernelParams& params);
double log_heat_kernel(const Eigen::VectorXd& x, const KernelParams& params);

/// Finite atomic probability measure convolved with the heat kernel at a base
/// scale tau: value(x, t) = sum_i w_i K(x, c_i, tau - t) for t in [0, tau).
/// This solves the backward heat equation v_t = -Delta v with v(., 0) of unit
/// mass. Weights are normalized at construction.
struct GaussianMixture {
    struct Atom {
        Eigen::VectorXd center;
        double weight;
    };

    std::vector<Atom> atoms;
    double base_scale;
    int ambient_dim;

    GaussianMixture(std::vector<Atom> atoms_, double base_scale_, int ambient_dim_);

    double value(const Eigen::VectorXd& x, double t) const;
    double log_value(const Eigen::VectorXd& x, double t) const;

    /// Single heat kernel as a one-atom mixture.
    static GaussianMixture delta(const KernelParams& params);

private:
    void check_time(double t) const;
};

struct MixtureDerivatives {
    double value;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
};

/// Analytic value, gradient and Hessian in x of the mixture at time t.
MixtureDerivatives mixture_gradients(const GaussianMixture& m, const Eigen::VectorXd& x, double t);

struct LiYauResult {
    double lhs;
    double rhs;
    bool holds;
};

/// Backward Li-Yau Harnack comparison for 0 <= s <= t < tau:
///   v(x,t) <= v(y,s) ((tau-s)/(tau-t))^{d/2} exp(|x-y|^2 / (4(t-s))).
/// Evaluated in log space; `holds` allows a multiplicative slack.
LiYauResult li_yau_check(const GaussianMixture& m, const Eigen::VectorXd& x, double t,
                         const Eigen::VectorXd& y, double s, double slack = 1e-12);

/// Total mass of the mixture at time t by tensor Gauss-Hermite quadrature
/// centered on the atoms (the analytic answer is 1; this exercises the
/// numerical path).
double mixture_mass_quadrature(const GaussianMixture& m, double t, int points_per_axis = 32);

/// Checks that the weighted-curve integral of the mixture does not exceed the
/// integral of the best single kernel: sqrt(4 pi tau) Int_M m(.,0) dmu <=
/// sqrt(4 pi tau) Int_M K(., p*, tau) dmu, up to a multiplicative slack.
bool extremality_check(const DiscreteCurve& curve, double tau, const GaussianMixture& m,
                       const KernelParams& best_delta, double slack = 1e-12);

/// Pointwise integrand of the second term of the two-term monotonicity
/// decomposition: nu^T Hess(u) nu - <grad u, nu>^2 / u + u / (2 (C - t)).
/// Vanishes identically when the mixture is a single kernel with base scale C.
double second_term_integrand(const GaussianMixture& m, const Eigen::VectorXd& x, double t,
                             const Eigen::VectorXd& unit_normal, double C);

}  // namespace gaussdens
