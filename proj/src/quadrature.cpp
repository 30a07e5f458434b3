#include "gaussdens/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace gaussdens {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix of the
// orthogonal-polynomial recurrence, weights come from the first components
// of the eigenvectors.
QuadratureRule golub_welsch(const Eigen::VectorXd& offdiag, double weight_total) {
    const int n = static_cast<int>(offdiag.size()) + 1;
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        jacobi(i, i + 1) = offdiag[i];
        jacobi(i + 1, i) = offdiag[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    QuadratureRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights.resize(n);
    for (int j = 0; j < n; ++j) {
        const double v0 = es.eigenvectors()(0, j);
        rule.weights[j] = weight_total * v0 * v0;
    }
    return rule;
}

const QuadratureRule& cached(std::map<int, QuadratureRule>& cache, std::mutex& mu, int n,
                             QuadratureRule (*make)(int)) {
    std::scoped_lock lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make(n)).first;
    return it->second;
}

QuadratureRule make_legendre(int n) {
    Eigen::VectorXd off(n - 1);
    for (int k = 1; k < n; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    return golub_welsch(off, 2.0);
}

QuadratureRule make_hermite(int n) {
    Eigen::VectorXd off(n - 1);
    for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(0.5 * k);
    return golub_welsch(off, std::sqrt(std::numbers::pi));
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mu;
    return cached(cache, mu, n, make_legendre);
}

const QuadratureRule& gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
    static std::map<int, QuadratureRule> cache;
    static std::mutex mu;
    return cached(cache, mu, n, make_hermite);
}

CurveQuadrature build_curve_quadrature(const DiscreteCurve& curve, int points_per_edge) {
    const QuadratureRule& rule = gauss_legendre(points_per_edge);
    const int n = curve.size();
    CurveQuadrature out;
    out.points.reserve(static_cast<std::size_t>(curve.edge_count()) * points_per_edge);
    out.weights.reserve(out.points.capacity());
    for (int e = 0; e < curve.edge_count(); ++e) {
        const Vec2& xa = curve.vertices[e];
        const Vec2& xb = curve.vertices[(e + 1) % n];
        const double half = 0.5 * (xb - xa).norm();
        for (int q = 0; q < rule.nodes.size(); ++q) {
            const double lam = 0.5 * (rule.nodes[q] + 1.0);
            out.points.push_back((1.0 - lam) * xa + lam * xb);
            out.weights.push_back(half * rule.weights[q]);
        }
    }
    return out;
}

}  // namespace gaussdens
