#pragma once

#include <Eigen/Core>

#include "gaussdens/geometry.hpp"

namespace gaussdens {

struct QuadratureRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

/// Gauss-Legendre rule on [-1, 1] with unit weight, exact for degree 2n-1.
const QuadratureRule& gauss_legendre(int n);

/// Gauss-Hermite rule on the real line with weight exp(-x^2).
const QuadratureRule& gauss_hermite(int n);

/// Flattened per-edge Gauss-Legendre nodes for curve line integrals of
/// position-only integrands.
struct CurveQuadrature {
    std::vector<Vec2> points;
    std::vector<double> weights;  // includes the edge half-length factor
};

CurveQuadrature build_curve_quadrature(const DiscreteCurve& curve, int points_per_edge = 4);

/// Integrate f(x) over the curve with Gauss-Legendre nodes per edge.
template <class F>
double integrate_position(const CurveQuadrature& q, F&& f) {
    double sum = 0.0;
    for (std::size_t i = 0; i < q.points.size(); ++i) sum += q.weights[i] * f(q.points[i]);
    return sum;
}

/// Integrate f(x, k, nu) over the curve; curvature and inner normal are
/// interpolated linearly along every edge from the vertex values (the normal
/// is renormalized).
template <class F>
double integrate_fields(const DiscreteCurve& curve, const CurveGeometry& geom, F&& f,
                        int points_per_edge = 4) {
    const QuadratureRule& rule = gauss_legendre(points_per_edge);
    const int n = curve.size();
    double sum = 0.0;
    for (int e = 0; e < curve.edge_count(); ++e) {
        const int j = (e + 1) % n;
        const Vec2& xa = curve.vertices[e];
        const Vec2& xb = curve.vertices[j];
        const double half = 0.5 * (xb - xa).norm();
        for (int q = 0; q < rule.nodes.size(); ++q) {
            const double lam = 0.5 * (rule.nodes[q] + 1.0);
            const Vec2 x = (1.0 - lam) * xa + lam * xb;
            const double k = (1.0 - lam) * geom.curvature[e] + lam * geom.curvature[j];
            Vec2 nu = (1.0 - lam) * geom.normal[e] + lam * geom.normal[j];
            const double len = nu.norm();
            nu = len > 1e-14 ? Vec2(nu / len) : rot90((xb - xa).normalized());
            sum += half * rule.weights[q] * f(x, k, nu);
        }
    }
    return sum;
}

}  // namespace gaussdens
