#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gaussdens/quadrature.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace gaussdens;

TEST_CASE("four-point Gauss-Legendre matches the tabulated rule") {
    const QuadratureRule& rule = gauss_legendre(4);
    REQUIRE(rule.nodes.size() == 4);
    // Standard nodes/weights of the 4-point rule on [-1, 1].
    CHECK(rule.nodes[0] == doctest::Approx(-0.8611363115940526).epsilon(1e-13));
    CHECK(rule.nodes[1] == doctest::Approx(-0.3399810435848563).epsilon(1e-13));
    CHECK(rule.nodes[2] == doctest::Approx(0.3399810435848563).epsilon(1e-13));
    CHECK(rule.nodes[3] == doctest::Approx(0.8611363115940526).epsilon(1e-13));
    CHECK(rule.weights[0] == doctest::Approx(0.3478548451374538).epsilon(1e-13));
    CHECK(rule.weights[1] == doctest::Approx(0.6521451548625461).epsilon(1e-13));
}

TEST_CASE("Gauss-Legendre is exact to degree 2n-1") {
    for (int n : {2, 4, 8}) {
        const QuadratureRule& rule = gauss_legendre(n);
        for (int deg = 0; deg <= 2 * n - 1; ++deg) {
            double sum = 0.0;
            for (int q = 0; q < rule.nodes.size(); ++q)
                sum += rule.weights[q] * std::pow(rule.nodes[q], deg);
            const double exact = deg % 2 == 0 ? 2.0 / (deg + 1) : 0.0;
            CHECK(sum == doctest::Approx(exact).epsilon(1e-12));
        }
    }
}

TEST_CASE("Gauss-Hermite integrates Gaussian moments") {
    const QuadratureRule& rule = gauss_hermite(20);
    double mass = 0.0, second = 0.0, fourth = 0.0;
    for (int q = 0; q < rule.nodes.size(); ++q) {
        mass += rule.weights[q];
        second += rule.weights[q] * rule.nodes[q] * rule.nodes[q];
        fourth += rule.weights[q] * std::pow(rule.nodes[q], 4);
    }
    const double root_pi = std::sqrt(oracles::kPi);
    CHECK(mass == doctest::Approx(root_pi).epsilon(1e-13));
    CHECK(second == doctest::Approx(0.5 * root_pi).epsilon(1e-13));
    CHECK(fourth == doctest::Approx(0.75 * root_pi).epsilon(1e-13));
}

TEST_CASE("curve quadrature weights sum to the length") {
    const DiscreteCurve circle = make_regular_polygon(64, 1.0);
    const CurveQuadrature quad = build_curve_quadrature(circle);
    double total = 0.0;
    for (double w : quad.weights) total += w;
    CHECK(total == doctest::Approx(compute_geometry(circle).length).epsilon(1e-13));
}

TEST_CASE("field integration reproduces the total turning") {
    const DiscreteCurve circle = make_regular_polygon(128, 2.0);
    const CurveGeometry geom = compute_geometry(circle);
    const double turning =
        integrate_fields(circle, geom, [](const Vec2&, double k, const Vec2&) { return k; });
    CHECK(turning == doctest::Approx(geom.total_turning()).epsilon(1e-12));
}
