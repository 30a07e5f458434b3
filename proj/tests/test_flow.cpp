#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gaussdens/flow.hpp"
#include "gaussdens/huisken_density.hpp"
#include "gaussdens/quadrature.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace gaussdens;

namespace {

// Shared trajectories; built once because several cases reuse them.
const Trajectory& circle_trajectory() {
    static const Trajectory traj = [] {
        FlowOptions opts;
        opts.extra_frame_times = {0.25};
        return evolve(make_regular_polygon(128, 1.0), opts);
    }();
    return traj;
}

double mean_radius(const DiscreteCurve& c) {
    double sum = 0.0;
    for (const Vec2& v : c.vertices) sum += v.norm();
    return sum / c.size();
}

}  // namespace

TEST_CASE("a single step shrinks the circle radius") {
    const DiscreteCurve circle = make_regular_polygon(256, 1.0);
    const double dt = 1e-4;
    const DiscreteCurve next = mcf_step(circle, dt);
    const double expected = oracles::circle_radius_at(1.0, dt);
    for (const Vec2& v : next.vertices)
        CHECK(v.norm() == doctest::Approx(expected).epsilon(1e-7));
}

TEST_CASE("zero step is the identity") {
    const DiscreteCurve shape = make_ellipse(64, 2.0, 1.0);
    const DiscreteCurve same = mcf_step(shape, 0.0);
    for (int i = 0; i < shape.size(); ++i)
        CHECK((same.vertices[i] - shape.vertices[i]).norm() == 0.0);
}

TEST_CASE("step preconditions") {
    const DiscreteCurve circle = make_regular_polygon(64, 1.0);
    CHECK_THROWS_AS(mcf_step(circle, -1e-4), std::invalid_argument);
    const double h = circle.min_edge_length();
    CHECK_THROWS_AS(mcf_step(circle, 10.0 * h * h), std::invalid_argument);
    CHECK_THROWS_AS(mcf_step(make_segment(Vec2(0, 0), Vec2(1, 0), 8), 1e-6),
                    std::invalid_argument);
}

TEST_CASE("one step preserves convexity of the ellipse") {
    const DiscreteCurve shape = make_ellipse(512, 2.0, 1.0);
    const double h = shape.min_edge_length();
    const DiscreteCurve next = mcf_step(shape, 0.25 * h * h);
    const CurveGeometry geom = compute_geometry(next);
    for (double k : geom.curvature) CHECK(k > 0.0);
}

TEST_CASE("evolved circle vanishes at the exact time") {
    const Trajectory& traj = circle_trajectory();
    CHECK(std::abs(traj.estimated_T - 0.5) < 1e-3);
    CHECK_FALSE(traj.truncated);
    CHECK(traj.curvature_fit_constant == doctest::Approx(1.0).epsilon(2e-2));
}

TEST_CASE("circle of radius two vanishes at two") {
    const Trajectory traj = evolve(make_regular_polygon(128, 2.0));
    CHECK(std::abs(traj.estimated_T - 2.0) < 4e-3);
}

TEST_CASE("ellipse vanishing time sits between the comparison circles") {
    const Trajectory traj = evolve(make_ellipse(256, 2.0, 1.0));
    CHECK(traj.estimated_T > 0.5);
    CHECK(traj.estimated_T < 1.0);
}

TEST_CASE("trajectory invariants") {
    const Trajectory& traj = circle_trajectory();
    REQUIRE(traj.frames.size() > 10);
    CHECK(traj.frames.front().t == 0.0);
    double prev_t = -1.0, prev_len = 1e300;
    for (const Frame& f : traj.frames) {
        CHECK(f.t > prev_t);
        const double len = compute_geometry(f.curve).length;
        CHECK(len < prev_len * (1.0 + 1e-12));
        prev_t = f.t;
        prev_len = len;
    }
}

TEST_CASE("evolved circle tracks the closed-form sphere flow at second order") {
    const SphereState s0(Eigen::VectorXd::Zero(2), 1.0, 1);
    auto worst_deviation = [&](const Trajectory& traj) {
        double worst = 0.0;
        for (const Frame& f : traj.frames) {
            if (f.t > 0.45) break;
            const double exact = sphere_evolve(s0, f.t).radius;
            worst = std::max(worst, std::abs(mean_radius(f.curve) - exact));
        }
        return worst;
    };
    const double dev_coarse = worst_deviation(circle_trajectory());
    const double dev_fine = worst_deviation(evolve(make_regular_polygon(256, 1.0)));
    const double h2_coarse = std::pow(2.0 * oracles::kPi / 128, 2);
    const double h2_fine = std::pow(2.0 * oracles::kPi / 256, 2);
    CHECK(dev_coarse < h2_coarse);
    CHECK(dev_fine < h2_fine);
    CHECK(dev_coarse / dev_fine > 2.5);
}

TEST_CASE("curvature lower bound along the flow") {
    const Trajectory& traj = circle_trajectory();
    const double T = traj.estimated_T;
    for (const Frame& f : traj.frames) {
        if (f.t >= T) continue;
        const double k_max = compute_geometry(f.curve).max_abs_curvature();
        CHECK(k_max * std::sqrt(2.0 * (T - f.t)) >= 1.0 - 0.05);
    }
}

TEST_CASE("Huisken functional is nonincreasing for fixed probes") {
    const Trajectory& traj = circle_trajectory();
    const double C = traj.estimated_T;
    for (const Vec2& p : {Vec2(0.0, 0.0), Vec2(0.3, 0.2)}) {
        double prev = 1e300;
        for (const Frame& f : traj.frames) {
            if (f.t >= C) break;
            const double value = huisken_functional(f.curve, p, C - f.t);
            CHECK(value <= prev + 1e-5);
            prev = value;
        }
    }
}

TEST_CASE("avoidance of concentric circles") {
    const Trajectory outer = evolve(make_regular_polygon(128, 1.0));
    const Trajectory inner = evolve(make_regular_polygon(128, 0.5));
    for (const Frame& f : inner.frames) {
        const Frame& o = outer.frame_nearest(f.t);
        if (std::abs(o.t - f.t) > 5e-3) continue;
        double inner_max = 0.0, outer_min = 1e300;
        for (const Vec2& v : f.curve.vertices) inner_max = std::max(inner_max, v.norm());
        for (const Vec2& v : o.curve.vertices) outer_min = std::min(outer_min, v.norm());
        CHECK(outer_min - inner_max > 0.3);
    }
}

TEST_CASE("sphere flow closed forms") {
    const SphereState unit_circle(Eigen::VectorXd::Zero(2), 1.0, 1);
    CHECK(sphere_evolve(unit_circle, 0.375).radius == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(sphere_evolve(unit_circle, 0.0).radius == 1.0);

    const SphereState two_sphere(Eigen::VectorXd::Zero(3), 1.0, 2);
    // Vanishing time R0^2 / (2n) = 0.25: just below works, at T rejects.
    CHECK_NOTHROW(sphere_evolve(two_sphere, 0.2499));
    CHECK_THROWS_AS(sphere_evolve(two_sphere, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(sphere_evolve(two_sphere, -0.1), std::invalid_argument);
}

TEST_CASE("Hamilton decomposition") {
    const DiscreteCurve circle = make_regular_polygon(256, 1.0);

    SUBCASE("kernel term vanishes for a single kernel") {
        Eigen::VectorXd p(2);
        p << 0.3, -0.2;
        const GaussianMixture m = GaussianMixture::delta({p, 0.8});
        const HamiltonDecomposition dec = hamilton_decomposition(circle, m, 0.8, 0.1);
        CHECK(std::abs(dec.kernel_term) < 1e-12);
        CHECK(dec.total == dec.shrinker_term + dec.kernel_term);
    }
    SUBCASE("the matched shrinking circle kills the first term") {
        const GaussianMixture m = GaussianMixture::delta({Eigen::VectorXd::Zero(2), 0.5});
        const HamiltonDecomposition dec = hamilton_decomposition(circle, m, 0.5, 0.0);
        CHECK(std::abs(dec.shrinker_term) < 1e-7);
        CHECK(std::abs(dec.kernel_term) < 1e-12);
    }
    SUBCASE("total derivative matches the flow finite difference") {
        const DiscreteCurve fine = make_regular_polygon(512, 1.0);
        Eigen::VectorXd p(2);
        p << 0.3, 0.1;
        const double C = 0.7;
        const GaussianMixture m = GaussianMixture::delta({p, C});
        auto weighted_mass = [&](const DiscreteCurve& c, double t) {
            const CurveQuadrature quad = build_curve_quadrature(c);
            Eigen::VectorXd xv(2);
            double sum = 0.0;
            for (std::size_t i = 0; i < quad.points.size(); ++i) {
                xv << quad.points[i].x(), quad.points[i].y();
                sum += quad.weights[i] * m.value(xv, t);
            }
            return std::sqrt(2.0 * (C - t)) * sum;
        };
        const double dt = 1e-5;
        const DiscreteCurve next = mcf_step(fine, dt, /*redistribute=*/false);
        const double fd = (weighted_mass(next, dt) - weighted_mass(fine, 0.0)) / dt;
        const double analytic = 0.5 * (hamilton_decomposition(fine, m, C, 0.0).total +
                                       hamilton_decomposition(next, m, C, dt).total);
        CHECK(std::abs(fd - analytic) / std::abs(analytic) < 1e-3);
    }
    SUBCASE("clock preconditions") {
        const GaussianMixture m = GaussianMixture::delta({Eigen::VectorXd::Zero(2), 0.3});
        CHECK_THROWS_AS(hamilton_decomposition(circle, m, 0.5, 0.35), std::invalid_argument);
        CHECK_THROWS_AS(hamilton_decomposition(circle, m, 0.2, 0.25), std::invalid_argument);
    }
}

TEST_CASE("theta and Sigma estimates on the shrinking circle") {
    const Trajectory& traj = circle_trajectory();

    SUBCASE("density at the shrink point") {
        const LimitEstimate theta = theta_estimate(traj, Vec2::Zero());
        CHECK(theta.extrapolated);
        CHECK(theta.value == doctest::Approx(oracles::circle_peak_density()).epsilon(1e-3));
        CHECK(theta.value >= 1.0 - 0.02);
    }
    SUBCASE("far points carry no density") {
        const LimitEstimate theta = theta_estimate(traj, Vec2(50.0, 0.0));
        CHECK(std::abs(theta.value) < 1e-6);
    }
    SUBCASE("Sigma is the homothetic constant") {
        const LimitEstimate lim = sigma_limit_estimate(traj);
        CHECK(lim.extrapolated);
        CHECK(lim.value == doctest::Approx(oracles::circle_peak_density()).epsilon(1e-3));
    }
    SUBCASE("too few frames fall back to a flagged single value") {
        Trajectory stub;
        stub.frames = {traj.frames.front(), traj.frames[1]};
        stub.estimated_T = traj.estimated_T;
        const LimitEstimate theta = theta_estimate(stub, Vec2::Zero());
        CHECK_FALSE(theta.extrapolated);
        CHECK(theta.frames_used == 1);
    }
}

TEST_CASE("monotonicity of sigma along the flow with matched clocks") {
    const Trajectory& traj = circle_trajectory();
    const double C = traj.estimated_T;
    std::vector<double> times, sigmas, residuals;
    for (const Frame& f : traj.frames) {
        if (f.t >= C) break;
        const DensityReport rep = sigma(f.curve, C - f.t);
        times.push_back(f.t);
        sigmas.push_back(rep.value);
        residuals.push_back(rep.residual);
    }
    REQUIRE(times.size() > 20);

    double worst_increase = 0.0;
    for (std::size_t i = 0; i + 1 < sigmas.size(); ++i)
        worst_increase = std::max(worst_increase, sigmas[i + 1] - sigmas[i]);
    CHECK(worst_increase < 1e-4);

    // Integrated inequality: the sigma drop dominates the time integral of
    // the residual at the maximizing centers, for every frame pair.
    std::vector<double> cumulative(times.size(), 0.0);
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        cumulative[i + 1] = cumulative[i] + 0.5 * (residuals[i] + residuals[i + 1]) *
                                                (times[i + 1] - times[i]);
    double worst_pair = 0.0;
    double running_min = 1e300;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double g = sigmas[i] + cumulative[i];
        if (i > 0) worst_pair = std::max(worst_pair, g - running_min);
        running_min = std::min(running_min, g);
    }
    CHECK(worst_pair < 1e-3);
}
