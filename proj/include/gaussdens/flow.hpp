#pragma once

#include "gaussdens/geometry.hpp"
#include "gaussdens/heat_family.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace gaussdens {

/// Thrown when a flow step would degenerate the polygon; the caller is
/// expected to retry with a smaller step.
class StepRejected : public std::runtime_error {
public:
    explicit StepRejected(const std::string& what) : std::runtime_error(what) {}
};

/// One semi-implicit curve shortening step: solves
/// (I - dt * L) x_new = x with L the arc-length Laplacian assembled from the
/// current edge lengths, then optionally resamples to uniform arc length.
/// dt == 0 returns the input unchanged.
DiscreteCurve mcf_step(const DiscreteCurve& curve, double dt, bool redistribute = true,
                       double max_cfl = 1.0);

struct StepDiagnostics {
    double t;
    double dt;
    double max_curvature;
    double min_edge;
    double length;
};

struct Frame {
    double t;
    DiscreteCurve curve;
};

struct Trajectory {
    std::vector<Frame> frames;
    std::vector<StepDiagnostics> step_diagnostics;
    double estimated_T = 0.0;
    double estimated_T_uncertainty = 0.0;
    /// Constant of the fit sup|k| ~ c / sqrt(2(T - t)) over the final frames.
    double curvature_fit_constant = 0.0;
    double initial_length = 0.0;
    double initial_diameter = 0.0;
    bool truncated = false;
    std::string flag_reason;

    const Frame& frame_nearest(double t) const;
};

struct FlowOptions {
    double c_cfl = 0.25;
    double curvature_stop = 100.0;       // stop when sup|k| * initial diameter exceeds this
    double length_stop_rel = 1e-3;       // stop when length drops below this fraction
    bool redistribute = true;
    long max_steps = 4'000'000;
    /// A frame is stored whenever the length has dropped by this factor since
    /// the last stored frame.
    double frame_length_ratio = 0.9902;
    /// Times at which a frame is always stored (first step boundary past each).
    std::vector<double> extra_frame_times;
};

/// Run the flow until the curvature or length stop rule fires and estimate the
/// singular time from the curvature-vs-time fit.
Trajectory evolve(const DiscreteCurve& curve, const FlowOptions& options = {});

/// Closed-form flow of a round sphere: radius sqrt(R0^2 - 2 n t), same center.
SphereState sphere_evolve(const SphereState& s, double t);

struct HamiltonDecomposition {
    double total;          // d/dt [ sqrt(2(C-t)) Int_M u dmu ]
    double shrinker_term;  // -sqrt(2(C-t)) Int u |H - <grad log u, nu>|^2
    double kernel_term;    // -sqrt(2(C-t)) Int (second-term integrand)
};

/// Two-term decomposition of the derivative of sqrt(2(C-t)) Int_M u dmu along
/// the flow, with u the backward solution given by the mixture. Requires
/// t < min(C, mixture base scale).
HamiltonDecomposition hamilton_decomposition(const DiscreteCurve& curve, const GaussianMixture& m,
                                             double C, double t);

}  // namespace gaussdens
