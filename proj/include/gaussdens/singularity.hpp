#pragma once

#include "gaussdens/flow.hpp"
#include "gaussdens/geometry.hpp"
#include "gaussdens/huisken_density.hpp"

#include <vector>

namespace gaussdens {

/// Curve in self-similar coordinates y = (x - p) / sqrt(2(T - t)) at rescaled
/// time s = -log(T - t) / 2.
struct RescaledFrame {
    double s;
    DiscreteCurve curve;
    double source_t;
    Vec2 center;
};

RescaledFrame rescale_transform(const DiscreteCurve& curve, double t, double T, const Vec2& p);

/// Inverse of rescale_transform; the scale is recovered from s.
DiscreteCurve inverse_rescale(const RescaledFrame& frame);

/// Gaussian density of a rescaled curve:
/// (1 / sqrt(2 pi)) Int exp(-|y|^2 / 2) dH^1.
double limit_density(const RescaledFrame& frame);

/// Symmetric discrete Hausdorff distance between two polylines; every curve is
/// sampled on each edge and compared against the other curve's segments.
double hausdorff_distance(const DiscreteCurve& a, const DiscreteCurve& b, int samples_per_edge = 4);

/// Largest distance from the curve to its best-fit line through the origin.
double distance_to_origin_line(const DiscreteCurve& curve);

enum class SingularityType { TypeI, TypeII, Unresolved };
enum class LimitShape { UnitCircle, Line, None };

struct SingularityReport {
    SingularityType type = SingularityType::Unresolved;
    /// Max of sup|k| sqrt(2(T-t)) over the late analysis window.
    double typeI_constant = 0.0;
    LimitShape limit_match = LimitShape::None;
    double hausdorff_circle = 0.0;
    double hausdorff_line = 0.0;
    double Sigma = 0.0;
    double limit_density_value = 0.0;
    double final_residual = 0.0;  // shrinker defect of the final rescaled frame
    std::vector<RescaledFrame> rescaled_frames;
    std::vector<Vec2> center_path;
    bool large_center_jump = false;
};

struct ClassifyOptions {
    double window_fraction = 0.125;  // analysis window is tau <= T * this
    int levels = 7;                  // rescaled frames at tau = T * wf * 2^{-j}
    double hausdorff_tol = 0.05;
    double rescaled_curvature_cap = 3.0;  // final frame must satisfy sup|k~| <= this
    double type_II_threshold = 3.0;
    SigmaOptions sigma_options;
};

/// Classify the singularity of a trajectory: type I constant over the late
/// window, rescaled frames around the density-maximizing centers, and the
/// identification of the limit shape.
SingularityReport classify(const Trajectory& traj, const ClassifyOptions& options = {});

/// Claim that the flow returns to a scaled isometric copy of itself at t_bar.
struct BreatherHypothesis {
    double t_bar;
    double scale;  // must lie in (0, 1): compact breathers shrink
    Isometry2 isometry;
};

struct BreatherResult {
    bool is_breather = false;
    double residual_integral = 0.0;
    double sigma_gap = 0.0;
    double shape_distance = 0.0;
    double C = 0.0;  // t_bar / (1 - scale^2)
};

struct BreatherOptions {
    double residual_tol = 1e-5;
    double shape_tol_rel = 0.01;   // Hausdorff tolerance relative to the diameter
    double horizon_factor = 20.0;  // reject when C exceeds this multiple of the span
    SigmaOptions sigma_options;
};

/// Check the breather hypothesis: shape match at t_bar, the gap
/// sigma(phi_0, C) - sigma(phi_tbar, C - t_bar) with C = t_bar / (1 - scale^2),
/// and the time-integrated shrinker residual at the maximizing centers.
BreatherResult breather_check(const Trajectory& traj, const BreatherHypothesis& hypothesis,
                              const BreatherOptions& options = {});

/// Best-fit breather parameters between the first frame and the frame at
/// t_bar: scale from the length ratio, rotation by grid search with a golden
/// polish, translation from the centroids.
BreatherHypothesis fit_breather_hypothesis(const Trajectory& traj, double t_bar);

}  // namespace gaussdens
