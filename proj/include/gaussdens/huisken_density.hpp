#pragma once

#include "gaussdens/flow.hpp"
#include "gaussdens/geometry.hpp"
#include "gaussdens/heat_family.hpp"
#include "gaussdens/quadrature.hpp"

#include <optional>

namespace gaussdens {

struct DensityDiagnostics {
    int iterations = 0;
    int restarts = 0;
    double quadrature_error = 0.0;
    bool converged = true;
};

/// Value and maximizer of a Gaussian-weighted curve integral.
struct DensityReport {
    double value = 0.0;
    Vec2 maximizer_center = Vec2::Zero();
    std::optional<double> maximizer_scale;  // set by the scale maximization
    double residual = 0.0;                  // shrinker residual at the maximizer
    DensityDiagnostics diagnostics;
};

/// Gaussian-weighted length Int_M exp(-|x-p|^2 / 4 tau) / sqrt(4 pi tau) dmu.
double huisken_functional(const DiscreteCurve& curve, const Vec2& p, double tau,
                          int points_per_edge = 4);
double huisken_functional(const CurveQuadrature& quad, const Vec2& p, double tau);
double huisken_functional(const DiscreteCurve& curve, const KernelParams& params);

struct SigmaOptions {
    int grid = 5;                  // multi-start grid is grid x grid plus the centroid
    int max_mean_shift_iters = 200;
    int max_polish_iters = 120;
    int points_per_edge = 4;
};

/// Maximum of the Huisken functional over the kernel center, by multi-start
/// mean-shift ascent with a Nelder-Mead polish. Deterministic: ties are broken
/// by distance to the centroid, then lexicographically.
DensityReport sigma(const DiscreteCurve& curve, double tau, const SigmaOptions& options = {});

/// Closed form of sigma for round spheres (the center maximizes by symmetry):
/// omega_n R^n exp(-R^2 / 4 tau) / (4 pi tau)^{n/2}.
double sigma_sphere(const SphereState& s, double tau);

struct NuOptions {
    SigmaOptions sigma_options;
    double golden_tol = 2e-4;  // tolerance on log(tau)
    int max_scan = 200;
};

/// Maximum of sigma over the kernel scale, by coarse log-scale scan bracketed
/// with the length bound followed by golden-section refinement.
DensityReport nu(const DiscreteCurve& curve, const NuOptions& options = {});

/// Gaussian-weighted shrinker defect
/// Int_M K |k + <x - p, nu> / (2 tau)|^2 dmu with K the n=1 normalized kernel.
double shrinker_residual(const DiscreteCurve& curve, const CurveGeometry& geom, const Vec2& p,
                         double tau, int points_per_edge = 4);
double shrinker_residual(const DiscreteCurve& curve, const KernelParams& params);

struct LimitEstimate {
    double value = 0.0;
    int frames_used = 0;
    bool extrapolated = false;  // false means a flagged single-frame value
};

/// Gaussian density at p: extrapolation of the Huisken functional with scale
/// T - t to the singular time, using frames at geometrically spaced scales.
LimitEstimate theta_estimate(const Trajectory& traj, const Vec2& p);

/// Limit of sigma(curve_t, T - t) as t approaches the singular time.
LimitEstimate sigma_limit_estimate(const Trajectory& traj, const SigmaOptions& options = {});

/// Frames are trusted for density work while sup|k| * min edge stays small.
bool frame_is_reliable(const CurveGeometry& geom, double min_edge, double threshold = 0.2);

}  // namespace gaussdens
