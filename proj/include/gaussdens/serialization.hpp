#pragma once

#include "gaussdens/flow.hpp"
#include "gaussdens/geometry.hpp"
#include "gaussdens/heat_family.hpp"
#include "gaussdens/huisken_density.hpp"
#include "gaussdens/singularity.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace gaussdens {

// Curve files: {"n": 1, "vertices": [[x, y], ...]}, closed implicitly.
nlohmann::json curve_to_json(const DiscreteCurve& curve);
DiscreteCurve curve_from_json(const nlohmann::json& j);

// Rescaled frames reuse the curve format with an added "s" field.
nlohmann::json rescaled_frame_to_json(const RescaledFrame& frame);

// Mixture files: {"tau": t, "ambient": d, "atoms": [{"c": [...], "w": w}, ...]}.
nlohmann::json mixture_to_json(const GaussianMixture& m);
GaussianMixture mixture_from_json(const nlohmann::json& j);

nlohmann::json density_report_to_json(const DensityReport& report);
nlohmann::json singularity_report_to_json(const SingularityReport& report);

std::string to_string(SingularityType type);
std::string to_string(LimitShape shape);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

DiscreteCurve read_curve(const std::filesystem::path& path);
void write_curve(const std::filesystem::path& path, const DiscreteCurve& curve);

/// JSON-lines trajectory: one {"t": t, "vertices": [...]} object per line.
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj);
std::vector<Frame> read_trajectory_frames(const std::filesystem::path& path);

/// CSV with columns t, dt, max_k, min_edge, length.
void write_flow_diagnostics(const std::filesystem::path& path, const Trajectory& traj);

/// CSV with columns tau, sigma, px, py.
void write_sigma_profile(const std::filesystem::path& path,
                         const std::vector<std::pair<double, DensityReport>>& profile);

}  // namespace gaussdens
