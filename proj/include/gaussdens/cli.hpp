#pragma once

#include "gaussdens/geometry.hpp"

#include <string>

namespace gaussdens::cli {

/// Parsed command-line configuration shared by all subcommands.
struct ExperimentConfig {
    // Input curve: either a built-in shape or a curve JSON file.
    std::string shape = "circle";  // circle | ellipse | rounded-square
    std::string input_path;        // overrides shape when nonempty
    double radius = 1.0;
    double axis_a = 2.0;
    double axis_b = 1.0;
    double side = 2.0;
    double corner_radius = 0.3;
    int n_vertices = 256;

    // Flow parameters.
    double c_cfl = 0.25;
    double curvature_stop = 100.0;
    double length_stop_rel = 1e-3;

    // Density parameters.
    int restarts = 5;  // multi-start grid side
    int quadrature_order = 4;
    double tau = 0.0;  // when positive, emit a single-scale report too

    std::string out_dir = "out";
    unsigned long long seed = 20090110;
    double tol_scale = 1.0;
};

/// Build or load the configured input curve. Exits with code 2 on I/O errors.
DiscreteCurve load_curve(const ExperimentConfig& config);

int cmd_flow(const ExperimentConfig& config);
int cmd_density(const ExperimentConfig& config);
int cmd_analyze(const ExperimentConfig& config);
int cmd_verify(const ExperimentConfig& config);

}  // namespace gaussdens::cli
