#include "gaussdens/cli.hpp"

#include <CLI11.hpp>

#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Gaussian density laboratory for curve shortening flow"};
    app.require_subcommand(1);

    gaussdens::cli::ExperimentConfig config;

    auto add_curve_flags = [&](CLI::App* cmd) {
        cmd->add_option("--shape", config.shape, "Built-in shape: circle, ellipse, rounded-square");
        cmd->add_option("--input", config.input_path, "Curve JSON file (overrides --shape)");
        cmd->add_option("--radius", config.radius, "Circle radius");
        cmd->add_option("--a", config.axis_a, "Ellipse semi-axis a");
        cmd->add_option("--b", config.axis_b, "Ellipse semi-axis b");
        cmd->add_option("--side", config.side, "Rounded-square side");
        cmd->add_option("--corner-radius", config.corner_radius, "Rounded-square corner radius");
        cmd->add_option("--n", config.n_vertices, "Vertex count")->check(CLI::PositiveNumber);
    };
    auto add_common_flags = [&](CLI::App* cmd) {
        cmd->add_option("--out", config.out_dir, "Output directory");
        cmd->add_option("--seed", config.seed, "Seed for randomized checks");
        cmd->add_option("--tol-scale", config.tol_scale, "Multiplier on verification tolerances");
        cmd->add_option("--restarts", config.restarts, "Multi-start grid side for the center search")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--quad-order", config.quadrature_order, "Gauss-Legendre points per edge")
            ->check(CLI::PositiveNumber);
    };
    auto add_flow_flags = [&](CLI::App* cmd) {
        cmd->add_option("--cfl", config.c_cfl, "Time step factor relative to min edge squared");
        cmd->add_option("--k-stop", config.curvature_stop, "Stop when sup|k| * diameter exceeds this");
        cmd->add_option("--l-stop", config.length_stop_rel, "Stop at this fraction of the initial length");
    };

    CLI::App* flow = app.add_subcommand("flow", "Evolve a curve by curve shortening flow");
    add_curve_flags(flow);
    add_common_flags(flow);
    add_flow_flags(flow);

    CLI::App* density = app.add_subcommand("density", "Sigma profile and nu maximization");
    add_curve_flags(density);
    add_common_flags(density);
    density->add_option("--tau", config.tau, "Also report sigma at this single scale");

    CLI::App* analyze = app.add_subcommand("analyze", "Flow to the singular time and classify it");
    add_curve_flags(analyze);
    add_common_flags(analyze);
    add_flow_flags(analyze);

    CLI::App* verify = app.add_subcommand("verify", "Run the property-verification battery");
    add_common_flags(verify);
    verify->add_option("--n", config.n_vertices, "Vertex count for curve-based checks")
        ->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    if (flow->parsed()) return gaussdens::cli::cmd_flow(config);
    if (density->parsed()) return gaussdens::cli::cmd_density(config);
    if (analyze->parsed()) return gaussdens::cli::cmd_analyze(config);
    if (verify->parsed()) return gaussdens::cli::cmd_verify(config);
    return 1;
}
