#include "gaussdens/cli.hpp"

#include "gaussdens/flow.hpp"
#include "gaussdens/heat_family.hpp"
#include "gaussdens/huisken_density.hpp"
#include "gaussdens/serialization.hpp"
#include "gaussdens/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>
#include <vector>

namespace gaussdens::cli {

namespace fs = std::filesystem;

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

FlowOptions flow_options(const ExperimentConfig& config) {
    FlowOptions opts;
    opts.c_cfl = config.c_cfl;
    opts.curvature_stop = config.curvature_stop;
    opts.length_stop_rel = config.length_stop_rel;
    return opts;
}

SigmaOptions sigma_options(const ExperimentConfig& config) {
    SigmaOptions opts;
    opts.grid = config.restarts;
    opts.points_per_edge = config.quadrature_order;
    return opts;
}

void ensure_out_dir(const ExperimentConfig& config) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + config.out_dir);
}

GaussianMixture random_mixture(std::mt19937_64& rng, int dim, double tau_lo, double tau_hi) {
    std::uniform_int_distribution<int> n_atoms(1, 4);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    std::uniform_real_distribution<double> weight(0.1, 1.0);
    std::uniform_real_distribution<double> tau_dist(tau_lo, tau_hi);
    std::vector<GaussianMixture::Atom> atoms;
    const int count = n_atoms(rng);
    for (int i = 0; i < count; ++i) {
        Eigen::VectorXd c(dim);
        for (int k = 0; k < dim; ++k) c[k] = coord(rng);
        atoms.push_back({std::move(c), weight(rng)});
    }
    return GaussianMixture(std::move(atoms), tau_dist(rng), dim);
}

struct VerifyRow {
    std::string property;
    double measured;
    double threshold;
    bool pass;
};

void add_row(std::vector<VerifyRow>& rows, const std::string& name, double measured,
             double threshold) {
    rows.push_back({name, measured, threshold, measured <= threshold});
}

}  // namespace

DiscreteCurve load_curve(const ExperimentConfig& config) {
    if (!config.input_path.empty()) {
        if (!fs::exists(config.input_path))
            throw IoError("input file not found: " + config.input_path);
        return read_curve(config.input_path);
    }
    if (config.shape == "circle")
        return make_regular_polygon(config.n_vertices, config.radius);
    if (config.shape == "ellipse")
        return make_ellipse(config.n_vertices, config.axis_a, config.axis_b);
    if (config.shape == "rounded-square")
        return make_rounded_square(config.n_vertices, config.side, config.corner_radius);
    throw std::invalid_argument("unknown shape: " + config.shape);
}

int cmd_flow(const ExperimentConfig& config) {
    try {
        const DiscreteCurve curve = load_curve(config);
        ensure_out_dir(config);
        const Trajectory traj = evolve(curve, flow_options(config));

        const fs::path out(config.out_dir);
        write_trajectory(out / "trajectory.jsonl", traj);
        write_flow_diagnostics(out / "flow_diagnostics.csv", traj);
        write_json(out / "flow_summary.json",
                   {{"estimated_T", traj.estimated_T},
                    {"estimated_T_uncertainty", traj.estimated_T_uncertainty},
                    {"curvature_fit_constant", traj.curvature_fit_constant},
                    {"frames", traj.frames.size()},
                    {"steps", traj.step_diagnostics.size()},
                    {"initial_length", traj.initial_length},
                    {"truncated", traj.truncated},
                    {"flag_reason", traj.flag_reason}});

        std::cout << "flow: frames=" << traj.frames.size()
                  << " steps=" << traj.step_diagnostics.size()
                  << " estimated_T=" << traj.estimated_T << " +/- "
                  << traj.estimated_T_uncertainty << '\n';
        return traj.truncated ? 1 : 0;
    } catch (const IoError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
}

int cmd_density(const ExperimentConfig& config) {
    try {
        const DiscreteCurve curve = load_curve(config);
        ensure_out_dir(config);
        const fs::path out(config.out_dir);
        const CurveGeometry geom = compute_geometry(curve);
        const SigmaOptions sopts = sigma_options(config);

        // Profile over a log grid of scales from the resolution floor up to
        // where the length bound caps the value.
        const double tau_lo = 4.0 * curve.max_edge_length() * curve.max_edge_length();
        std::vector<std::pair<double, DensityReport>> profile;
        double best = 0.0;
        for (int k = 0; k < 80; ++k) {
            const double tau = tau_lo * std::pow(2.0, 0.5 * k);
            profile.emplace_back(tau, sigma(curve, tau, sopts));
            best = std::max(best, profile.back().second.value);
            const double bound = geom.length / std::sqrt(4.0 * std::numbers::pi * tau);
            if (k >= 2 && bound < 0.5 * best) break;
        }
        write_sigma_profile(out / "sigma_profile.csv", profile);

        NuOptions nopts;
        nopts.sigma_options = sopts;
        const DensityReport nu_report = nu(curve, nopts);
        write_json(out / "nu_report.json", density_report_to_json(nu_report));

        if (config.tau > 0.0) {
            const DensityReport single = sigma(curve, config.tau, sopts);
            write_json(out / "sigma_report.json", density_report_to_json(single));
        }

        std::cout << "density: nu=" << nu_report.value
                  << " tau_star=" << nu_report.maximizer_scale.value_or(0.0) << " p_star=("
                  << nu_report.maximizer_center.x() << ", " << nu_report.maximizer_center.y()
                  << ")\n";
        return nu_report.diagnostics.converged ? 0 : 1;
    } catch (const IoError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
}

int cmd_analyze(const ExperimentConfig& config) {
    try {
        const DiscreteCurve curve = load_curve(config);
        ensure_out_dir(config);
        const fs::path out(config.out_dir);

        const Trajectory traj = evolve(curve, flow_options(config));
        ClassifyOptions copts;
        copts.sigma_options = sigma_options(config);
        const SingularityReport report = classify(traj, copts);

        write_trajectory(out / "trajectory.jsonl", traj);
        write_flow_diagnostics(out / "flow_diagnostics.csv", traj);
        write_json(out / "singularity_report.json", singularity_report_to_json(report));
        for (std::size_t i = 0; i < report.rescaled_frames.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "rescaled_%02zu.json", i);
            write_json(out / name, rescaled_frame_to_json(report.rescaled_frames[i]));
        }

        std::cout << "analyze: type=" << to_string(report.type)
                  << " typeI_constant=" << report.typeI_constant
                  << " limit=" << to_string(report.limit_match)
                  << " hausdorff=" << report.hausdorff_circle << " Sigma=" << report.Sigma
                  << " limit_density=" << report.limit_density_value << '\n';
        return report.type == SingularityType::Unresolved ? 1 : 0;
    } catch (const IoError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
}

int cmd_verify(const ExperimentConfig& config) {
    std::vector<VerifyRow> rows;
    std::mt19937_64 rng(config.seed);
    const double ts = config.tol_scale;

    // Mass conservation of the mixtures by quadrature.
    {
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            const int dim = trial % 2 == 0 ? 2 : 3;
            const GaussianMixture m = random_mixture(rng, dim, 0.25, 2.0);
            std::uniform_real_distribution<double> time_dist(0.0, 0.5 * m.base_scale);
            worst = std::max(worst,
                             std::abs(mixture_mass_quadrature(m, time_dist(rng)) - 1.0));
        }
        add_row(rows, "mixture mass conservation", worst, 1e-6 * ts);
    }

    // Li-Yau Harnack battery.
    {
        int violations = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            const int dim = trial % 2 == 0 ? 2 : 3;
            const GaussianMixture m = random_mixture(rng, dim, 0.25, 2.0);
            std::uniform_real_distribution<double> coord(-3.0, 3.0);
            std::uniform_real_distribution<double> time_dist(0.0, 0.95 * m.base_scale);
            Eigen::VectorXd x(dim), y(dim);
            for (int k = 0; k < dim; ++k) {
                x[k] = coord(rng);
                y[k] = coord(rng);
            }
            double t = time_dist(rng), s = time_dist(rng);
            if (s > t) std::swap(s, t);
            if (!li_yau_check(m, x, t, y, s).holds) ++violations;
        }
        add_row(rows, "Li-Yau Harnack inequality", violations, 0.0);
    }

    // Extremality: mixtures never beat the best single kernel.
    {
        const DiscreteCurve circle = make_regular_polygon(config.n_vertices, 1.0);
        const double tau = 0.5;
        const DensityReport best = sigma(circle, tau, sigma_options(config));
        const CurveQuadrature quad = build_curve_quadrature(circle);
        double worst = -1.0;
        for (int trial = 0; trial < 100; ++trial) {
            const GaussianMixture m = [&] {
                GaussianMixture raw = random_mixture(rng, 2, tau, tau);
                return GaussianMixture(raw.atoms, tau, 2);
            }();
            Eigen::VectorXd xv(2);
            double value = 0.0;
            for (std::size_t i = 0; i < quad.points.size(); ++i) {
                xv << quad.points[i].x(), quad.points[i].y();
                value += quad.weights[i] * m.value(xv, 0.0);
            }
            value *= std::sqrt(4.0 * std::numbers::pi * tau);
            worst = std::max(worst, value - best.value);
        }
        add_row(rows, "delta-measure extremality", worst, 1e-9 * ts);
    }

    // Rescaling invariance of sigma on the built-in shapes.
    {
        double worst = 0.0;
        const std::vector<DiscreteCurve> shapes = {
            make_regular_polygon(config.n_vertices, 1.0),
            make_ellipse(config.n_vertices, 2.0, 1.0),
            make_rounded_square(config.n_vertices, 2.0, 0.3)};
        const double tau = 0.5;
        for (const DiscreteCurve& shape : shapes) {
            const double base = sigma(shape, tau, sigma_options(config)).value;
            for (double lambda : {0.5, 2.0, 10.0}) {
                const DiscreteCurve scaled = transform(shape, Isometry2{}, lambda);
                const double value =
                    sigma(scaled, lambda * lambda * tau, sigma_options(config)).value;
                worst = std::max(worst, std::abs(value - base));
            }
        }
        add_row(rows, "sigma rescaling invariance", worst, 1e-10 * ts);
    }

    // Flow-based checks on a shrinking circle.
    {
        FlowOptions fopts = flow_options(config);
        fopts.extra_frame_times = {0.25};
        const Trajectory traj = evolve(make_regular_polygon(128, 1.0), fopts);
        const double C = traj.estimated_T;

        std::vector<double> times, sigmas, residuals;
        for (const Frame& f : traj.frames) {
            if (f.t >= C) break;
            const DensityReport rep = sigma(f.curve, C - f.t, sigma_options(config));
            times.push_back(f.t);
            sigmas.push_back(rep.value);
            residuals.push_back(rep.residual);
        }
        double worst_increase = 0.0;
        for (std::size_t i = 0; i + 1 < sigmas.size(); ++i)
            worst_increase = std::max(worst_increase, sigmas[i + 1] - sigmas[i]);
        add_row(rows, "sigma monotonicity along flow", worst_increase, 1e-4 * ts);

        std::vector<double> cumulative(times.size(), 0.0);
        for (std::size_t i = 0; i + 1 < times.size(); ++i)
            cumulative[i + 1] = cumulative[i] + 0.5 * (residuals[i] + residuals[i + 1]) *
                                                    (times[i + 1] - times[i]);
        double worst_pair = 0.0;  // max over pairs of integral minus drop
        double running_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double g = sigmas[i] + cumulative[i];
            if (i > 0) worst_pair = std::max(worst_pair, g - running_min);
            running_min = std::min(running_min, g);
        }
        add_row(rows, "integrated residual inequality", worst_pair, 1e-3 * ts);

        BreatherOptions bopts;
        bopts.sigma_options = sigma_options(config);
        const BreatherResult breather =
            breather_check(traj, {0.25, std::sqrt(0.5), Isometry2{}}, bopts);
        add_row(rows, "circle breather residual", breather.residual_integral, 1e-5 * ts);
        add_row(rows, "circle breather sigma gap", std::abs(breather.sigma_gap), 1e-4 * ts);
        rows.push_back({"circle breather detected", breather.is_breather ? 0.0 : 1.0, 0.0,
                        breather.is_breather});
    }

    // Hamilton decomposition: kernel term vanishes for a single kernel, and
    // the total matches a finite difference of the weighted length.
    {
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            std::uniform_real_distribution<double> coord(-2.0, 2.0);
            std::uniform_real_distribution<double> tau_dist(0.3, 2.0);
            const double C = tau_dist(rng);
            Eigen::VectorXd p(2), x(2);
            p << coord(rng), coord(rng);
            x << coord(rng), coord(rng);
            std::uniform_real_distribution<double> time_dist(0.0, 0.7 * C);
            const double t = time_dist(rng);
            std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
            const double th = angle(rng);
            Eigen::VectorXd normal(2);
            normal << std::cos(th), std::sin(th);
            const GaussianMixture m = GaussianMixture::delta({p, C});
            worst = std::max(worst, std::abs(second_term_integrand(m, x, t, normal, C)));
        }
        add_row(rows, "single-kernel second term", worst, 1e-12 * ts);

        const DiscreteCurve circle = make_regular_polygon(512, 1.0);
        Eigen::VectorXd p(2);
        p << 0.3, 0.1;
        const double C = 0.7;
        const GaussianMixture m = GaussianMixture::delta({p, C});
        const double dt = 1e-5;
        const DiscreteCurve next = mcf_step(circle, dt, /*redistribute=*/false);
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
        const double fd = (weighted_mass(next, dt) - weighted_mass(circle, 0.0)) / dt;
        const double analytic = 0.5 * (hamilton_decomposition(circle, m, C, 0.0).total +
                                       hamilton_decomposition(next, m, C, dt).total);
        add_row(rows, "Hamilton derivative vs flow", std::abs(fd - analytic) / std::abs(analytic),
                1e-3 * ts);
    }

    bool all_pass = true;
    std::printf("%-34s %14s %14s  %s\n", "property", "measured", "threshold", "status");
    for (const VerifyRow& row : rows) {
        all_pass = all_pass && row.pass;
        std::printf("%-34s %14.5e %14.5e  %s\n", row.property.c_str(), row.measured,
                    row.threshold, row.pass ? "PASS" : "FAIL");
    }
    std::printf("verify: %s\n", all_pass ? "all properties hold" : "FAILURES detected");
    return all_pass ? 0 : 1;
}

}  // namespace gaussdens::cli
