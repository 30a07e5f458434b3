#include "gaussdens/serialization.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace gaussdens {

using nlohmann::json;

nlohmann::json curve_to_json(const DiscreteCurve& curve) {
    json verts = json::array();
    for (const Vec2& v : curve.vertices) verts.push_back({v.x(), v.y()});
    return json{{"n", 1}, {"vertices", std::move(verts)}};
}

DiscreteCurve curve_from_json(const json& j) {
    if (!j.contains("vertices") || !j["vertices"].is_array())
        throw std::invalid_argument("curve JSON: missing vertices array");
    if (j.contains("n") && j["n"].get<int>() != 1)
        throw std::invalid_argument("curve JSON: only n = 1 curves are supported");
    std::vector<Vec2> verts;
    for (const auto& entry : j["vertices"]) {
        if (!entry.is_array() || entry.size() != 2)
            throw std::invalid_argument("curve JSON: vertices must be [x, y] pairs");
        verts.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
    return DiscreteCurve(std::move(verts));
}

nlohmann::json rescaled_frame_to_json(const RescaledFrame& frame) {
    json j = curve_to_json(frame.curve);
    j["s"] = frame.s;
    return j;
}

nlohmann::json mixture_to_json(const GaussianMixture& m) {
    json atoms = json::array();
    for (const auto& a : m.atoms) {
        json c = json::array();
        for (int i = 0; i < a.center.size(); ++i) c.push_back(a.center[i]);
        atoms.push_back({{"c", std::move(c)}, {"w", a.weight}});
    }
    return json{{"tau", m.base_scale}, {"ambient", m.ambient_dim}, {"atoms", std::move(atoms)}};
}

GaussianMixture mixture_from_json(const json& j) {
    const double tau = j.at("tau").get<double>();
    const int ambient = j.at("ambient").get<int>();
    std::vector<GaussianMixture::Atom> atoms;
    for (const auto& entry : j.at("atoms")) {
        const auto& c = entry.at("c");
        Eigen::VectorXd center(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) center[static_cast<int>(i)] = c[i].get<double>();
        atoms.push_back({std::move(center), entry.at("w").get<double>()});
    }
    return GaussianMixture(std::move(atoms), tau, ambient);
}

nlohmann::json density_report_to_json(const DensityReport& report) {
    json j{{"value", report.value},
           {"p_star", {report.maximizer_center.x(), report.maximizer_center.y()}},
           {"residual", report.residual},
           {"diagnostics",
            {{"iterations", report.diagnostics.iterations},
             {"restarts", report.diagnostics.restarts},
             {"quadrature_error", report.diagnostics.quadrature_error},
             {"converged", report.diagnostics.converged}}}};
    if (report.maximizer_scale) j["tau_star"] = *report.maximizer_scale;
    return j;
}

std::string to_string(SingularityType type) {
    switch (type) {
        case SingularityType::TypeI: return "TypeI";
        case SingularityType::TypeII: return "TypeII";
        default: return "Unresolved";
    }
}

std::string to_string(LimitShape shape) {
    switch (shape) {
        case LimitShape::UnitCircle: return "UnitCircle";
        case LimitShape::Line: return "Line";
        default: return "None";
    }
}

nlohmann::json singularity_report_to_json(const SingularityReport& report) {
    return json{{"type", to_string(report.type)},
                {"typeI_constant", report.typeI_constant},
                {"limit_match", to_string(report.limit_match)},
                {"hausdorff", report.hausdorff_circle},
                {"Sigma", report.Sigma},
                {"limit_density", report.limit_density_value}};
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    json j;
    in >> j;
    return j;
}

DiscreteCurve read_curve(const std::filesystem::path& path) { return curve_from_json(read_json(path)); }

void write_curve(const std::filesystem::path& path, const DiscreteCurve& curve) {
    write_json(path, curve_to_json(curve));
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    for (const Frame& f : traj.frames) {
        json verts = json::array();
        for (const Vec2& v : f.curve.vertices) verts.push_back({v.x(), v.y()});
        out << json{{"t", f.t}, {"vertices", std::move(verts)}}.dump() << '\n';
    }
}

std::vector<Frame> read_trajectory_frames(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    std::vector<Frame> frames;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json j = json::parse(line);
        std::vector<Vec2> verts;
        for (const auto& entry : j.at("vertices"))
            verts.emplace_back(entry[0].get<double>(), entry[1].get<double>());
        frames.push_back({j.at("t").get<double>(), DiscreteCurve(std::move(verts))});
    }
    return frames;
}

void write_flow_diagnostics(const std::filesystem::path& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << "t,dt,max_k,min_edge,length\n" << std::setprecision(17);
    for (const auto& d : traj.step_diagnostics)
        out << d.t << ',' << d.dt << ',' << d.max_curvature << ',' << d.min_edge << ','
            << d.length << '\n';
}

void write_sigma_profile(const std::filesystem::path& path,
                         const std::vector<std::pair<double, DensityReport>>& profile) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << "tau,sigma,px,py\n" << std::setprecision(17);
    for (const auto& [tau, report] : profile)
        out << tau << ',' << report.value << ',' << report.maximizer_center.x() << ','
            << report.maximizer_center.y() << '\n';
}

}  // namespace gaussdens
