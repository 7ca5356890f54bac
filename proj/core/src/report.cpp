#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "colwave/errors.hpp"
#include "colwave/harness.hpp"

namespace colwave {

using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

json vec_json(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.dim; ++i) a.push_back(v[i]);
    return a;
}

double clean(double x) {
    if (!std::isfinite(x)) return 1e9;
    return x;
}

json cone_json(const Cone& c) {
    json j;
    j["dim"] = c.dim();
    j["tolerance"] = c.tolerance();
    json dirs = json::array();
    for (const auto& d : c.directions()) dirs.push_back(vec_json(d));
    j["directions"] = dirs;
    json curves = json::array();
    for (const auto& g : c.curves()) {
        json cj;
        cj["param_range"] = {g.t0, g.t1};
        cj["samples"] = g.sample_count;
        curves.push_back(cj);
    }
    j["curves"] = curves;
    return j;
}

json estimate_json(const WaveFrontEstimate& est) {
    json pts = json::array();
    for (const auto& p : est.points) {
        json pj;
        pj["base_point"] = vec_json(p.base);
        json bins = json::array();
        for (const auto& b : p.bins) {
            json bj;
            bj["direction"] = vec_json(b.direction);
            bj["p_hat"] = clean(b.fit.p_hat);
            bj["N_hat"] = clean(b.fit.n_hat);
            bj["residual"] = clean(b.fit.residual);
            bj["verdict"] = to_string(b.verdict);
            bins.push_back(bj);
        }
        pj["bins"] = bins;
        json warns = json::array();
        for (const auto& w : p.warnings) warns.push_back(w);
        pj["warnings"] = warns;
        pts.push_back(pj);
    }
    json j;
    j["points"] = pts;
    return j;
}

json config_json(const ExperimentConfig& cfg) {
    const auto& e = cfg.estimator;
    json j;
    j["scenario"] = cfg.scenario;
    j["mollifier"] = {{"support_radius", cfg.mollifier_support_radius},
                      {"moment_order", cfg.mollifier_moment_order},
                      {"quadrature_resolution", cfg.mollifier_quadrature_resolution}};
    j["eps_ladder"] = {{"k_min", e.eps_k_min}, {"k_max", e.eps_k_max},
                       {"min_rows", e.min_eps_rows}};
    j["grid"] = {{"shape_1d", e.base_shape_1d}, {"shape_2d", e.base_shape_2d},
                 {"cap_1d", e.shape_cap_1d},    {"cap_2d", e.shape_cap_2d},
                 {"pad_factor", e.pad_factor},  {"box_margin", e.box_margin}};
    j["lambda_ladder"] = {{"min", e.lambda_min}, {"max", e.lambda_max}, {"ratio", e.lambda_ratio}};
    json radii = json::array();
    for (double r : e.window_radii) radii.push_back(r);
    j["windows"] = {{"radii", radii}, {"plateau_fraction", e.plateau_fraction}};
    j["bins"] = {{"s1", e.bins_s1}, {"icosphere_level", e.icosphere_level}};
    j["thresholds"] = {{"p_threshold", e.p_threshold},
                       {"n_cap", e.n_cap},
                       {"residual_cap", e.residual_cap},
                       {"delta", e.delta}};
    j["sampler"] = e.sampler == SamplerChoice::Auto
                       ? "auto"
                       : (e.sampler == SamplerChoice::Grid ? "grid" : "projection");
    j["output_dir"] = cfg.output_dir;
    j["cache_fields"] = cfg.cache_fields;
    return j;
}

}  // namespace

bool ScenarioReport::all_pass() const {
    for (const auto& a : assertions)
        if (!a.pass) return false;
    return true;
}

std::string report_json_text(const ScenarioReport& rep) {
    json j;
    j["scenario"] = rep.scenario;
    j["config"] = config_json(rep.config);

    json asserts = json::array();
    for (const auto& a : rep.assertions) {
        asserts.push_back({{"name", a.name},
                           {"expected", a.expected},
                           {"observed", a.observed},
                           {"pass", a.pass}});
    }
    j["assertions"] = asserts;

    json ests = json::array();
    for (const auto& [label, est] : rep.estimates) {
        json ej = estimate_json(est);
        ej["label"] = label;
        ests.push_back(ej);
    }
    j["estimates"] = ests;

    json cones = json::array();
    for (const auto& [label, cone] : rep.cones) {
        json cj = cone_json(cone);
        cj["label"] = label;
        cones.push_back(cj);
    }
    j["cones"] = cones;

    json incl = json::array();
    for (const auto& [label, r] : rep.inclusions) {
        json ij;
        ij["label"] = label;
        ij["holds"] = r.holds;
        ij["applicable"] = r.applicable;
        ij["tolerance"] = r.tolerance;
        json ws = json::array();
        for (const auto& w : r.witnesses) {
            ws.push_back({{"base_point", vec_json(w.base)},
                          {"direction", vec_json(w.direction)},
                          {"p_hat", clean(w.fit.p_hat)},
                          {"N_hat", clean(w.fit.n_hat)}});
        }
        ij["witnesses"] = ws;
        incl.push_back(ij);
    }
    j["inclusions"] = incl;

    json notes = json::array();
    for (const auto& n : rep.notes) notes.push_back(n);
    j["notes"] = notes;

    return j.dump(2) + "\n";
}

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path);
    os << text;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string csv_vec(const Vec& v, int pad_to) {
    std::string s;
    for (int i = 0; i < pad_to; ++i) {
        if (i) s += ",";
        s += i < v.dim ? fmt(v[i]) : "";
    }
    return s;
}

}  // namespace

void emit_plot_data(const ScenarioReport& rep, const std::string& out_dir) {
    namespace fs = std::filesystem;
    if (rep.estimates.empty() && rep.cones.empty()) return;
    fs::create_directories(fs::path(out_dir) / "plotdata");

    // per-direction decay series
    for (const auto& [label, est] : rep.estimates) {
        std::string text = "base0,base1,base2,base3,dir0,dir1,dir2,dir3,eps,lambda,magnitude\n";
        for (const auto& p : est.points) {
            for (const auto& b : p.bins) {
                for (const auto& row : b.series) {
                    for (std::size_t i = 0; i < row.samples.lambda.size(); ++i) {
                        text += csv_vec(p.base, 4) + "," + csv_vec(b.direction, 4) + "," +
                                fmt(row.eps) + "," + fmt(row.samples.lambda[i]) + "," +
                                fmt(row.samples.magnitude[i]) + "\n";
                    }
                }
            }
        }
        write_text((fs::path(out_dir) / "plotdata" / ("series_" + label + ".csv")).string(), text);
    }

    // polar cone samples
    for (const auto& [label, cone] : rep.cones) {
        std::string text = "angle_or_index,dir0,dir1,dir2,member\n";
        if (cone.dim() == 2) {
            for (int k = 0; k < 72; ++k) {
                double a = 2.0 * kPi * k / 72;
                Vec d{std::cos(a), std::sin(a)};
                bool m = !cone.empty() && cone.contains(d);
                text += fmt(a) + "," + fmt(d[0]) + "," + fmt(d[1]) + ",," +
                        (m ? "1" : "0") + "\n";
            }
        } else {
            int idx = 0;
            for (const auto& d : cone.samples()) {
                text += fmt(idx++) + "," + csv_vec(d, 3) + ",1\n";
            }
        }
        write_text((fs::path(out_dir) / "plotdata" / ("cone_" + label + ".csv")).string(), text);
    }
}

void write_report_files(const ScenarioReport& rep, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    write_text((fs::path(out_dir) / "report.json").string(), report_json_text(rep));

    // flat fits export
    std::string csv = "label,x0,x1,x2,x3,dir0,dir1,dir2,dir3,p_hat,N_hat,residual,verdict\n";
    for (const auto& [label, est] : rep.estimates) {
        for (const auto& p : est.points) {
            for (const auto& b : p.bins) {
                csv += label + "," + csv_vec(p.base, 4) + "," + csv_vec(b.direction, 4) + "," +
                       fmt(clean(b.fit.p_hat)) + "," + fmt(clean(b.fit.n_hat)) + "," +
                       fmt(clean(b.fit.residual)) + "," + to_string(b.verdict) + "\n";
            }
        }
    }
    write_text((fs::path(out_dir) / "fits.csv").string(), csv);

    json cones = json::array();
    for (const auto& [label, cone] : rep.cones) {
        json cj = cone_json(cone);
        cj["label"] = label;
        cones.push_back(cj);
    }
    write_text((fs::path(out_dir) / "cones.json").string(), cones.dump(2) + "\n");

    json timing;
    timing["scenario"] = rep.scenario;
    timing["wall_seconds"] = rep.wall_seconds;
    write_text((fs::path(out_dir) / "timings.json").string(), timing.dump(2) + "\n");

    emit_plot_data(rep, out_dir);
}

}  // namespace colwave
