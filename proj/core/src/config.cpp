#include <fstream>
#include <json.hpp>
#include <set>

#include "colwave/errors.hpp"
#include "colwave/harness.hpp"

namespace colwave {

using nlohmann::json;

void ExperimentConfig::validate() const {
    const auto& e = estimator;
    auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
    if (mollifier_support_radius <= 0) fail("mollifier.support_radius must be > 0");
    if (mollifier_moment_order < 0) fail("mollifier.moment_order must be >= 0");
    if (mollifier_quadrature_resolution < 64) fail("mollifier.quadrature_resolution too low");
    if (e.eps_k_min < 1 || e.eps_k_max > 40 || e.eps_k_min > e.eps_k_max)
        fail("eps_ladder: need 1 <= k_min <= k_max <= 40");
    if (e.window_radii.size() < 2) fail("windows.radii: need at least 2 radii");
    for (std::size_t i = 0; i < e.window_radii.size(); ++i) {
        if (e.window_radii[i] <= 0) fail("windows.radii must be positive");
        if (i && e.window_radii[i] >= e.window_radii[i - 1])
            fail("windows.radii must be strictly decreasing");
    }
    if (e.plateau_fraction <= 0 || e.plateau_fraction >= 1)
        fail("windows.plateau_fraction must be in (0,1)");
    if (e.box_margin < 1.0 || e.box_margin > 4.0) fail("grid.box_margin must be in [1,4]");
    if (e.bins_s1 < 8 || e.bins_s1 > 720) fail("bins.s1 must be in [8,720]");
    if (e.icosphere_level < 0 || e.icosphere_level > 4) fail("bins.icosphere_level in [0,4]");
    if (e.p_threshold <= 1.0) fail("thresholds.p_threshold must exceed 1");
    if (e.n_cap <= 0) fail("thresholds.n_cap must be > 0");
    if (e.residual_cap <= 0) fail("thresholds.residual_cap must be > 0");
    if (e.delta <= 0 || e.delta > 0.5) fail("thresholds.delta must be in (0,0.5]");
    if (e.lambda_min <= 0 || e.lambda_max < e.lambda_min || e.lambda_ratio <= 1.12)
        fail("lambda_ladder: need 0 < min <= max, ratio > 1.12 (envelope probes must stay ordered)");
    if (lambda_ladder(e.lambda_min, e.lambda_max, e.lambda_ratio).size() < 6)
        fail("lambda_ladder: fewer than 6 rungs");
    if (e.base_shape_1d < 64 || e.base_shape_2d < 64) fail("grid shapes must be >= 64");
    if (e.shape_cap_1d < e.base_shape_1d || e.shape_cap_2d < e.base_shape_2d)
        fail("grid caps must be >= base shapes");
    if (e.shape_cap_1d > (1 << 20) || e.shape_cap_2d > 8192) fail("grid caps out of range");
    if (e.pad_factor < 1 || e.pad_factor > 8) fail("grid.pad_factor must be in [1,8]");
    if (e.min_eps_rows < 2) fail("eps_ladder.min_rows must be >= 2");
    if (output_dir.empty()) fail("output_dir must not be empty");
}

ExperimentConfig default_config(const std::string& id) {
    ExperimentConfig cfg;
    cfg.scenario = id;
    auto& e = cfg.estimator;
    if (id == "smoke") {
        e.eps_k_min = 4;
        e.eps_k_max = 12;
        e.lambda_min = 4.0;
        e.lambda_max = 256.0;
        e.base_shape_1d = 4096;
        e.shape_cap_1d = 65536;
        e.pad_factor = 2;
    } else if (id == "cones_remark") {
        // pure cone geometry; estimator unused
    } else if (id == "ex2_2") {
        e.eps_k_min = 4;
        e.eps_k_max = 10;
        e.lambda_min = 32.0;
        e.lambda_max = 512.0;
        e.base_shape_2d = 512;
        e.shape_cap_2d = 2048;
    } else if (id == "ex4_1") {
        e.eps_k_min = 4;
        e.eps_k_max = 9;
        e.lambda_min = 4.0;
        e.lambda_max = 45.0;
        e.base_shape_2d = 512;
        e.shape_cap_2d = 4096;
    } else if (id == "ex4_2") {
        e.eps_k_min = 4;
        e.eps_k_max = 8;
        e.lambda_min = 2.0;
        e.lambda_max = 12.0;
        e.base_shape_2d = 512;
        e.shape_cap_2d = 4096;
    } else if (id == "ex5_1") {
        e.eps_k_min = 4;
        e.eps_k_max = 8;
        e.lambda_min = 2.0;
        e.lambda_max = 12.0;
        e.base_shape_2d = 512;
        e.shape_cap_2d = 4096;
        e.bins_s1 = 12;
    } else {
        throw ConfigError("unknown scenario id: " + id);
    }
    if (const char* env = std::getenv("COLWAVE_OUT")) cfg.output_dir = env;
    cfg.validate();
    return cfg;
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
    }
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void apply_overlay(ExperimentConfig& cfg, const json& j) {
    reject_unknown(j,
                   {"scenario", "mollifier", "eps_ladder", "grid", "lambda_ladder", "windows",
                    "bins", "thresholds", "sampler", "output_dir", "cache_fields"},
                   "top level");
    if (j.contains("scenario")) {
        std::string s = j.at("scenario").get<std::string>();
        if (s != cfg.scenario)
            throw ConfigError("config: scenario key '" + s + "' does not match requested '" +
                              cfg.scenario + "'");
    }
    if (j.contains("mollifier")) {
        const auto& m = j.at("mollifier");
        reject_unknown(m, {"support_radius", "moment_order", "quadrature_resolution"},
                       "mollifier");
        read_if(m, "support_radius", cfg.mollifier_support_radius);
        read_if(m, "moment_order", cfg.mollifier_moment_order);
        read_if(m, "quadrature_resolution", cfg.mollifier_quadrature_resolution);
    }
    auto& e = cfg.estimator;
    if (j.contains("eps_ladder")) {
        const auto& l = j.at("eps_ladder");
        reject_unknown(l, {"k_min", "k_max", "min_rows"}, "eps_ladder");
        read_if(l, "k_min", e.eps_k_min);
        read_if(l, "k_max", e.eps_k_max);
        read_if(l, "min_rows", e.min_eps_rows);
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        reject_unknown(g, {"shape_1d", "shape_2d", "cap_1d", "cap_2d", "pad_factor", "box_margin"},
                       "grid");
        read_if(g, "shape_1d", e.base_shape_1d);
        read_if(g, "shape_2d", e.base_shape_2d);
        read_if(g, "cap_1d", e.shape_cap_1d);
        read_if(g, "cap_2d", e.shape_cap_2d);
        read_if(g, "pad_factor", e.pad_factor);
        read_if(g, "box_margin", e.box_margin);
    }
    if (j.contains("lambda_ladder")) {
        const auto& l = j.at("lambda_ladder");
        reject_unknown(l, {"min", "max", "ratio"}, "lambda_ladder");
        read_if(l, "min", e.lambda_min);
        read_if(l, "max", e.lambda_max);
        read_if(l, "ratio", e.lambda_ratio);
    }
    if (j.contains("windows")) {
        const auto& w = j.at("windows");
        reject_unknown(w, {"radii", "plateau_fraction"}, "windows");
        read_if(w, "radii", e.window_radii);
        read_if(w, "plateau_fraction", e.plateau_fraction);
    }
    if (j.contains("bins")) {
        const auto& b = j.at("bins");
        reject_unknown(b, {"s1", "icosphere_level"}, "bins");
        read_if(b, "s1", e.bins_s1);
        read_if(b, "icosphere_level", e.icosphere_level);
    }
    if (j.contains("thresholds")) {
        const auto& t = j.at("thresholds");
        reject_unknown(t, {"p_threshold", "n_cap", "residual_cap", "delta"}, "thresholds");
        read_if(t, "p_threshold", e.p_threshold);
        read_if(t, "n_cap", e.n_cap);
        read_if(t, "residual_cap", e.residual_cap);
        read_if(t, "delta", e.delta);
    }
    if (j.contains("sampler")) {
        std::string s = j.at("sampler").get<std::string>();
        if (s == "auto")
            e.sampler = SamplerChoice::Auto;
        else if (s == "grid")
            e.sampler = SamplerChoice::Grid;
        else if (s == "projection")
            e.sampler = SamplerChoice::Projection;
        else
            throw ConfigError("config: sampler must be auto|grid|projection");
    }
    read_if(j, "output_dir", cfg.output_dir);
    read_if(j, "cache_fields", cfg.cache_fields);
}

json parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("config: parse error: ") + ex.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    return j;
}

}  // namespace

ExperimentConfig load_config(const std::string& scenario_id, const std::string& path) {
    ExperimentConfig cfg = default_config(scenario_id);
    json j = parse_file(path);
    try {
        apply_overlay(cfg, j);
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("config: type error: ") + ex.what());
    }
    cfg.validate();
    return cfg;
}

void validate_config_file(const std::string& path) {
    json j = parse_file(path);
    std::string id = j.contains("scenario") ? j.at("scenario").get<std::string>() : "smoke";
    ExperimentConfig cfg = default_config(id);
    try {
        apply_overlay(cfg, j);
    } catch (const json::exception& ex) {
        throw ConfigError(std::string("config: type error: ") + ex.what());
    }
    cfg.validate();
}

std::vector<std::pair<std::string, std::string>> list_scenarios() {
    return {
        {"smoke", "1-D embedded delta and a fixed smooth bump: sharp vs empty wave front"},
        {"cones_remark", "curved-cone closure counterexample and antipodal-ray neighborhoods"},
        {"ex2_2", "transport with an oscillating coefficient: WF = S x Gamma_B, char set"},
        {"ex4_1", "families U and B: fibers, favorable position, product inclusion"},
        {"ex4_2", "product UV: point support, 1/sqrt(eps) growth, inclusion violation"},
        {"ex5_1", "tensor T = U (x) V: tensor bound, diagonal pullback, violation"},
    };
}

}  // namespace colwave
