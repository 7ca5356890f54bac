#pragma once

#include <string>
#include <utility>
#include <vector>

#include "colwave/cones.hpp"
#include "colwave/operations.hpp"
#include "colwave/wavefront.hpp"

namespace colwave {

/// Full experiment configuration: mollifier parameters plus estimator knobs.
/// Scenario ids carry tuned defaults; a JSON config file overlays them.
/// Unknown keys and out-of-range values are rejected.
struct ExperimentConfig {
    std::string scenario;

    double mollifier_support_radius = 1.0;
    int mollifier_moment_order = 0;
    int mollifier_quadrature_resolution = 4096;

    EstimatorParams estimator;

    std::string output_dir = "out";
    bool cache_fields = false;

    void validate() const;  // throws ConfigError
};

/// Tuned defaults per scenario id; throws ConfigError for unknown ids.
ExperimentConfig default_config(const std::string& scenario_id);

/// Load a JSON config document on top of the scenario defaults.
ExperimentConfig load_config(const std::string& scenario_id, const std::string& path);

/// Parse + validate only; throws ConfigError with a diagnostic on failure.
void validate_config_file(const std::string& path);

std::vector<std::pair<std::string, std::string>> list_scenarios();

struct Assertion {
    std::string name;
    std::string expected;
    std::string observed;
    bool pass = false;
};

struct ScenarioReport {
    std::string scenario;
    ExperimentConfig config;
    std::vector<Assertion> assertions;
    std::vector<std::pair<std::string, WaveFrontEstimate>> estimates;
    std::vector<std::pair<std::string, Cone>> cones;
    std::vector<std::pair<std::string, InclusionReport>> inclusions;
    std::vector<std::string> notes;
    double wall_seconds = 0.0;  // kept out of report.json for determinism

    bool all_pass() const;
};

/// Execute a scenario, write report.json / fits.csv / cones.json /
/// timings.json / plotdata/ under the output directory, return the report.
ScenarioReport run_scenario(const std::string& id, const ExperimentConfig& config);

/// Serialization helpers (also used by run_scenario).
void write_report_files(const ScenarioReport& report, const std::string& out_dir);
void emit_plot_data(const ScenarioReport& report, const std::string& out_dir);

std::string report_json_text(const ScenarioReport& report);

}  // namespace colwave
