// colwave: run the worked-example scenarios and write structured reports.
//
// Exit codes: 0 all assertions pass, 2 assertion failure, 3 configuration
// error, 4 resolution-guard refusal.

#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "colwave/errors.hpp"
#include "colwave/harness.hpp"

namespace {

int run(const std::string& id, const std::string& config_path, const std::string& out_dir) {
    colwave::ExperimentConfig cfg = config_path.empty() ? colwave::default_config(id)
                                                        : colwave::load_config(id, config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    cfg.validate();

    colwave::ScenarioReport rep = colwave::run_scenario(id, cfg);
    for (const auto& a : rep.assertions) {
        std::printf("%-4s %s | expected: %s | observed: %s\n", a.pass ? "ok" : "FAIL",
                    a.name.c_str(), a.expected.c_str(), a.observed.c_str());
    }
    std::printf("%s: %zu assertions, %s (%.1f s), reports in %s\n", rep.scenario.c_str(),
                rep.assertions.size(), rep.all_pass() ? "all passed" : "FAILURES",
                rep.wall_seconds, cfg.output_dir.c_str());
    return rep.all_pass() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"colwave: generalized-function wave front experiments"};
    app.require_subcommand(1);

    std::string scenario, config_path, out_dir;

    auto* run_cmd = app.add_subcommand("run", "run a scenario");
    run_cmd->add_option("scenario", scenario, "scenario id (see `colwave list`)")->required();
    run_cmd->add_option("--config", config_path, "JSON config file overlaying the defaults");
    run_cmd->add_option("--out", out_dir, "output directory (overrides config and COLWAVE_OUT)");

    auto* list_cmd = app.add_subcommand("list", "list scenario ids");

    std::string validate_path;
    auto* val_cmd = app.add_subcommand("validate-config", "parse and validate a config file");
    val_cmd->add_option("file", validate_path, "JSON config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            for (const auto& [id, desc] : colwave::list_scenarios())
                std::printf("%-14s %s\n", id.c_str(), desc.c_str());
            return 0;
        }
        if (val_cmd->parsed()) {
            colwave::validate_config_file(validate_path);
            std::printf("ok: %s\n", validate_path.c_str());
            return 0;
        }
        return run(scenario, config_path, out_dir);
    } catch (const colwave::ConfigError& ex) {
        std::fprintf(stderr, "configuration error: %s\n", ex.what());
        return 3;
    } catch (const colwave::ResolutionError& ex) {
        std::fprintf(stderr, "resolution guard: %s\n", ex.what());
        return 4;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
}
