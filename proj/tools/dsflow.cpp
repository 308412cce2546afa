// Command-line driver: reproducible flow experiments, Heintze-Karcher
// probes, admissibility checks and chart rendering.
//
// Exit codes: 0 converged/success, 2 invalid config, 3 inadmissible input,
// 4 flow breakdown, 5 budget exhausted.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dsflow/runner.hpp"

namespace {

dsflow::RunConfig load_config(const std::string& path, const std::optional<std::uint64_t>& seed,
                              const std::optional<std::string>& out_dir) {
    dsflow::RunConfig cfg = dsflow::parse_config_file(path);
    if (seed) cfg.seed = *seed;
    if (out_dir) cfg.output_dir = *out_dir;
    dsflow::validate(cfg);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"locally constrained inverse curvature flow laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    bool quiet = false;

    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* opt = sub->add_option("--config", config_path, "run configuration file");
        if (need_config) opt->required();
        sub->add_option("--seed", seed, "override init.seed");
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        sub->add_flag("--quiet", quiet, "suppress progress output");
    };

    auto* cmd_run = app.add_subcommand("run", "evolve one configured experiment");
    add_common(cmd_run, true);
    auto* cmd_probe = app.add_subcommand("hk-probe", "Heintze-Karcher gap over seeded samples");
    add_common(cmd_probe, true);
    auto* cmd_check = app.add_subcommand("check", "admissibility check of the initial data");
    add_common(cmd_check, true);

    auto* cmd_plot = app.add_subcommand("plot", "render charts from an emitted run directory");
    std::string run_dir;
    cmd_plot->add_option("--run", run_dir, "directory holding series.csv/snapshots.csv/report.json")
        ->required();
    cmd_plot->add_option("--out", out_dir, "chart output directory (defaults to the run directory)");
    cmd_plot->add_flag("--quiet", quiet, "suppress progress output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            const auto cfg = load_config(config_path, seed, out_dir);
            return dsflow::run_experiment(cfg, cfg.output_dir, quiet);
        }
        if (cmd_probe->parsed()) {
            const auto cfg = load_config(config_path, seed, out_dir);
            return dsflow::hk_probe(cfg, cfg.output_dir, quiet);
        }
        if (cmd_check->parsed()) {
            const auto cfg = load_config(config_path, seed, out_dir);
            return dsflow::check_input(cfg, quiet);
        }
        if (cmd_plot->parsed())
            return dsflow::make_plots(run_dir, out_dir ? *out_dir : run_dir, quiet);
    } catch (const dsflow::config_error& e) {
        std::fprintf(stderr, "invalid config: %s\n", e.what());
        return dsflow::exit_invalid_config;
    } catch (const dsflow::sampler_error& e) {
        std::fprintf(stderr, "inadmissible input: %s\n", e.what());
        return dsflow::exit_inadmissible;
    } catch (const dsflow::spacelike_error& e) {
        std::fprintf(stderr, "inadmissible input: %s\n", e.what());
        return dsflow::exit_inadmissible;
    } catch (const dsflow::degeneracy_error& e) {
        std::fprintf(stderr, "inadmissible input: %s\n", e.what());
        return dsflow::exit_inadmissible;
    } catch (const dsflow::flow_breakdown_error& e) {
        std::fprintf(stderr, "flow breakdown: %s\n", e.what());
        return dsflow::exit_breakdown;
    } catch (const dsflow::parse_error& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return dsflow::exit_invalid_config;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return dsflow::exit_breakdown;
    }
    return dsflow::exit_success;
}
