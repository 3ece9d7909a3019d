#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "criteria.hpp"
#include "hgogp/commands.hpp"
#include "hgogp/report.hpp"

namespace {

// HGOGP_LOG_LEVEL: trace, debug, info, warn (default), error, critical, off.
void setup_logging() {
    auto logger = spdlog::stderr_color_mt("hgogp");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("HGOGP_LOG_LEVEL")) {
        spdlog::set_level(spdlog::level::from_str(env));
    }
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"Observer-based GP estimation of output derivatives"};
    app.set_version_flag("--version", hgogp::kToolVersion);
    app.require_subcommand(1);

    hgogp::RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "simulate the scenario and write traces, bound reports, manifests");
    run_cmd->add_option("--config", run.config_path, "scenario config (JSON)")->required();
    run_cmd->add_option("--out", run.out_dir, "output directory")->required();
    run_cmd->add_option("--seed", run.seeds, "seed or comma-separated seeds (default: config seed)")->delimiter(',');

    std::filesystem::path trace, plot_out;
    std::optional<std::filesystem::path> plot_config;
    auto* plot_cmd = app.add_subcommand("plot", "render SVG figures from a trace");
    plot_cmd->add_option("--trace", trace, "trace CSV")->required();
    plot_cmd->add_option("--out", plot_out, "output directory")->required();
    plot_cmd->add_option("--config", plot_config, "config with the obstacle layout (default: sibling manifest)");

    acceptance::Options verify;
    bool non_hurwitz = false;
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance criteria");
    verify_cmd->add_flag("--quick", verify.quick, "skip the slow envelope-coverage sweep");
    // Fault injection for testing the verifier itself.
    verify_cmd->add_flag("--inject-non-hurwitz", non_hurwitz)->group("");
    verify_cmd->add_option("--oracle-tolerance", verify.oracle_tolerance)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : hgogp::kExitInvalidInput;
    }

    try {
        if (*run_cmd) {
            return hgogp::cmd_run(run, std::cout, std::cerr);
        }
        if (*plot_cmd) {
            return hgogp::cmd_plot(trace, plot_out, plot_config, std::cout, std::cerr);
        }
        if (non_hurwitz) {
            verify.observer_gains = {-8.0, 15.0};
        }
        const auto results = acceptance::run_all(verify, std::cout);
        return acceptance::summarize(results, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return hgogp::kExitFailure;
    }
}
