#include "hgogp/commands.hpp"

#include <fstream>
#include <ostream>
#include <string>

#include <spdlog/spdlog.h>

#include "hgogp/config.hpp"
#include "hgogp/errors.hpp"
#include "hgogp/parallel.hpp"
#include "hgogp/plot.hpp"
#include "hgogp/report.hpp"
#include "hgogp/trace_io.hpp"

namespace hgogp {

namespace {

namespace fs = std::filesystem;

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path, std::ios::binary);
    out << j.dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

std::string stem(const char* kind, std::uint64_t seed) { return std::string(kind) + "_seed" + std::to_string(seed); }

// trace_seed7.csv -> manifest_seed7.json in the same directory.
std::optional<fs::path> sibling_manifest(const fs::path& trace) {
    const std::string name = trace.stem().string();
    const std::string prefix = "trace_";
    if (name.rfind(prefix, 0) != 0) {
        return std::nullopt;
    }
    fs::path m = trace.parent_path() / ("manifest_" + name.substr(prefix.size()) + ".json");
    return fs::exists(m) ? std::optional<fs::path>(m) : std::nullopt;
}

}  // namespace

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
    ScenarioConfig config;
    try {
        config = load_config(options.config_path);
    } catch (const ConfigError& e) {
        err << "invalid config " << options.config_path.string() << ": " << e.what() << '\n';
        return kExitInvalidInput;
    }
    std::vector<std::uint64_t> seeds = options.seeds;
    if (seeds.empty()) {
        seeds.push_back(config.seed);
    }

    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec || !fs::is_directory(options.out_dir)) {
        err << "cannot create output directory " << options.out_dir.string() << ": " << ec.message() << '\n';
        return kExitInvalidInput;
    }

    const std::string effective = dump_config(config);
    RunManifest manifest;
    manifest.config_path = options.config_path;
    manifest.output_directory = options.out_dir;
    manifest.seeds = seeds;
    manifest.config_hash = git_blob_hash(effective);
    manifest.effective_config = config_to_json(config);

    spdlog::debug("running {} seed(s) on {} thread(s)", seeds.size(), worker_threads());
    const auto results = run_seed_sweep(config, seeds);

    int status = kExitOk;
    for (const SweepResult& r : results) {
        const fs::path trace_path = options.out_dir / (stem("trace", r.seed) + ".csv");
        manifest.seed = r.seed;
        if (r.error) {
            try {
                std::rethrow_exception(r.error);
            } catch (const SimulationError& e) {
                write_trace(trace_path, e.partial().rows);
                write_json(options.out_dir / (stem("manifest", r.seed) + ".json"), manifest_json(manifest));
                err << "seed " << r.seed << ": simulation diverged: " << e.what() << " (partial trace in "
                    << trace_path.string() << ")\n";
                status = std::max(status, static_cast<int>(kExitDivergence));
            } catch (const ConfigError& e) {
                err << "seed " << r.seed << ": invalid config: " << e.what() << '\n';
                status = std::max(status, static_cast<int>(kExitInvalidInput));
            } catch (const std::exception& e) {
                err << "seed " << r.seed << ": " << e.what() << '\n';
                status = std::max(status, static_cast<int>(kExitFailure));
            }
            continue;
        }
        const SimulationTrace& trace = *r.trace;
        write_trace(trace_path, trace.rows);
        nlohmann::ordered_json report;
        report["seed"] = r.seed;
        report["summary"] = summary_json(trace.summary);
        if (trace.bound) {
            report["bound"] = bound_report_json(*trace.bound);
        } else {
            report["bound"] = nullptr;
        }
        write_json(options.out_dir / (stem("bounds", r.seed) + ".json"), report);
        write_json(options.out_dir / (stem("manifest", r.seed) + ".json"), manifest_json(manifest));
        out << "seed " << r.seed << ": mean |err| h1 " << trace.summary.mean_err_h1 << ", baseline "
            << trace.summary.mean_err_baseline << " -> " << trace_path.string() << '\n';
    }
    return status;
}

int cmd_plot(const fs::path& trace_csv, const fs::path& out_dir, const std::optional<fs::path>& config_path,
             std::ostream& out, std::ostream& err) {
    std::vector<TraceRow> rows;
    try {
        rows = read_trace(trace_csv);
    } catch (const TraceFormatError& e) {
        err << "malformed trace " << trace_csv.string() << ": " << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kExitInvalidInput;
    }
    if (rows.empty()) {
        err << "trace " << trace_csv.string() << " has no rows\n";
        return kExitInvalidInput;
    }

    std::vector<Obstacle> obstacles;
    try {
        if (config_path) {
            obstacles = load_config(*config_path).obstacles;
        } else if (const auto manifest = sibling_manifest(trace_csv)) {
            std::ifstream in(*manifest);
            const auto j = nlohmann::json::parse(in);
            obstacles = parse_config(j.at("effective_config").dump()).obstacles;
        } else {
            spdlog::warn("no config or manifest for {}; plotting without obstacles", trace_csv.string());
        }
    } catch (const std::exception& e) {
        err << "cannot read obstacles: " << e.what() << '\n';
        return kExitInvalidInput;
    }

    try {
        for (const auto& f : write_plots(rows, obstacles, out_dir)) {
            out << f.string() << '\n';
        }
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

}  // namespace hgogp
