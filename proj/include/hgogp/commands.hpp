#pragma once

// Implementations of the `run` and `plot` subcommands; they return the process
// exit status and write diagnostics to `err`.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace hgogp {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitInvalidInput = 2, kExitDivergence = 3 };

struct RunOptions {
    std::filesystem::path config_path;
    std::filesystem::path out_dir;
    std::vector<std::uint64_t> seeds;  // empty: the seed from the config
};

// Per seed s: trace_seed<s>.csv, bounds_seed<s>.json, manifest_seed<s>.json.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

// Obstacles come from `config_path` when given, else from the manifest written
// next to the trace by `run`; without either the path is drawn alone.
int cmd_plot(const std::filesystem::path& trace_csv, const std::filesystem::path& out_dir,
             const std::optional<std::filesystem::path>& config_path, std::ostream& out, std::ostream& err);

}  // namespace hgogp
