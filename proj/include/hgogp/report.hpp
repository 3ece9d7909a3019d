#pragma once

// JSON artifacts written next to each trace: the bound report of the final
// window and the run manifest.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "hgogp/scenario.hpp"

namespace hgogp {

inline constexpr const char* kToolVersion = "hgogp 1.0.0";
inline constexpr const char* kGapUnavailable = "not computable - constants existential";

// SHA-1 over "blob <size>\0<content>", as computed by `git hash-object`.
std::string git_blob_hash(const std::string& content);

nlohmann::ordered_json bound_report_json(const WindowBound& bound);
nlohmann::ordered_json summary_json(const TraceSummary& summary);

struct RunManifest {
    std::filesystem::path config_path;
    std::filesystem::path output_directory;
    std::vector<std::uint64_t> seeds;
    std::uint64_t seed = 0;  // the run this manifest belongs to
    std::string config_hash;
    std::string tool_version = kToolVersion;
    nlohmann::ordered_json effective_config;
};

nlohmann::ordered_json manifest_json(const RunManifest& manifest);

}  // namespace hgogp
