#pragma once

// Static SVG figures from a trace: the path with obstacles, estimates of
// L_f h_s against the truth, and the absolute errors over time.

#include <filesystem>
#include <span>
#include <vector>

#include "hgogp/scenario.hpp"

namespace hgogp {

inline constexpr std::size_t kMaxPlotPoints = 2000;

// Returns the written files (trajectory.svg, estimates.svg, errors.svg).
// Throws ArgumentError for an empty trace.
std::vector<std::filesystem::path> write_plots(const std::vector<TraceRow>& rows, std::span<const Obstacle> obstacles,
                                               const std::filesystem::path& out_dir);

}  // namespace hgogp
