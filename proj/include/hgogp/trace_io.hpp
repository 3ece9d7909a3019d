#pragma once

// CSV trace format. Columns, in order:
//
//   t, p_x, p_y, v_x, v_y, y_noisy, hs_true, Lf_hs_true, zhat1, zhat2,
//   gp_h_mean, gp_h1_mean, baseline_Lf_gph, err_h1, err_baseline, window_event
//
// Reals are written in shortest round-trip form, window_event as 0/1.

#include <array>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hgogp/scenario.hpp"

namespace hgogp {

inline constexpr std::array<std::string_view, 16> kTraceColumns{
    "t",       "p_x",       "p_y",        "v_x",             "v_y",    "y_noisy",      "hs_true",     "Lf_hs_true",
    "zhat1",   "zhat2",     "gp_h_mean",  "gp_h1_mean",      "baseline_Lf_gph", "err_h1", "err_baseline", "window_event"};

// Parse failure; line() is 1-based and counts the header.
class TraceFormatError : public std::runtime_error {
public:
    TraceFormatError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

std::string format_real(double value);

void write_trace(std::ostream& out, const std::vector<TraceRow>& rows);
void write_trace(const std::filesystem::path& path, const std::vector<TraceRow>& rows);

// Throws TraceFormatError on a bad header or the first malformed row.
std::vector<TraceRow> read_trace(std::istream& in);
std::vector<TraceRow> read_trace(const std::filesystem::path& path);

}  // namespace hgogp
