#include "hgogp/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "hgogp/errors.hpp"

namespace hgogp {

namespace {

std::array<double*, 15> real_fields(TraceRow& r) {
    return {&r.t,     &r.p_x,       &r.p_y,        &r.v_x,           &r.v_y,  &r.y_noisy,     &r.hs_true, &r.lf_hs_true,
            &r.zhat1, &r.zhat2,     &r.gp_h_mean,  &r.gp_h1_mean,    &r.baseline_lf_gph, &r.err_h1, &r.err_baseline};
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) {
            return out;
        }
        start = comma + 1;
    }
}

double parse_real(std::string_view s, std::size_t line, std::string_view column) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw TraceFormatError(line, "column " + std::string(column) + ": cannot parse '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

std::string format_real(double value) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) {
        throw StateError("format_real: buffer too small");
    }
    return std::string(buf.data(), ptr);
}

void write_trace(std::ostream& out, const std::vector<TraceRow>& rows) {
    for (std::size_t i = 0; i < kTraceColumns.size(); ++i) {
        out << (i ? "," : "") << kTraceColumns[i];
    }
    out << '\n';
    for (TraceRow row : rows) {
        for (double* v : real_fields(row)) {
            out << format_real(*v) << ',';
        }
        out << (row.window_event ? 1 : 0) << '\n';
    }
}

void write_trace(const std::filesystem::path& path, const std::vector<TraceRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    write_trace(out, rows);
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

std::vector<TraceRow> read_trace(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw TraceFormatError(1, "empty file, expected a header");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const auto header = split(line);
    if (header.size() != kTraceColumns.size() || !std::equal(header.begin(), header.end(), kTraceColumns.begin())) {
        throw TraceFormatError(1, "header does not match the trace schema");
    }
    std::vector<TraceRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != kTraceColumns.size()) {
            throw TraceFormatError(lineno, "expected " + std::to_string(kTraceColumns.size()) + " columns, found " +
                                               std::to_string(cells.size()));
        }
        TraceRow row;
        auto fields = real_fields(row);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            *fields[i] = parse_real(cells[i], lineno, kTraceColumns[i]);
        }
        const std::string_view ev = cells.back();
        if (ev != "0" && ev != "1") {
            throw TraceFormatError(lineno, "column window_event: expected 0 or 1");
        }
        row.window_event = ev == "1" ? 1 : 0;
        if (!std::isfinite(row.t) || (!rows.empty() && row.t <= rows.back().t)) {
            throw TraceFormatError(lineno, "column t: times must be finite and increasing");
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<TraceRow> read_trace(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return read_trace(in);
}

}  // namespace hgogp
