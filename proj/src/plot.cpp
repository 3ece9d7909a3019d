#include "hgogp/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>

#include "hgogp/errors.hpp"

namespace hgogp {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMargin = 60.0;

struct Series {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    // Degenerate ranges (single point, constant series) get unit width.
    void settle() {
        if (!(lo <= hi)) {
            lo = 0.0;
            hi = 1.0;
        }
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

class Canvas {
public:
    Canvas(Range xr, Range yr, bool equal_aspect) : xr_(xr), yr_(yr) {
        xr_.settle();
        yr_.settle();
        sx_ = (kWidth - 2 * kMargin) / (xr_.hi - xr_.lo);
        sy_ = (kHeight - 2 * kMargin) / (yr_.hi - yr_.lo);
        if (equal_aspect) {
            // Widen the tighter axis about its middle so both share one scale.
            sx_ = sy_ = std::min(sx_, sy_);
            widen(xr_, (kWidth - 2 * kMargin) / sx_);
            widen(yr_, (kHeight - 2 * kMargin) / sy_);
        }
    }
    double px(double x) const { return kMargin + (x - xr_.lo) * sx_; }
    double py(double y) const { return kHeight - kMargin - (y - yr_.lo) * sy_; }
    double scale() const { return sx_; }
    const Range& xrange() const { return xr_; }
    const Range& yrange() const { return yr_; }

private:
    static void widen(Range& r, double span) {
        const double mid = 0.5 * (r.lo + r.hi);
        r.lo = mid - 0.5 * span;
        r.hi = mid + 0.5 * span;
    }

    Range xr_, yr_;
    double sx_ = 1.0, sy_ = 1.0;
};

std::string num(double v, int digits = 6) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

std::vector<std::size_t> decimated(std::size_t n) {
    std::vector<std::size_t> idx;
    const std::size_t stride = std::max<std::size_t>(1, (n + kMaxPlotPoints - 1) / kMaxPlotPoints);
    for (std::size_t i = 0; i < n; i += stride) {
        idx.push_back(i);
    }
    if (n > 0 && idx.back() != n - 1) {
        idx.push_back(n - 1);
    }
    return idx;
}

void open_svg(std::ostream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
}

void axes(std::ostream& out, const Canvas& c, const std::string& xlabel, const std::string& ylabel) {
    const double x0 = kMargin, x1 = kWidth - kMargin, y0 = kHeight - kMargin, y1 = kMargin;
    out << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = c.xrange().lo + (c.xrange().hi - c.xrange().lo) * i / 4.0;
        const double fy = c.yrange().lo + (c.yrange().hi - c.yrange().lo) * i / 4.0;
        out << "<text x=\"" << c.px(fx) << "\" y=\"" << y0 + 15 << "\" text-anchor=\"middle\">" << num(fx, 3)
            << "</text>\n";
        out << "<text x=\"" << x0 - 5 << "\" y=\"" << c.py(fy) + 4 << "\" text-anchor=\"end\">" << num(fy, 3)
            << "</text>\n";
    }
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">" << xlabel
        << "</text>\n";
    out << "<text x=\"14\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << kHeight / 2 << ")\">" << ylabel << "</text>\n";
}

void draw(std::ostream& out, const Canvas& c, const Series& s) {
    if (s.x.size() == 1) {
        out << "<circle cx=\"" << c.px(s.x[0]) << "\" cy=\"" << c.py(s.y[0]) << "\" r=\"3\" fill=\"" << s.color
            << "\"/>\n";
        return;
    }
    out << "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" << s.color << "\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
            out << num(c.px(s.x[i])) << ',' << num(c.py(s.y[i])) << ' ';
        }
    }
    out << "\"/>\n";
}

void legend(std::ostream& out, const std::vector<Series>& series) {
    double y = kMargin + 14;
    for (const Series& s : series) {
        out << "<line x1=\"" << kWidth - kMargin - 150 << "\" y1=\"" << y - 4 << "\" x2=\"" << kWidth - kMargin - 130
            << "\" y2=\"" << y - 4 << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kWidth - kMargin - 125 << "\" y=\"" << y << "\">" << s.label << "</text>\n";
        y += 14;
    }
}

Series time_series(const std::vector<TraceRow>& rows, const std::vector<std::size_t>& idx, std::string label,
                   std::string color, const std::function<double(const TraceRow&)>& get) {
    Series s{std::move(label), std::move(color), {}, {}};
    for (std::size_t i : idx) {
        s.x.push_back(rows[i].t);
        s.y.push_back(get(rows[i]));
    }
    return s;
}

std::filesystem::path write_time_plot(const std::filesystem::path& path, const std::string& title,
                                      const std::string& ylabel, const std::vector<Series>& series) {
    Range xr, yr;
    for (const Series& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xr.add(s.x[i]);
            yr.add(s.y[i]);
        }
    }
    const Canvas c(xr, yr, false);
    std::ofstream out(path);
    open_svg(out, title);
    axes(out, c, "t [s]", ylabel);
    for (const Series& s : series) {
        draw(out, c, s);
    }
    legend(out, series);
    out << "</svg>\n";
    return path;
}

}  // namespace

std::vector<std::filesystem::path> write_plots(const std::vector<TraceRow>& rows, std::span<const Obstacle> obstacles,
                                               const std::filesystem::path& out_dir) {
    if (rows.empty()) {
        throw ArgumentError("cannot plot an empty trace");
    }
    std::filesystem::create_directories(out_dir);
    const auto idx = decimated(rows.size());
    std::vector<std::filesystem::path> written;

    {
        Series path{"agent path", "#1f77b4", {}, {}};
        Range xr, yr;
        for (std::size_t i : idx) {
            path.x.push_back(rows[i].p_x);
            path.y.push_back(rows[i].p_y);
            xr.add(rows[i].p_x);
            yr.add(rows[i].p_y);
        }
        for (const Obstacle& o : obstacles) {
            xr.add(o.center.x() - o.radius);
            xr.add(o.center.x() + o.radius);
            yr.add(o.center.y() - o.radius);
            yr.add(o.center.y() + o.radius);
        }
        const Canvas c(xr, yr, true);
        const auto file = out_dir / "trajectory.svg";
        std::ofstream out(file);
        open_svg(out, "Agent path and obstacles");
        axes(out, c, "p_x", "p_y");
        for (const Obstacle& o : obstacles) {
            out << "<circle cx=\"" << c.px(o.center.x()) << "\" cy=\"" << c.py(o.center.y()) << "\" r=\""
                << o.radius * c.scale() << "\" fill=\"#d62728\" fill-opacity=\"0.3\" stroke=\"#d62728\"/>\n";
        }
        draw(out, c, path);
        out << "</svg>\n";
        written.push_back(file);
    }

    written.push_back(write_time_plot(
        out_dir / "estimates.svg", "Estimates of L_f h_s", "L_f h_s",
        {time_series(rows, idx, "truth", "black", [](const TraceRow& r) { return r.lf_hs_true; }),
         time_series(rows, idx, "observer zhat2", "#2ca02c", [](const TraceRow& r) { return r.zhat2; }),
         time_series(rows, idx, "GP h^(1)", "#1f77b4", [](const TraceRow& r) { return r.gp_h1_mean; }),
         time_series(rows, idx, "baseline L_f mu_h", "#ff7f0e", [](const TraceRow& r) { return r.baseline_lf_gph; })}));

    written.push_back(write_time_plot(
        out_dir / "errors.svg", "Absolute estimation error", "error",
        {time_series(rows, idx, "GP h^(1)", "#1f77b4", [](const TraceRow& r) { return r.err_h1; }),
         time_series(rows, idx, "baseline L_f mu_h", "#ff7f0e", [](const TraceRow& r) { return r.err_baseline; })}));

    for (const auto& f : written) {
        if (!std::filesystem::exists(f) || std::filesystem::file_size(f) == 0) {
            throw std::runtime_error("failed to write " + f.string());
        }
    }
    return written;
}

}  // namespace hgogp
