#include "srwe/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "srwe/csv.hpp"

namespace srwe {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;

const char* kPalette[] = {"#b8860b", "#6f42c1", "#1f77b4", "#2ca02c",
                          "#d62728", "#17becf", "#8c564b", "#7f7f7f"};

std::string num(double v) {
    return format_double(v, 6);
}

struct Range {
    double lo = 0.0, hi = 1.0;
    double scale(double v, double out_lo, double out_hi) const {
        const double span = hi - lo;
        const double t = span == 0.0 ? 0.5 : (v - lo) / span;
        return out_lo + t * (out_hi - out_lo);
    }
};

Range span_of(const std::vector<ChartSeries>& series, bool use_x, bool include_zero) {
    Range r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& s : series)
        for (double v : (use_x ? s.x : s.y)) {
            r.lo = std::min(r.lo, v);
            r.hi = std::max(r.hi, v);
        }
    if (!std::isfinite(r.lo)) {
        r.lo = 0.0;
        r.hi = 1.0;
    }
    if (include_zero)
        r.lo = std::min(r.lo, 0.0);
    if (r.hi == r.lo)
        r.hi = r.lo + 1.0;
    const double pad = 0.05 * (r.hi - r.lo);
    return {r.lo - (include_zero && r.lo == 0.0 ? 0.0 : pad), r.hi + pad};
}

}  // namespace

void write_chart_svg(const std::filesystem::path& path, ChartKind kind, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<ChartSeries>& series) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());

    const Range rx = span_of(series, true, false);
    const Range ry = span_of(series, false, kind == ChartKind::kBar);
    auto px = [&](double v) { return rx.scale(v, kLeft, kWidth - kRight); };
    auto py = [&](double v) { return ry.scale(v, kHeight - kBottom, kTop); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << num(kWidth) << " "
        << num(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << num(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";

    // Axes and ticks.
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kHeight - kBottom) << "\" x2=\""
        << num(kWidth - kRight) << "\" y2=\"" << num(kHeight - kBottom)
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
        << "\" y2=\"" << num(kHeight - kBottom) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double fx = rx.lo + (rx.hi - rx.lo) * i / 5.0;
        const double fy = ry.lo + (ry.hi - ry.lo) * i / 5.0;
        out << "<line x1=\"" << num(px(fx)) << "\" y1=\"" << num(kHeight - kBottom) << "\" x2=\""
            << num(px(fx)) << "\" y2=\"" << num(kHeight - kBottom + 4) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(kHeight - kBottom + 16)
            << "\" text-anchor=\"middle\">" << format_double(fx, 4) << "</text>\n";
        out << "<line x1=\"" << num(kLeft - 4) << "\" y1=\"" << num(py(fy)) << "\" x2=\""
            << num(kLeft) << "\" y2=\"" << num(py(fy)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(fy) + 4)
            << "\" text-anchor=\"end\">" << format_double(fy, 4) << "</text>\n";
    }
    out << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"" << num(kHeight - 10)
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << num((kTop + kHeight - kBottom) / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << num((kTop + kHeight - kBottom) / 2) << ")\">" << y_label << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        const auto& sr = series[s];
        if (kind == ChartKind::kLine) {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
            for (std::size_t i = 0; i < sr.x.size(); ++i)
                out << num(px(sr.x[i])) << "," << num(py(sr.y[i])) << " ";
            out << "\"/>\n";
        } else {
            // Bars share x positions across series (overlaid, translucent).
            const double slot = sr.x.size() > 1
                                    ? (px(sr.x[1]) - px(sr.x[0])) * 0.8
                                    : (kWidth - kLeft - kRight) * 0.8;
            const double y0 = py(std::max(0.0, ry.lo));
            for (std::size_t i = 0; i < sr.x.size(); ++i) {
                const double cx = px(sr.x[i]);
                const double yv = py(sr.y[i]);
                out << "<rect x=\"" << num(cx - slot / 2) << "\" y=\"" << num(std::min(yv, y0))
                    << "\" width=\"" << num(slot) << "\" height=\"" << num(std::abs(y0 - yv))
                    << "\" fill=\"" << color << "\" fill-opacity=\"0.45\" stroke=\"" << color
                    << "\"/>\n";
            }
        }
        out << "<rect x=\"" << num(kWidth - kRight - 150) << "\" y=\""
            << num(kTop + 8 + 16 * static_cast<double>(s)) << "\" width=\"10\" height=\"10\" fill=\""
            << color << "\"/>\n";
        out << "<text x=\"" << num(kWidth - kRight - 135) << "\" y=\""
            << num(kTop + 17 + 16 * static_cast<double>(s)) << "\">" << sr.label << "</text>\n";
    }
    out << "</svg>\n";
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

}  // namespace srwe
