#include "cryolink/emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cryolink {

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        f << content;
        if (!f.good()) throw std::runtime_error("write failed for '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string bathtub_csv(const BathtubCurve& curve) {
    std::ostringstream out;
    out << "phase_ui,ber,method\n";
    for (const auto& p : curve.points) {
        out << format_full(p.phase_ui) << "," << format_full(p.ber) << ","
            << (p.method == BathtubMethod::Counted ? "counted" : "extrapolated") << "\n";
    }
    return out.str();
}

std::string eye_raster_csv(const EyeRaster& raster) {
    std::ostringstream out;
    out << "# bins: phase=" << raster.phase_bins << " amplitude=" << raster.amplitude_bins << "\n";
    out << "# range: phase 0..2 UI, amplitude " << format_full(raster.amp_min) << ".."
        << format_full(raster.amp_max) << "\n";
    out << "# units: " << to_string(raster.unit) << ", rows bottom-up\n";
    for (size_t row = 0; row < raster.amplitude_bins; ++row) {
        for (size_t col = 0; col < raster.phase_bins; ++col) {
            if (col) out << ",";
            out << raster.at(row, col);
        }
        out << "\n";
    }
    return out.str();
}

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 560.0;
constexpr double kMarginL = 90.0;
constexpr double kMarginR = 30.0;
constexpr double kMarginT = 50.0;
constexpr double kMarginB = 70.0;

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

} // namespace

std::string svg_line_plot(const std::vector<PlotSeries>& series, const std::string& title,
                          const std::string& x_label, const std::string& y_label, bool log_y) {
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const auto& s : series) {
        for (size_t i = 0; i < s.x.size(); ++i) {
            double y = s.y[i];
            if (log_y) {
                if (y <= 0.0) continue;
                y = std::log10(y);
            }
            x_min = std::min(x_min, s.x[i]);
            x_max = std::max(x_max, s.x[i]);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (x_min > x_max) { x_min = 0; x_max = 1; y_min = 0; y_max = 1; }
    if (y_min == y_max) { y_min -= 1; y_max += 1; }
    const double px_w = kWidth - kMarginL - kMarginR;
    const double px_h = kHeight - kMarginT - kMarginB;
    auto sx = [&](double x) { return kMarginL + (x - x_min) / (x_max - x_min) * px_w; };
    auto sy = [&](double y) { return kHeight - kMarginB - (y - y_min) / (y_max - y_min) * px_h; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">" << title
        << "</text>\n";

    const int n_ticks = 6;
    for (int i = 0; i <= n_ticks; ++i) {
        const double fx = x_min + (x_max - x_min) * i / n_ticks;
        const double fy = y_min + (y_max - y_min) * i / n_ticks;
        out << "<line x1=\"" << sx(fx) << "\" y1=\"" << kMarginT << "\" x2=\"" << sx(fx) << "\" y2=\""
            << kHeight - kMarginB << "\" stroke=\"#dddddd\"/>\n";
        out << "<line x1=\"" << kMarginL << "\" y1=\"" << sy(fy) << "\" x2=\"" << kWidth - kMarginR
            << "\" y2=\"" << sy(fy) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << sx(fx) << "\" y=\"" << kHeight - kMarginB + 22
            << "\" text-anchor=\"middle\" font-size=\"12\">" << fmt_tick(fx) << "</text>\n";
        out << "<text x=\"" << kMarginL - 8 << "\" y=\"" << sy(fy) + 4
            << "\" text-anchor=\"end\" font-size=\"12\">" << (log_y ? "1e" + fmt_tick(fy) : fmt_tick(fy))
            << "</text>\n";
    }
    out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\"" << px_w << "\" height=\""
        << px_h << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kMarginL + px_w / 2 << "\" y=\"" << kHeight - 18
        << "\" text-anchor=\"middle\" font-size=\"14\">" << x_label << "</text>\n";
    out << "<text x=\"22\" y=\"" << kMarginT + px_h / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 22 " << kMarginT + px_h / 2
        << ")\">" << y_label << "</text>\n";

    size_t color_idx = 0;
    for (const auto& s : series) {
        const char* color = kSeriesColors[color_idx % (sizeof kSeriesColors / sizeof *kSeriesColors)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (size_t i = 0; i < s.x.size(); ++i) {
            double y = s.y[i];
            if (log_y) {
                if (y <= 0.0) continue;
                y = std::log10(y);
            }
            out << sx(s.x[i]) << "," << sy(y) << " ";
        }
        out << "\"/>\n";
        out << "<text x=\"" << kWidth - kMarginR - 8 << "\" y=\"" << kMarginT + 18 + 16 * color_idx
            << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">" << s.label << "</text>\n";
        ++color_idx;
    }
    out << "</svg>\n";
    return out.str();
}

std::string svg_heatmap(const EyeRaster& raster, const std::string& title) {
    const double px_w = kWidth - kMarginL - kMarginR;
    const double px_h = kHeight - kMarginT - kMarginB;
    const double cell_w = px_w / static_cast<double>(raster.phase_bins);
    const double cell_h = px_h / static_cast<double>(raster.amplitude_bins);

    uint64_t max_count = 1;
    for (uint64_t c : raster.counts) max_count = std::max(max_count, c);
    const double log_max = std::log1p(static_cast<double>(max_count));

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"#000010\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"28\" fill=\"white\" text-anchor=\"middle\" font-size=\"18\">"
        << title << "</text>\n";
    for (size_t row = 0; row < raster.amplitude_bins; ++row) {
        for (size_t col = 0; col < raster.phase_bins; ++col) {
            const uint64_t c = raster.at(row, col);
            if (c == 0) continue;
            const double t = std::log1p(static_cast<double>(c)) / log_max;
            const int r = static_cast<int>(255.0 * std::min(1.0, 2.0 * t));
            const int g = static_cast<int>(255.0 * std::max(0.0, 2.0 * t - 1.0));
            const int b = static_cast<int>(64.0 + 96.0 * (1.0 - t));
            const double x = kMarginL + cell_w * static_cast<double>(col);
            const double y = kHeight - kMarginB - cell_h * static_cast<double>(row + 1);
            out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w + 0.5 << "\" height=\""
                << cell_h + 0.5 << "\" fill=\"rgb(" << r << "," << g << "," << b << ")\"/>\n";
        }
    }
    out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\"" << px_w << "\" height=\""
        << px_h << "\" fill=\"none\" stroke=\"#888888\"/>\n";
    out << "<text x=\"" << kMarginL + px_w / 2 << "\" y=\"" << kHeight - 18
        << "\" fill=\"white\" text-anchor=\"middle\" font-size=\"14\">phase (2 UI window)</text>\n";
    out << "<text x=\"22\" y=\"" << kMarginT + px_h / 2
        << "\" fill=\"white\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 22 "
        << kMarginT + px_h / 2 << ")\">amplitude (" << to_string(raster.unit) << ")</text>\n";
    out << "</svg>\n";
    return out.str();
}

} // namespace cryolink
