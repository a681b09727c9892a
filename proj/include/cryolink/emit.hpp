#pragma once

#include <string>
#include <vector>

#include "cryolink/metrics.hpp"

namespace cryolink {

// Writes via a temp file in the same directory, then renames into place.
void write_text_atomic(const std::string& path, const std::string& content);

std::string format_full(double v);

// CSV bodies (RFC-4180-style, header row, full-precision floats).
std::string bathtub_csv(const BathtubCurve& curve);
std::string eye_raster_csv(const EyeRaster& raster);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Minimal self-contained SVG plotter: polyline chart with linear or log10
// y axis, and a grayscale-to-color heatmap for eye rasters.
std::string svg_line_plot(const std::vector<PlotSeries>& series, const std::string& title,
                          const std::string& x_label, const std::string& y_label, bool log_y);
std::string svg_heatmap(const EyeRaster& raster, const std::string& title);

} // namespace cryolink
