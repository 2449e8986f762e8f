#pragma once

// Minimal SVG line plots for inspecting CSV output.

#include "neuristor/io.hpp"

#include <string>
#include <vector>

namespace neuristor {

struct PlotOptions {
    std::string title;
    int width = 800;
    int height = 480;
    std::size_t max_points = 2000;  ///< per channel, by uniform decimation
};

/// One polyline per y column against column `x`; every channel shares the y axis.
/// Throws std::out_of_range for unknown columns.
std::string line_plot_svg(const CsvTable& table, const std::string& x,
                          const std::vector<std::string>& ys, const PlotOptions& options = {});

}  // namespace neuristor
