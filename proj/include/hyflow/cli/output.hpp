#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hyflow/measure.hpp"
#include "hyflow/oracle.hpp"

namespace hyflow::cli {

// Shortest text with 17 significant digits; "inf"/"-inf" for infinities, empty for NaN.
std::string format_number(double v);

// One row per exported curve sample.
std::string curves_csv(const MeasureSolution& solution, int samples);
std::string accretion_csv(const AccretionResult& result);

// Axis-true drawing of the wall, layers, contact line and shaded regions.
std::string plot_svg(const MeasureSolution& solution, const std::string& title = "");
// Free layers of several solutions over one wall; labels go into a legend.
std::string overlay_svg(const std::vector<std::pair<std::string, MeasureSolution>>& solutions,
                        const std::string& title = "");

void write_text_file(const std::string& path, const std::string& text);

}  // namespace hyflow::cli
