#pragma once

#include <string>
#include <vector>

#include "hyperwalk/reports.hpp"

namespace hyperwalk {

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::string& path, const std::string& content);

/// replica,value rows of an estimate.
std::string values_csv(const EstimateReport& report);
/// steps,estimate,stderr rows of the convergence table.
std::string checkpoints_csv(const EstimateReport& report);
/// probe,slope,two_point_slope rows.
std::string slopes_csv(const LocalDimensionReport& report);
/// radius_index,radius,pairs,kept rows.
std::string radius_csv(const LocalDimensionReport& report);
/// log_c,r0,pass_rate rows.
std::string shadow_grid_csv(const ShadowReport& report);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;  // optional error bars, same length as y
};

/// Small self-contained SVG line plot with axes, ticks and error bars.
std::string svg_plot(const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<PlotSeries>& series);

}  // namespace hyperwalk
