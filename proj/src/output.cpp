#include "hyperwalk/output.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hyperwalk {

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string values_csv(const EstimateReport& report) {
  std::ostringstream os;
  os << "replica,value\n";
  for (std::size_t i = 0; i < report.values.size(); ++i) {
    os << i << ',' << format_double(report.values[i]) << '\n';
  }
  return os.str();
}

std::string checkpoints_csv(const EstimateReport& report) {
  std::ostringstream os;
  os << "steps,estimate,stderr\n";
  for (const auto& c : report.checkpoints) {
    os << c.steps << ',' << format_double(c.estimate) << ',' << format_double(c.stderr_) << '\n';
  }
  return os.str();
}

std::string slopes_csv(const LocalDimensionReport& report) {
  std::ostringstream os;
  os << "probe,slope,two_point_slope\n";
  for (std::size_t i = 0; i < report.slopes.size(); ++i) {
    os << i << ',' << format_double(report.slopes[i]) << ','
       << format_double(report.two_point_slopes[i]) << '\n';
  }
  return os.str();
}

std::string radius_csv(const LocalDimensionReport& report) {
  std::ostringstream os;
  os << "j,radius,pairs,kept\n";
  for (std::size_t c = 0; c < report.grid.size(); ++c) {
    os << report.grid[c] << ',' << format_double(report.radii[c]) << ','
       << format_double(report.column_pairs[c]) << ',' << (report.radius_kept[c] ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string shadow_grid_csv(const ShadowReport& report) {
  std::ostringstream os;
  os << "log_c,r0,pass_rate\n";
  for (std::size_t i = 0; i < report.grid_rates.size(); ++i) {
    os << format_double(report.grid_rates[i].first) << ','
       << format_double(report.grid_rates[i].second) << ',' << format_double(report.grid_pass[i])
       << '\n';
  }
  return os.str();
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round step from {1, 2, 5} x 10^k giving about `target` ticks.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string svg_plot(const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<PlotSeries>& series) {
  constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      const double e = i < s.err.size() && std::isfinite(s.err[i]) ? s.err[i] : 0.0;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i] - e);
      y1 = std::max(y1, s.y[i] + e);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * (kW - kLeft - kRight); };
  const auto py = [&](double y) { return kH - kBottom - (y - y0) / (y1 - y0) * (kH - kTop - kBottom); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(title) << "</text>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight
     << "\" y2=\"" << kH - kBottom << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
     << kH - kBottom << "\" stroke=\"black\"/>\n";
  const double xs = nice_step(x1 - x0, 6), ys = nice_step(y1 - y0, 6);
  for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
    os << "<line x1=\"" << px(t) << "\" y1=\"" << kH - kBottom << "\" x2=\"" << px(t)
       << "\" y2=\"" << kH - kBottom + 5 << "\" stroke=\"black\"/>"
       << "<text x=\"" << px(t) << "\" y=\"" << kH - kBottom + 18
       << "\" text-anchor=\"middle\">" << format_double(std::round(t / xs) * xs) << "</text>\n";
  }
  for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys) {
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(t) << "\" x2=\"" << kLeft << "\" y2=\""
       << py(t) << "\" stroke=\"black\"/>"
       << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(t) + 4 << "\" text-anchor=\"end\">"
       << format_double(std::round(t / ys) * ys) << "</text>\n";
  }
  os << "<text x=\"" << (kLeft + kW - kRight) / 2 << "\" y=\"" << kH - 15
     << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << (kTop + kH - kBottom) / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << (kTop + kH - kBottom) / 2
     << ")\">" << escape(y_label) << "</text>\n";

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % 5];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (std::isfinite(s.y[i])) os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    os << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\""
         << color << "\"/>\n";
      if (i < s.err.size() && s.err[i] > 0) {
        os << "<line x1=\"" << px(s.x[i]) << "\" y1=\"" << py(s.y[i] - s.err[i]) << "\" x2=\""
           << px(s.x[i]) << "\" y2=\"" << py(s.y[i] + s.err[i]) << "\" stroke=\"" << color
           << "\"/>\n";
      }
    }
    os << "<text x=\"" << kW - kRight - 5 << "\" y=\"" << kTop + 15 * (k + 1)
       << "\" text-anchor=\"end\" fill=\"" << color << "\">" << escape(s.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace hyperwalk
