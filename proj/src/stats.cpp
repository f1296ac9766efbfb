#include "hyperwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace hyperwalk {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_total(std::span<const double> values) {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

MeanStderr mean_stderr(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("mean_stderr needs at least two values");
  const double n = static_cast<double>(values.size());
  const double mean = compensated_total(values) / n;
  CompensatedSum sq;
  for (double v : values) sq.add((v - mean) * (v - mean));
  const double sd = std::sqrt(sq.value() / (n - 1.0));
  return {mean, sd / std::sqrt(n), sd, values.size()};
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("least_squares needs matching samples of size >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares: degenerate abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

double chi_square_survival(double statistic, int degrees_of_freedom) {
  if (degrees_of_freedom <= 0) return 1.0;
  if (statistic <= 0.0) return 1.0;
  boost::math::chi_squared dist(degrees_of_freedom);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

ChiSquareResult chi_square_two_sample(std::span<const double> counts_a,
                                      std::span<const double> counts_b, double min_expected) {
  if (counts_a.size() != counts_b.size()) {
    throw std::invalid_argument("chi_square_two_sample: category count mismatch");
  }
  const double na = compensated_total(counts_a);
  const double nb = compensated_total(counts_b);
  ChiSquareResult result;
  if (na <= 0.0 || nb <= 0.0) {
    result.vacuous = true;
    return result;
  }
  const double n = na + nb;

  // Greedy left-to-right merging; the trailing remainder joins the last cell.
  std::vector<std::pair<double, double>> cells;
  double acc_a = 0.0, acc_b = 0.0;
  for (std::size_t i = 0; i < counts_a.size(); ++i) {
    acc_a += counts_a[i];
    acc_b += counts_b[i];
    const double total = acc_a + acc_b;
    if (total * na / n >= min_expected && total * nb / n >= min_expected) {
      cells.emplace_back(acc_a, acc_b);
      acc_a = acc_b = 0.0;
    }
  }
  if (acc_a + acc_b > 0.0) {
    if (cells.empty()) {
      cells.emplace_back(acc_a, acc_b);
    } else {
      cells.back().first += acc_a;
      cells.back().second += acc_b;
    }
  }
  result.merged_cells = cells.size();
  if (cells.size() < 2) {
    result.vacuous = true;
    return result;
  }
  double stat = 0.0;
  for (const auto& [a, b] : cells) {
    const double total = a + b;
    const double ea = total * na / n;
    const double eb = total * nb / n;
    stat += (a - ea) * (a - ea) / ea + (b - eb) * (b - eb) / eb;
  }
  result.statistic = stat;
  result.degrees_of_freedom = static_cast<int>(cells.size()) - 1;
  result.p_value = chi_square_survival(stat, result.degrees_of_freedom);
  return result;
}

}  // namespace hyperwalk
