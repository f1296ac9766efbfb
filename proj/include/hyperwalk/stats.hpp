#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hyperwalk {

/// Neumaier's compensated summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_total(std::span<const double> values);

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

/// Sample mean, sample standard deviation and stddev / sqrt(n). Needs n >= 2.
MeanStderr mean_stderr(std::span<const double> values);

/// Linear-interpolation quantile (Hyndman-Fan type 7) of unsorted data.
double quantile(std::vector<double> values, double q);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares fit of y on x; needs at least two distinct x values.
LineFit least_squares(std::span<const double> x, std::span<const double> y);

struct ChiSquareResult {
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
  std::size_t merged_cells = 0;
  bool vacuous = false;
};

/// Two-sample chi-square homogeneity test on category counts. Categories are
/// merged in order until every merged cell has expected count >= min_expected
/// in both samples. A single surviving cell gives a vacuous result (p = 1).
ChiSquareResult chi_square_two_sample(std::span<const double> counts_a,
                                      std::span<const double> counts_b,
                                      double min_expected = 5.0);

/// Upper tail of the chi-square distribution.
double chi_square_survival(double statistic, int degrees_of_freedom);

}  // namespace hyperwalk
