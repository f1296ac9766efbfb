#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace hyperwalk {

struct Checkpoint {
  int steps = 0;
  double estimate = 0.0;
  double stderr_ = 0.0;
};

/// Point estimate with CLT standard error over M replicas.
struct EstimateReport {
  std::string quantity;  // speed | entropy | ratio_h_over_l
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t replicas = 0;
  int steps = 0;
  std::string method;
  std::string metric;  // word | hyperbolic
  std::vector<double> values;
  std::vector<Checkpoint> checkpoints;
  nlohmann::json diagnostics = nlohmann::json::object();

  nlohmann::json to_json(bool with_values = false) const;
};

/// delta = mean(h) / mean(l) from paired per-replica values, with the
/// delta-method standard error (which accounts for the pairing).
EstimateReport ratio_report(const EstimateReport& entropy, const EstimateReport& speed);

struct LocalDimensionReport {
  std::size_t samples = 0;  // M boundary samples
  std::size_t probes = 0;   // K
  int horizon = 0;
  std::vector<int> grid;            // j, radius r = exp(-j), decreasing r
  std::vector<double> radii;
  std::vector<double> column_pairs;  // pair counts per radius summed over probes
  std::vector<bool> radius_kept;
  std::vector<std::string> warnings;
  std::vector<double> slopes;            // least squares, per probe (NaN when undefined)
  std::vector<double> two_point_slopes;  // first and last usable radius, per probe
  std::vector<std::vector<std::uint32_t>> pair_counts;  // probe x radius
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double iqr = 0.0;
  double median_stderr = 0.0;
  double two_point_median = 0.0;
  double aggregate_slope = 0.0;  // slope of log(mean ball mass) on log r
  std::size_t usable_probes = 0;

  nlohmann::json to_json(bool with_slopes = false) const;
};

struct ShadowFailure {
  std::size_t sample = 0;
  int depth = 0;
  double radius = 0.0;
  std::size_t witness = 0;
  std::string kind;  // inner | outer
};

struct ShadowReport {
  std::size_t samples = 0;
  std::size_t tested = 0;
  double fitted_log_c = 0.0;
  double fitted_r0 = 0.0;
  double pass_rate = 0.0;
  bool fit_found = false;
  bool log_linear = false;
  double log_linear_error = 0.0;
  std::vector<std::pair<double, double>> grid_rates;  // (log C, R0) rows in scan order
  std::vector<double> grid_pass;
  std::vector<ShadowFailure> failures;

  nlohmann::json to_json() const;
};

struct StationarityReport {
  bool weighted = true;
  std::size_t replicas = 0;
  std::size_t before_count = 0;
  std::size_t after_count = 0;
  double statistic = 0.0;
  int degrees_of_freedom = 0;
  double p_value = 1.0;
  double level = 0.01;
  bool vacuous = false;
  bool passed = true;
  std::size_t rejections = 0;
  std::vector<double> before_mean;  // (root degree, ball edges)
  std::vector<double> after_mean;

  nlohmann::json to_json() const;
};

struct SweepRow {
  int P = 0;
  int Q = 0;
  double p = 0.0;
  double l_hat = 0.0, l_se = 0.0;
  double h_hat = 0.0, h_se = 0.0;
  double delta_hat = 0.0, delta_se = 0.0;
  double truncated_mass = 0.0;
  double max_conservation_error = 0.0;
  double max_row_sum_error = 0.0;
  std::string backend;
  std::string status = "ok";
  std::string error;
};

/// CSV with header P,Q,p,l_hat,l_se,h_hat,h_se,delta_hat,delta_se,status.
std::string sweep_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_json(const std::vector<SweepRow>& rows);

/// Shortest round-trip decimal for a double, so outputs are byte-stable.
std::string format_double(double x);

}  // namespace hyperwalk
