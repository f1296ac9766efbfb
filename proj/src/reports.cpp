#include "hyperwalk/reports.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "hyperwalk/stats.hpp"

namespace hyperwalk {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

nlohmann::json EstimateReport::to_json(bool with_values) const {
  nlohmann::json j = {{"quantity", quantity}, {"estimate", estimate}, {"stderr", stderr_},
                      {"replicas", replicas}, {"steps", steps},       {"method", method},
                      {"metric", metric},     {"diagnostics", diagnostics}};
  if (!checkpoints.empty()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : checkpoints) {
      rows.push_back({{"steps", c.steps}, {"estimate", c.estimate}, {"stderr", c.stderr_}});
    }
    j["checkpoints"] = std::move(rows);
  }
  if (with_values) j["values"] = values;
  return j;
}

EstimateReport ratio_report(const EstimateReport& entropy, const EstimateReport& speed) {
  if (entropy.values.size() != speed.values.size() || entropy.values.size() < 2) {
    throw std::invalid_argument("ratio needs paired entropy and speed values");
  }
  const std::size_t m = entropy.values.size();
  const double h = mean_stderr(entropy.values).mean;
  const double l = mean_stderr(speed.values).mean;
  EstimateReport r;
  r.quantity = "ratio_h_over_l";
  r.estimate = entropy.estimate / speed.estimate;
  r.replicas = m;
  r.steps = entropy.steps;
  r.method = "delta_method";
  r.metric = speed.metric;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double resid = entropy.values[i] - r.estimate * speed.values[i];
    r.values.push_back(entropy.values[i] / speed.values[i]);
    ss += resid * resid;
  }
  r.stderr_ = std::sqrt(ss / static_cast<double>(m * (m - 1))) / l;
  r.diagnostics = {{"h_mean", h}, {"l_mean", l}};
  return r;
}

nlohmann::json LocalDimensionReport::to_json(bool with_slopes) const {
  nlohmann::json j = {{"samples", samples},
                      {"probes", probes},
                      {"usable_probes", usable_probes},
                      {"horizon", horizon},
                      {"grid", grid},
                      {"radii", radii},
                      {"column_pairs", column_pairs},
                      {"radius_kept", radius_kept},
                      {"warnings", warnings},
                      {"median", median},
                      {"q25", q25},
                      {"q75", q75},
                      {"iqr", iqr},
                      {"median_stderr", median_stderr},
                      {"two_point_median", two_point_median},
                      {"aggregate_slope", aggregate_slope}};
  if (with_slopes) {
    j["slopes"] = slopes;
    j["two_point_slopes"] = two_point_slopes;
  }
  return j;
}

nlohmann::json ShadowReport::to_json() const {
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : failures) {
    fails.push_back({{"sample", f.sample},
                     {"depth", f.depth},
                     {"R", f.radius},
                     {"witness", f.witness},
                     {"kind", f.kind}});
  }
  nlohmann::json grid = nlohmann::json::array();
  for (std::size_t i = 0; i < grid_rates.size(); ++i) {
    grid.push_back({{"log_C", grid_rates[i].first},
                    {"R0", grid_rates[i].second},
                    {"pass_rate", grid_pass[i]}});
  }
  return {{"samples", samples},       {"tested", tested},
          {"fit_found", fit_found},   {"log_C", fitted_log_c},
          {"C", std::exp(fitted_log_c)}, {"R0", fitted_r0},
          {"pass_rate", pass_rate},   {"log_linear", log_linear},
          {"log_linear_error", log_linear_error}, {"grid", grid},
          {"failures", fails}};
}

nlohmann::json StationarityReport::to_json() const {
  return {{"weighted", weighted},     {"replicas", replicas},
          {"before", before_count},   {"after", after_count},
          {"statistic", statistic},   {"dof", degrees_of_freedom},
          {"p_value", p_value},       {"level", level},
          {"vacuous", vacuous},       {"passed", passed},
          {"rejections", rejections}, {"before_mean", before_mean},
          {"after_mean", after_mean}};
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "P,Q,p,l_hat,l_se,h_hat,h_se,delta_hat,delta_se,status\n";
  for (const auto& r : rows) {
    os << r.P << ',' << r.Q << ',' << format_double(r.p) << ',' << format_double(r.l_hat) << ','
       << format_double(r.l_se) << ',' << format_double(r.h_hat) << ','
       << format_double(r.h_se) << ',' << format_double(r.delta_hat) << ','
       << format_double(r.delta_se) << ',' << r.status << '\n';
  }
  return os.str();
}

nlohmann::json sweep_json(const std::vector<SweepRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j = {{"backend", r.backend},   {"P", r.P},
                        {"Q", r.Q},               {"p", r.p},
                        {"l_hat", r.l_hat},       {"l_se", r.l_se},
                        {"h_hat", r.h_hat},       {"h_se", r.h_se},
                        {"delta_hat", r.delta_hat}, {"delta_se", r.delta_se},
                        {"truncated_mass", r.truncated_mass},
                        {"max_conservation_error", r.max_conservation_error},
                        {"max_row_sum_error", r.max_row_sum_error}, {"status", r.status}};
    if (!r.error.empty()) j["error"] = r.error;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace hyperwalk
