#include "hyperwalk/estimators.hpp"

#include <cmath>
#include <limits>
#include <variant>

namespace hyperwalk {

EntropyMethod parse_entropy_method(const std::string& name) {
  if (name == "increment") return EntropyMethod::kIncrement;
  if (name == "plug_in") return EntropyMethod::kPlugIn;
  throw std::invalid_argument("unknown entropy method '" + name + "' (increment | plug_in)");
}

std::string to_string(EntropyMethod m) {
  return m == EntropyMethod::kIncrement ? "increment" : "plug_in";
}

nlohmann::json PQSweepReport::to_json() const {
  auto j = nlohmann::json{{"rows", sweep_json(rows)},
                          {"fitted_c", fitted_c},
                          {"max_fitted_c", max_fitted_c},
                          {"delta_decreasing", delta_decreasing},
                          {"entropy_bounded", entropy_bounded},
                          {"partial", partial}};
  return j;
}

PQSweepReport pq_sweep(const ExperimentParams& params, const std::vector<int>& sides,
                       const std::vector<int>& tiles) {
  if (sides.size() != tiles.size()) throw std::invalid_argument("pq_sweep: P and Q lists differ");
  PQSweepReport rep;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    SweepRow row;
    try {
      const FuchsianGroup g(sides[i], tiles[i]);
      row = sweep_cell(g, params, sides[i], tiles[i]);
    } catch (const std::exception& e) {
      row.P = sides[i];
      row.Q = tiles[i];
      row.p = params.model.p;
      row.status = "failed";
      row.error = e.what();
    }
    rep.rows.push_back(row);
  }
  double c_max = -std::numeric_limits<double>::infinity();
  for (const auto& r : rep.rows) {
    if (r.status != "ok") {
      rep.partial = true;
      rep.fitted_c.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double log_q = std::log(static_cast<double>(r.Q));
    const double c = (2.0 * log_q - r.l_hat) * r.p / std::log(log_q);
    rep.fitted_c.push_back(c);
    c_max = std::max(c_max, c);
    if (r.h_hat > log_q + 2.0 * r.h_se) rep.entropy_bounded = false;
  }
  rep.max_fitted_c = std::isfinite(c_max) ? c_max : std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
    const auto& a = rep.rows[i];
    const auto& b = rep.rows[i + 1];
    if (a.status != "ok" || b.status != "ok" || a.P != b.P || b.Q <= a.Q) continue;
    const double se = std::sqrt(a.delta_se * a.delta_se + b.delta_se * b.delta_se);
    if (a.delta_hat - b.delta_hat <= -2.0 * se) rep.delta_decreasing = false;
  }
  return rep;
}

nlohmann::json PSweepReport::to_json() const {
  return {{"rows", sweep_json(rows)}, {"jump_after", jump_after}, {"partial", partial}};
}

PSweepReport p_sweep(const AnyBackend& backend, const ExperimentParams& params,
                     const std::vector<double>& ps, double jump_sigmas) {
  PSweepReport rep;
  for (double p : ps) {
    ExperimentParams cell = params;
    cell.model = EnvironmentModel::bernoulli(p);
    auto row = std::visit(
        [&](const auto& g) {
          int sides = 0, tiles = 0;
          if constexpr (std::is_same_v<std::decay_t<decltype(g)>, FuchsianGroup>) {
            sides = g.sides();
            tiles = g.tiles_per_vertex();
          }
          return sweep_cell(g, cell, sides, tiles);
        },
        backend);
    if (row.status != "ok") {
      rep.partial = true;
      if (row.error.find("no surviving cluster") != std::string::npos) row.status = "skipped";
    }
    rep.rows.push_back(row);
  }
  for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
    const auto& a = rep.rows[i];
    const auto& b = rep.rows[i + 1];
    bool jump = false;
    if (a.status == "ok" && b.status == "ok") {
      const double se = std::sqrt(a.delta_se * a.delta_se + b.delta_se * b.delta_se);
      jump = std::abs(a.delta_hat - b.delta_hat) > jump_sigmas * se;
    }
    rep.jump_after.push_back(jump);
  }
  return rep;
}

}  // namespace hyperwalk
