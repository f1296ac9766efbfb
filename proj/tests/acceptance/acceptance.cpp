// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
// Exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hyperwalk/config.hpp"
#include "hyperwalk/estimators.hpp"
#include "hyperwalk/oracles.hpp"
#include "hyperwalk/output.hpp"

namespace hw = hyperwalk;

namespace {

// Criterion 1: tree baseline.
constexpr double kTreeSpeedTol = 0.02;
constexpr double kTreeEntropyTol = 0.03;
constexpr double kTreeSlopeTol = 0.10;
constexpr double kTreeRuntimeSeconds = 120;
// Criterion 2: dimension formula under percolation.
constexpr double kFormulaSigmas = 3.0;
constexpr double kIqrShrink = 0.30;  // IQR(4M) <= (1 - shrink) IQR(M)
constexpr double kFormulaRuntimeSeconds = 600;
// Criterion 3: shadows.
constexpr double kShadowPassRate = 0.95;
// Criterion 4: stationarity.
constexpr double kStationarityLevel = 0.01;
// Criterion 5: environment independence.
constexpr double kBatchSigmas = 3.0;
// Criterion 6: {P,Q} sweep.
constexpr double kSweepDeltaAtQ64 = 0.75;
constexpr double kSweepRuntimeSeconds = 1800;
// Criterion 8: conservation.
constexpr double kConservationTol = 1e-12;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

hw::ExperimentConfig config(const hw::ConfigValues& values) {
  // Round trip through a manifest so every run starts from one.
  const auto c = hw::resolve_config(values);
  return hw::resolve_config(
      hw::config_from_manifest(hw::make_manifest("acceptance", c, {}, 0), nullptr));
}

struct Conservation {
  double dp = 0.0;
  double row = 0.0;
  void add(const hw::EstimateReport& r) {
    dp = std::max(dp, r.diagnostics.value("max_conservation_error", 0.0));
    row = std::max(row, r.diagnostics.value("max_row_sum_error", 0.0));
  }
};

// Each experiment returns its serialized artifacts so reruns can be compared
// byte for byte.
struct SpeedEntropy {
  hw::EstimateReport speed, entropy, ratio;
  std::string artifacts;
};

SpeedEntropy speed_entropy(const hw::ExperimentConfig& c, Conservation& cons) {
  const hw::FreeGroup g(2);
  SpeedEntropy out;
  out.speed = hw::estimate_speed(g, c.params);
  out.entropy = hw::estimate_entropy(g, c.params);
  out.ratio = hw::ratio_report(out.entropy, out.speed);
  cons.add(out.speed);
  cons.add(out.entropy);
  out.artifacts = hw::values_csv(out.speed) + hw::checkpoints_csv(out.speed) +
                  hw::values_csv(out.entropy) + out.speed.to_json().dump() +
                  out.entropy.to_json().dump() + out.ratio.to_json().dump();
  return out;
}

struct Dimension {
  hw::LocalDimensionReport rep;
  std::string artifacts;
};

Dimension dimension(const hw::ExperimentConfig& c) {
  Dimension out;
  out.rep = hw::estimate_local_dimension(hw::FreeGroup(2), c.params);
  out.artifacts = hw::slopes_csv(out.rep) + hw::radius_csv(out.rep) + out.rep.to_json().dump();
  return out;
}

struct Line {
  bool pass;
  std::string text;
};

std::vector<Line> lines;

void report(int id, bool pass, const std::string& text) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, text.c_str());
  std::fflush(stdout);
  lines.push_back({pass, text});
}

}  // namespace

int main() {
  Conservation cons;
  std::vector<std::pair<std::string, std::function<std::string()>>> reruns;

  // 1. Tree baseline.
  {
    const auto c = config({{"backend", "free:2"}, {"p", "1"}, {"seed", "1"}});
    const auto t0 = Clock::now();
    const auto se = speed_entropy(c, cons);
    const auto dim = dimension(c);
    const double elapsed = seconds_since(t0);
    const double l = se.speed.estimate, h = se.entropy.estimate, s = dim.rep.median;
    const double l_ref = hw::oracles::tree_srw_speed(3), h_ref = hw::oracles::tree_srw_entropy(3);
    const double s_ref = std::log(3.0);
    const bool ok = std::abs(l - l_ref) <= kTreeSpeedTol && std::abs(h - h_ref) <= kTreeEntropyTol &&
                    std::abs(s - s_ref) <= kTreeSlopeTol && elapsed < kTreeRuntimeSeconds;
    report(1, ok,
           "F_2 p=1: l=" + fmt(l) + " (" + fmt(l_ref) + "+-" + fmt(kTreeSpeedTol) + "), h=" + fmt(h) +
               " (" + fmt(h_ref) + "+-" + fmt(kTreeEntropyTol) + "), median slope=" + fmt(s) + " (" +
               fmt(s_ref) + "+-" + fmt(kTreeSlopeTol) + "), " + fmt(elapsed, 3) + " s");
    reruns.emplace_back("1", [c, a = se.artifacts + dim.artifacts] {
      Conservation unused;
      return std::string(speed_entropy(c, unused).artifacts + dimension(c).artifacts == a ? "same"
                                                                                           : "DIFF");
    });
  }

  // 2. Dimension formula under percolation; 5. environment independence.
  SpeedEntropy batch_a;
  {
    const auto c = config({{"backend", "free:2"}, {"p", "0.9"}, {"r_infty", "30"}, {"seed", "1"},
                           {"boundary_samples", "1000"}});
    auto c4 = config({{"backend", "free:2"}, {"p", "0.9"}, {"r_infty", "30"}, {"seed", "1"},
                      {"boundary_samples", "4000"}});
    const auto t0 = Clock::now();
    batch_a = speed_entropy(c, cons);
    const auto d1 = dimension(c);
    const auto d4 = dimension(c4);
    const double elapsed = seconds_since(t0);
    const double ratio = batch_a.ratio.estimate;
    const double combined = std::hypot(batch_a.ratio.stderr_, d1.rep.median_stderr);
    const double gap = std::abs(d1.rep.median - ratio);
    const double shrink = 1.0 - d4.rep.iqr / d1.rep.iqr;
    const bool ok = gap < kFormulaSigmas * combined && shrink >= kIqrShrink &&
                    elapsed < kFormulaRuntimeSeconds;
    report(2, ok,
           "F_2 p=0.9: median slope=" + fmt(d1.rep.median) + ", h/l=" + fmt(ratio) + ", gap " +
               fmt(gap / combined, 3) + " combined se (< " + fmt(kFormulaSigmas) + "); IQR " +
               fmt(d1.rep.iqr) + " -> " + fmt(d4.rep.iqr) + " shrink " + fmt(100 * shrink, 3) +
               "% (>= " + fmt(100 * kIqrShrink) + "%), " + fmt(elapsed, 3) + " s");
    reruns.emplace_back("2", [c, c4, a = batch_a.artifacts + d1.artifacts + d4.artifacts] {
      Conservation unused;
      const auto b = speed_entropy(c, unused).artifacts + dimension(c).artifacts +
                     dimension(c4).artifacts;
      return std::string(a == b ? "same" : "DIFF");
    });
  }

  // 3. Shadow sandwich on the tree.
  {
    // Every one of the 10^3 samples is a probe, tested against all the others.
    const auto c = config({{"backend", "free:2"}, {"p", "1"}, {"seed", "1"},
                           {"boundary_samples", "1000"}, {"shadow_probes", "1000"}});
    const auto run = [c] {
      const auto rep = hw::verify_shadow_sandwich(hw::FreeGroup(2), c.params);
      return std::make_pair(rep, hw::shadow_grid_csv(rep) + rep.to_json().dump());
    };
    const auto [rep, artifacts] = run();
    const bool ok = rep.fit_found && rep.pass_rate >= kShadowPassRate && rep.log_linear;
    report(3, ok,
           "F_2, " + std::to_string(rep.samples) + " samples: pass rate " + fmt(rep.pass_rate) +
               " (>= " + fmt(kShadowPassRate) + ") at log C=" +
               fmt(rep.fitted_log_c) + ", R0=" + fmt(rep.fitted_r0) + " over " +
               std::to_string(rep.tested) + " (sample, depth, R) cases; log-linearity error " +
               fmt(rep.log_linear_error, 3));
    reruns.emplace_back("3", [run, a = artifacts] {
      return std::string(run().second == a ? "same" : "DIFF");
    });
  }

  // 4. Stationarity with the degree-biased law, and the unweighted control.
  {
    const auto c = config({{"backend", "free:2"}, {"p", "0.7"}, {"seed", "1"},
                           {"stationarity_replicas", "10000"}});
    const auto run = [c] {
      const hw::FreeGroup g(2);
      const auto w = hw::stationarity_test(g, c.params, true);
      const auto u = hw::stationarity_test(g, c.params, false);
      return std::make_tuple(w, u, w.to_json().dump() + u.to_json().dump());
    };
    const auto [w, u, artifacts] = run();
    const bool ok = !w.vacuous && w.p_value >= kStationarityLevel && u.p_value < kStationarityLevel;
    report(4, ok,
           "F_2 p=0.7, 10^4 replicas: weighted p-value " + fmt(w.p_value) + " (>= " +
               fmt(kStationarityLevel) + "), unweighted control p-value " + fmt(u.p_value) +
               " (< " + fmt(kStationarityLevel) + ")");
    reruns.emplace_back("4", [run, a = artifacts] {
      return std::string(std::get<2>(run()) == a ? "same" : "DIFF");
    });
  }

  // 5. Environment independence: a second batch with another master seed.
  {
    const auto c = config({{"backend", "free:2"}, {"p", "0.9"}, {"r_infty", "30"}, {"seed", "2"}});
    const auto b = speed_entropy(c, cons);
    const auto& a = batch_a;
    const double zl = std::abs(a.speed.estimate - b.speed.estimate) /
                      std::hypot(a.speed.stderr_, b.speed.stderr_);
    const double zh = std::abs(a.entropy.estimate - b.entropy.estimate) /
                      std::hypot(a.entropy.stderr_, b.entropy.stderr_);
    const bool ok = zl < kBatchSigmas && zh < kBatchSigmas;
    report(5, ok,
           "F_2 p=0.9 seeds 1 vs 2: l " + fmt(a.speed.estimate) + " vs " + fmt(b.speed.estimate) +
               " (" + fmt(zl, 3) + " se), h " + fmt(a.entropy.estimate) + " vs " +
               fmt(b.entropy.estimate) + " (" + fmt(zh, 3) + " se), limit " + fmt(kBatchSigmas) +
               " se");
    reruns.emplace_back("5", [c, art = b.artifacts] {
      Conservation unused;
      return std::string(speed_entropy(c, unused).artifacts == art ? "same" : "DIFF");
    });
  }

  // 6. {P,Q} sweep.
  {
    const auto c = config({{"p", "0.9"}, {"seed", "1"}, {"sweep_P", "5,5,5,5"},
                           {"sweep_Q", "8,16,32,64"}});
    const auto t0 = Clock::now();
    const auto rep = hw::pq_sweep(c.params, c.sweep_sides, c.sweep_tiles);
    const double elapsed = seconds_since(t0);
    for (const auto& r : rep.rows) {
      cons.dp = std::max(cons.dp, r.max_conservation_error);
      cons.row = std::max(cons.row, r.max_row_sum_error);
    }
    std::string table;
    for (const auto& r : rep.rows) {
      table += " Q=" + std::to_string(r.Q) + ":" + fmt(r.delta_hat) + "+-" + fmt(r.delta_se, 2);
    }
    const auto& last = rep.rows.back();
    const bool ok = !rep.partial && rep.delta_decreasing && rep.entropy_bounded &&
                    last.delta_hat < kSweepDeltaAtQ64 && elapsed < kSweepRuntimeSeconds;
    report(6, ok,
           "P=5 p=0.9 delta:" + table + "; decreasing " + (rep.delta_decreasing ? "yes" : "no") +
               ", h <= log Q + 2se " + (rep.entropy_bounded ? "yes" : "no") + ", delta(64) < " +
               fmt(kSweepDeltaAtQ64) + " " + (last.delta_hat < kSweepDeltaAtQ64 ? "yes" : "no") +
               ", fitted c max " + fmt(rep.max_fitted_c) + ", " + fmt(elapsed, 3) + " s");
    reruns.emplace_back("6", [c, a = hw::sweep_csv(rep.rows) + rep.to_json().dump()] {
      const auto again = hw::pq_sweep(c.params, c.sweep_sides, c.sweep_tiles);
      return std::string(hw::sweep_csv(again.rows) + again.to_json().dump() == a ? "same" : "DIFF");
    });
  }

  // 7. Determinism: every run above repeated from its manifest.
  {
    std::string detail;
    bool ok = true;
    for (const auto& [name, rerun] : reruns) {
      const auto verdict = rerun();
      ok = ok && verdict == "same";
      detail += " " + name + ":" + verdict;
    }
    report(7, ok, "byte-identical reruns:" + detail);
  }

  // 8. Conservation over every DP and kernel row used above.
  report(8, cons.dp <= kConservationTol && cons.row <= kConservationTol,
         "max |stored + truncated - 1| = " + fmt(cons.dp, 3) + ", max |row sum - 1| = " +
             fmt(cons.row, 3) + " (<= " + fmt(kConservationTol) + ")");

  int failed = 0;
  for (const auto& l : lines) failed += !l.pass;
  std::printf("%d of %zu criteria passed\n", static_cast<int>(lines.size()) - failed, lines.size());
  return failed == 0 ? 0 : 1;
}
