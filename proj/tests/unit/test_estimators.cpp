#include <cmath>

#include "doctest.h"
#include "hyperwalk/estimators.hpp"
#include "hyperwalk/oracles.hpp"

using namespace hyperwalk;

namespace {

ExperimentParams small_params(double p) {
  ExperimentParams params;
  params.model = EnvironmentModel::bernoulli(p);
  params.replicas = 40;
  params.horizon = 400;
  params.entropy_steps = 10;
  params.r_infty = 12;
  params.boundary_samples = 400;
  return params;
}

}  // namespace

TEST_CASE("speed on the tree agrees with the drift oracle and has a checkpoint table") {
  const FreeGroup g(2);
  const auto rep = estimate_speed(g, small_params(1.0));
  CHECK(rep.estimate == doctest::Approx(0.5).epsilon(0.05));
  CHECK(rep.stderr_ > 0.0);
  CHECK(rep.checkpoints.size() == 4);
  CHECK(rep.checkpoints.back().steps == 400);
  CHECK(rep.metric == "word");
  CHECK(rep.diagnostics["acceptance_rate"] == 1.0);
}

TEST_CASE("entropy increment at small n agrees with the exact expectation") {
  const FreeGroup g(2);
  auto params = small_params(1.0);
  params.dp_limits.adaptive_budget = 0;
  const auto rep = estimate_entropy(g, params);
  CHECK(std::abs(rep.estimate - oracles::tree_increment_entropy(3, 10)) < 4.0 * rep.stderr_);
  CHECK(rep.estimate <= std::log(4.0) + 0.01);
  params.entropy_method = EntropyMethod::kPlugIn;
  const auto plug = estimate_entropy(g, params);
  CHECK(std::abs(plug.estimate - oracles::tree_plug_in_entropy(3, 10)) < 4.0 * plug.stderr_);
}

TEST_CASE("ratio report is exactly the ratio of the means") {
  const FreeGroup g(2);
  const auto params = small_params(0.9);
  const auto h = estimate_entropy(g, params);
  const auto l = estimate_speed(g, params);
  const auto r = ratio_report(h, l);
  CHECK(std::abs(r.estimate - h.estimate / l.estimate) <= 1e-12);
  CHECK(r.stderr_ > 0.0);
}

TEST_CASE("estimates are deterministic and independent of the thread count") {
  const FreeGroup g(2);
  auto params = small_params(0.8);
  const auto a = estimate_speed(g, params);
  params.threads = 3;
  const auto b = estimate_speed(g, params);
  CHECK(a.values == b.values);
  const auto c = estimate_entropy(g, params);
  params.threads = 1;
  const auto d = estimate_entropy(g, params);
  CHECK(c.values == d.values);
}

TEST_CASE("local dimension on the tree recovers log 3 and both slope forms agree") {
  const FreeGroup g(2);
  auto params = small_params(1.0);
  params.boundary_samples = 2000;
  params.grid_min = 0;
  params.grid_max = 3;
  const auto rep = estimate_local_dimension(g, params);
  CHECK(rep.grid.size() == 4);
  for (std::size_t i = 1; i < rep.radii.size(); ++i) CHECK(rep.radii[i] < rep.radii[i - 1]);
  CHECK(rep.median == doctest::Approx(std::log(3.0)).epsilon(0.1));
  CHECK(std::abs(rep.aggregate_slope - std::log(3.0)) < 0.05);
  // Column pair counts against exact cylinder masses 1 / (4 * 3^j).
  const double pairs = 2000.0 * 1999.0;
  for (std::size_t c = 0; c < rep.grid.size(); ++c) {
    const double mass = 1.0 / (4.0 * std::pow(3.0, rep.grid[c]));
    CHECK(rep.column_pairs[c] / pairs == doctest::Approx(mass).epsilon(0.1));
  }
  CHECK(std::abs(rep.median - rep.two_point_median) < 0.05);
}

TEST_CASE("sparse radii are dropped with a warning") {
  const FreeGroup g(2);
  auto params = small_params(1.0);
  params.boundary_samples = 60;
  params.grid_min = 0;
  params.grid_max = 5;
  const auto rep = estimate_local_dimension(g, params);
  CHECK_FALSE(rep.warnings.empty());
  CHECK_FALSE(rep.radius_kept.back());
}

TEST_CASE("radius grids need four points") {
  const FreeGroup g(2);
  auto params = small_params(1.0);
  params.grid_min = 2;
  params.grid_max = 4;
  CHECK_THROWS(estimate_local_dimension(g, params));
}

TEST_CASE("shadows at R = |x| cover the whole boundary") {
  const FreeGroup g(2);
  const auto ce = sample_conditioned_environment(g, EnvironmentModel::bernoulli(1.0), 1, 0, 5);
  const WalkKernel<FreeGroup> k(ce.env);
  auto params = small_params(1.0);
  const auto samples = boundary_samples(k, params, 50);
  const auto x = g.parse("ab");
  for (const auto& s : samples) CHECK(shadow_membership(g, x, 2.0 + 1e-9, s));
}

TEST_CASE("shadow sandwich on the tree fits and is log-linear") {
  const FreeGroup g(2);
  auto params = small_params(1.0);
  params.boundary_samples = 300;
  params.shadow_probes = 30;
  const auto rep = verify_shadow_sandwich(g, params);
  CHECK(rep.fit_found);
  CHECK(rep.pass_rate >= 0.95);
  CHECK(rep.log_linear);
  CHECK(rep.log_linear_error < 1e-12);
}

TEST_CASE("stationarity at p = 1 is a vacuous pass") {
  const FreeGroup g(2);
  auto params = small_params(1.0);
  params.stationarity_replicas = 200;
  const auto rep = stationarity_test(g, params, true);
  CHECK(rep.vacuous);
  CHECK(rep.passed);
}

TEST_CASE("size-biasing oracle: root degree after a step") {
  // Unweighted, the walker's next position has a size-biased degree law;
  // weighting the start by degree makes both laws equal.
  for (double p : {0.5, 0.7}) {
    const auto w = oracles::tree_degree_laws_after_step(p, 4, true);
    const auto u = oracles::tree_degree_laws_after_step(p, 4, false);
    double gap_w = 0.0, gap_u = 0.0;
    for (std::size_t k = 0; k < w.root.size(); ++k) {
      gap_w = std::max(gap_w, std::abs(w.root[k] - w.after_step[k]));
      gap_u = std::max(gap_u, std::abs(u.root[k] - u.after_step[k]));
    }
    CHECK(gap_w < 1e-12);
    CHECK(gap_u > 0.01);
  }
}

TEST_CASE("Fuchsian speed is positive in the hyperbolic metric") {
  const FuchsianGroup g(5, 4);
  auto params = small_params(0.9);
  params.replicas = 20;
  params.horizon = 300;
  const auto rep = estimate_speed(g, params);
  CHECK(rep.metric == "hyperbolic");
  CHECK(rep.estimate > 5.0 * rep.stderr_);
}

TEST_CASE("pq sweep isolates failing cells") {
  auto params = small_params(0.9);
  params.replicas = 4;
  params.horizon = 50;
  params.entropy_steps = 4;
  params.r_infty = 5;
  const auto rep = pq_sweep(params, {5, 4}, {8, 4});
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].status == "ok");
  CHECK(rep.rows[1].status == "failed");
  CHECK(rep.partial);
}

TEST_CASE("p sweep reports subcritical cells as skipped") {
  const AnyBackend g = FreeGroup(2);
  auto params = small_params(1.0);
  params.replicas = 4;
  params.horizon = 50;
  params.entropy_steps = 4;
  params.r_infty = 60;
  const auto rep = p_sweep(g, params, {0.1, 1.0}, 3.0);
  CHECK(rep.rows[0].status == "skipped");
  CHECK(rep.rows[1].status == "ok");
  CHECK(rep.rows[1].delta_hat > 0.0);
}
