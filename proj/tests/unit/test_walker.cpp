#include <cmath>

#include "doctest.h"
#include "hyperwalk/oracles.hpp"
#include "hyperwalk/walker.hpp"

using namespace hyperwalk;

TEST_CASE("kernel rows are probability vectors") {
  const FreeGroup g(2);
  const Environment<FreeGroup> perc(g, EnvironmentModel::bernoulli(0.5), 3);
  const Environment<FreeGroup> cond(g, EnvironmentModel::conductance(0.1), 3);
  const WalkKernel<FreeGroup> a(perc), b(cond);
  CHECK(b.kind() == KernelKind::kConductance);
  for (const char* w : {"", "a", "abA", "bbb"}) {
    const auto v = g.parse(w);
    const auto ra = a.row(v);
    CHECK(ra.size() == static_cast<std::size_t>(perc.open_degree(v)));
    CHECK(a.row_sum_error(ra) == 0.0);
    const auto rb = b.row(v);
    CHECK(rb.size() == 4);
    CHECK(b.row_sum_error(rb) <= 1e-12);
    for (std::size_t i = 0; i < rb.size(); ++i) {
      CHECK(rb.probabilities[i] == doctest::Approx(rb.weights[i] / rb.total_weight));
    }
  }
}

TEST_CASE("walks are reproducible and only use open edges") {
  const FreeGroup g(2);
  const auto ce = sample_conditioned_environment(g, EnvironmentModel::bernoulli(0.7), 2, 0, 20);
  const WalkKernel<FreeGroup> k(ce.env);
  const auto t1 = run_walk(k, g.identity(), 300, 9, 4, stream::kTest);
  const auto t2 = run_walk(k, g.identity(), 300, 9, 4, stream::kTest);
  CHECK(t1.steps == t2.steps);
  for (std::size_t i = 0; i < t1.steps.size(); ++i) {
    CHECK(ce.env.is_open(t1.positions[i], t1.steps[i]));
    CHECK(t1.positions[i + 1] == g.multiply(t1.positions[i], t1.steps[i]));
  }
  const auto endpoint = run_walk(k, g.identity(), 300, 9, 4, stream::kTest, false);
  CHECK(endpoint.positions.size() == 1);
  CHECK(endpoint.positions.back() == t1.positions.back());
}

TEST_CASE("exact distribution on the tree matches the distance transfer matrix") {
  const FreeGroup g(2);
  const Environment<FreeGroup> env(g, EnvironmentModel::bernoulli(1.0), 0);
  const WalkKernel<FreeGroup> k(env);
  for (int n : {1, 2, 5, 9}) {
    const auto d = n_step_distribution(k, g.identity(), n, 0.0);
    const auto law = oracles::tree_distance_law(3, n);
    std::vector<double> by_len(n + 1, 0.0);
    for (const auto& e : d.entries) by_len[e.vertex.length()] += e.probability;
    for (int j = 0; j <= n; ++j) CHECK(by_len[j] == doctest::Approx(law[j]).epsilon(1e-12));
    CHECK(d.conservation_error() <= 1e-12);
    CHECK(d.max_conservation_error <= 1e-12);
  }
}

TEST_CASE("truncated and targeted distributions conserve mass") {
  const FuchsianGroup g(5, 8);
  const auto ce = sample_conditioned_environment(g, EnvironmentModel::bernoulli(0.8), 1, 0, 10);
  const WalkKernel<FuchsianGroup> k(ce.env);
  const auto full = n_step_distribution(k, g.identity(), 8, 0.0);
  const auto cut = n_step_distribution(k, g.identity(), 10, 1e-6);
  const auto uncut = n_step_distribution(k, g.identity(), 10, 0.0);
  CHECK(full.max_conservation_error <= 1e-12);
  CHECK(cut.max_conservation_error <= 1e-12);
  CHECK(cut.truncated_mass > 0.0);
  CHECK(cut.entries.size() < uncut.entries.size());
  // Targeting keeps exact probabilities near the target.
  const auto path = run_walk(k, g.identity(), 8, 1, 0, stream::kTest);
  const auto target = path.positions[7];
  const auto aimed = n_step_distribution(k, g.identity(), 8, 0.0,
                                         std::optional<FuchsianVertex>(target), 1);
  CHECK(aimed.max_conservation_error <= 1e-12);
  CHECK(aimed.probability(path.positions[8]) ==
        doctest::Approx(full.probability(path.positions[8])).epsilon(1e-12));
  CHECK(aimed.probability(target) == 0.0);  // parity: 8 steps cannot end at distance 7
}

TEST_CASE("conductance DP conserves mass to 1e-12") {
  const FreeGroup g(2);
  const Environment<FreeGroup> env(g, EnvironmentModel::conductance(0.2), 8);
  const WalkKernel<FreeGroup> k(env);
  const auto d = n_step_distribution(k, g.identity(), 10, 0.0);
  CHECK(d.max_conservation_error <= 1e-12);
}

TEST_CASE("the entry budget is enforced") {
  const FreeGroup g(3);
  const Environment<FreeGroup> env(g, EnvironmentModel::bernoulli(1.0), 0);
  const WalkKernel<FreeGroup> k(env);
  DistributionLimits limits;
  limits.entry_budget = 1000;
  CHECK_THROWS_AS(n_step_distribution(k, g.identity(), 12, 0.0, std::nullopt, 0, limits),
                  DistributionBudgetError);
}

TEST_CASE("adaptive cap keeps the largest entries and accounts for the rest") {
  const FreeGroup g(2);
  const Environment<FreeGroup> env(g, EnvironmentModel::bernoulli(1.0), 0);
  const WalkKernel<FreeGroup> k(env);
  DistributionLimits limits;
  limits.adaptive_budget = 50;
  const auto d = n_step_distribution(k, g.identity(), 10, 0.0, std::nullopt, 0, limits);
  CHECK(d.entries.size() <= 50);
  CHECK(d.adaptive_cut > 0.0);
  CHECK(d.max_conservation_error <= 1e-12);
}

TEST_CASE("entropy quantities of one path match the tree profile") {
  const FreeGroup g(2);
  const Environment<FreeGroup> env(g, EnvironmentModel::bernoulli(1.0), 0);
  const WalkKernel<FreeGroup> k(env);
  const auto path = run_walk(k, g.identity(), 9, 3, 1, stream::kTest);
  const auto s = entropy_sample(k, path, 0.0);
  const auto law = oracles::tree_distance_law(3, 9);
  const auto len = path.positions.back().length();
  const double p_end = law[len] / oracles::tree_sphere_size(3, static_cast<int>(len));
  CHECK(s.plug_in == doctest::Approx(-std::log(p_end) / 9).epsilon(1e-12));
  CHECK(s.conservation_error <= 1e-12);
}
