#include <cmath>

#include "doctest.h"
#include "hyperwalk/environment.hpp"
#include "hyperwalk/oracles.hpp"

using namespace hyperwalk;

TEST_CASE("edge states agree from both endpoints") {
  const FreeGroup g(2);
  const Environment<FreeGroup> env(g, EnvironmentModel::bernoulli(0.5), 9);
  const auto u = g.parse("abA");
  for (int s = 0; s < g.degree(); ++s) {
    const auto l = static_cast<Label>(s);
    const auto v = g.multiply(u, l);
    CHECK(env.is_open(u, l) == env.is_open(v, g.inverse(l)));
    CHECK(env.edge_state(u, l).open == env.edge_state(v, u).open);
  }
  CHECK_THROWS(env.edge_state(u, g.parse("bb")));
}

TEST_CASE("shifted environments read the original at translated edges") {
  const FuchsianGroup g(5, 8);
  const Environment<FuchsianGroup> env(g, EnvironmentModel::bernoulli(0.6), 4);
  const auto h = g.from_letters({2, 0, 3});
  const auto shifted = env.shift(h);
  for (const auto& word : {std::vector<Label>{}, {1}, {4, 2}, {0, 3, 1}}) {
    const auto u = g.from_letters(word);
    for (int s = 0; s < g.degree(); ++s) {
      const auto l = static_cast<Label>(s);
      CHECK(shifted.is_open(u, l) == env.is_open(g.left_multiply(h, u), l));
    }
  }
  // Shifting twice composes.
  const auto k = g.from_letters({1, 4});
  const auto twice = shifted.shift(k);
  const auto u = g.from_letters({3});
  CHECK(twice.is_open(u, 0) == env.is_open(g.left_multiply(g.left_multiply(h, k), u), 0));
}

TEST_CASE("Bernoulli edges are open with frequency p") {
  const FreeGroup g(2);
  const Environment<FreeGroup> env(g, EnvironmentModel::bernoulli(0.3), 1);
  int open = 0, total = 0;
  std::vector<FreeVertex> frontier{g.identity()};
  for (int depth = 0; depth < 7; ++depth) {
    std::vector<FreeVertex> next;
    for (const auto& v : frontier) {
      for (int s = 0; s < g.degree(); ++s) {
        const auto l = static_cast<Label>(s);
        if (v.length() > 0 && l == g.inverse(v.last())) continue;
        ++total;
        open += env.is_open(v, l);
        next.push_back(g.multiply(v, l));
      }
    }
    frontier = std::move(next);
  }
  const double f = static_cast<double>(open) / total;
  CHECK(std::abs(f - 0.3) < 4.0 * std::sqrt(0.21 / total));
}

TEST_CASE("conductances stay strictly inside (alpha, 1/alpha)") {
  for (auto law : {ConductanceLaw::kLogUniform, ConductanceLaw::kUniform}) {
    const auto model = EnvironmentModel::conductance(0.25, law);
    for (double u : {1e-300, 1e-17, 0.3, 0.5, 1.0 - 1e-16}) {
      const double c = conductance_from_uniform(model, u);
      CHECK(c > 0.25);
      CHECK(c < 4.0);
    }
  }
  CHECK_THROWS(EnvironmentModel::conductance(1.0).validate());
  CHECK_THROWS(EnvironmentModel::bernoulli(1.5).validate());
}

TEST_CASE("p = 1 opens everything and p = 0 nothing") {
  const FreeGroup g(3);
  const Environment<FreeGroup> all(g, EnvironmentModel::bernoulli(1.0), 2);
  const Environment<FreeGroup> none(g, EnvironmentModel::bernoulli(0.0), 2);
  CHECK(all.open_degree(g.parse("abc")) == 6);
  CHECK(none.open_degree(g.parse("abc")) == 0);
}

TEST_CASE("cluster exploration agrees with the reach test") {
  const FreeGroup g(2);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Environment<FreeGroup> env(g, EnvironmentModel::bernoulli(0.6), seed);
    const auto view = explore_cluster(env, g.identity(), 5);
    CHECK(view.survived == reaches_radius(env, g.identity(), 5));
    CHECK(view.degree[0] == env.open_degree(g.identity()));
    // On a tree the explored cluster is a tree: edges = vertices - 1.
    CHECK(view.open_edge_count() + 1 == view.size());
  }
}

TEST_CASE("exploration stops at the memory budget") {
  const FreeGroup g(2);
  const Environment<FreeGroup> env(g, EnvironmentModel::bernoulli(1.0), 0);
  const auto view = explore_cluster(env, g.identity(), 12, 100 * kClusterBytesPerVertex);
  CHECK(view.truncated);
  CHECK(view.size() == 100);
}

TEST_CASE("conditioning on survival matches the Galton-Watson oracle") {
  const FreeGroup g(2);
  const auto model = EnvironmentModel::bernoulli(0.7);
  constexpr int kDepth = 8;
  constexpr int kReplicas = 3000;
  double attempts = 0.0, degree = 0.0;
  for (int r = 0; r < kReplicas; ++r) {
    const auto ce = sample_conditioned_environment(g, model, 17, r, kDepth);
    attempts += ce.attempts;
    degree += ce.env.open_degree(g.identity());
  }
  const double reach = oracles::tree_cluster_reaches(0.7, 4, kDepth);
  CHECK(kReplicas / attempts == doctest::Approx(reach).epsilon(0.05));
  CHECK(degree / kReplicas ==
        doctest::Approx(oracles::tree_conditioned_mean_degree(0.7, 4, kDepth)).epsilon(0.02));
}

TEST_CASE("conditioning reports subcritical parameters") {
  const FreeGroup g(2);
  CHECK_THROWS_AS(sample_conditioned_environment(g, EnvironmentModel::bernoulli(0.05), 1, 0, 40),
                  ConditioningError);
}

TEST_CASE("cluster cache reuses views and serializes") {
  const FreeGroup g(2);
  const Environment<FreeGroup> env(g, EnvironmentModel::bernoulli(0.8), 5);
  ClusterCache<FreeGroup> cache;
  const auto& a = cache.get(env, g.identity(), 3);
  const std::size_t n = a.size();
  const auto& b = cache.get(env, g.identity(), 3);
  CHECK(b.size() == n);
  CHECK(cache.hits() == 1);
  const auto j = cluster_to_json(g, b);
  CHECK(j["vertices"].size() == n);
  CHECK(j["root"] == "");
}
