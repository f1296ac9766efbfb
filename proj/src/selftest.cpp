#include "hyperwalk/selftest.hpp"

#include <cmath>

#include "hyperwalk/oracles.hpp"

namespace hyperwalk {

namespace {

OracleGap gap(std::string name, double estimate, double oracle, double tolerance) {
  const double g = std::abs(estimate - oracle);
  return {std::move(name), estimate, oracle, g, tolerance, g <= tolerance};
}

}  // namespace

std::vector<OracleGap> run_selftest(int rank, std::uint64_t seed, int threads) {
  std::vector<OracleGap> out;
  const FreeGroup tree(rank);
  const int q = tree.degree() - 1;

  ExperimentParams params;
  params.seed = seed;
  params.threads = threads;
  params.model = EnvironmentModel::bernoulli(1.0);
  params.replicas = 100;
  params.horizon = 500;
  params.entropy_steps = 12;
  params.dp_limits.adaptive_budget = 0;

  out.push_back(gap("tree speed, birth-death vs closed form", oracles::tree_srw_speed_birth_death(q),
                    oracles::tree_srw_speed(q), 1e-9));
  const auto speed = estimate_speed(tree, params);
  out.push_back(gap("tree speed, simulation vs closed form", speed.estimate,
                    oracles::tree_srw_speed(q), 5.0 * speed.stderr_));

  // Exact DP on the deterministic tree against the distance transfer matrix.
  const Environment<FreeGroup> full(tree, params.model, seed);
  const WalkKernel<FreeGroup> kernel(full);
  constexpr int kExactSteps = 10;
  const auto dist = n_step_distribution(kernel, tree.identity(), kExactSteps, 0.0);
  std::vector<double> by_length(kExactSteps + 1, 0.0);
  double path_entropy = 0.0;
  for (const auto& e : dist.entries) {
    by_length[e.vertex.length()] += e.probability;
    path_entropy -= e.probability * std::log(e.probability);
  }
  const auto law = oracles::tree_distance_law(q, kExactSteps);
  double worst = 0.0;
  for (int k = 0; k <= kExactSteps; ++k) {
    worst = std::max(worst, std::abs(by_length[static_cast<std::size_t>(k)] -
                                     law[static_cast<std::size_t>(k)]));
  }
  out.push_back(gap("distance law at n = 10, DP vs transfer matrix", worst, 0.0, 1e-12));
  out.push_back(gap("path entropy H_10, DP vs distance profile", path_entropy,
                    oracles::tree_path_entropy(q, kExactSteps), 1e-10));
  out.push_back(gap("DP conservation at n = 10", dist.max_conservation_error, 0.0, 1e-12));

  const auto entropy = estimate_entropy(tree, params);
  out.push_back(gap("entropy increment at n = 12 vs H_12 - H_11", entropy.estimate,
                    oracles::tree_increment_entropy(q, params.entropy_steps),
                    5.0 * entropy.stderr_));

  // Cluster reach frequency on the percolated tree.
  constexpr int kDepth = 6;
  constexpr int kTrials = 4000;
  const auto perc = EnvironmentModel::bernoulli(0.7);
  int reached = 0;
  for (int t = 0; t < kTrials; ++t) {
    const Environment<FreeGroup> env(tree, perc, environment_seed(seed, t, 0));
    if (reaches_radius(env, tree.identity(), kDepth)) ++reached;
  }
  const double oracle_reach = oracles::tree_cluster_reaches(0.7, tree.degree(), kDepth);
  out.push_back(gap("cluster reaches depth 6 at p = 0.7", static_cast<double>(reached) / kTrials,
                    oracle_reach,
                    5.0 * std::sqrt(oracle_reach * (1.0 - oracle_reach) / kTrials)));

  for (const auto& [P, Q] : {std::pair{5, 4}, std::pair{5, 8}, std::pair{4, 6}, std::pair{3, 8}}) {
    const FuchsianGroup g(P, Q);
    const auto s0 = g.multiply(g.identity(), 0);
    out.push_back(gap("{" + std::to_string(P) + "," + std::to_string(Q) + "} edge length",
                      g.norm(s0), oracles::fuchsian_edge_length(P, Q), 1e-9));
  }
  return out;
}

nlohmann::json selftest_json(const std::vector<OracleGap>& gaps) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& g : gaps) {
    rows.push_back({{"name", g.name},
                    {"estimate", g.estimate},
                    {"oracle", g.oracle},
                    {"gap", g.gap},
                    {"tolerance", g.tolerance},
                    {"passed", g.passed}});
  }
  return rows;
}

}  // namespace hyperwalk
