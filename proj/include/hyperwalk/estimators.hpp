#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <type_traits>
#include <unordered_set>
#include <vector>

#include "hyperwalk/backend.hpp"
#include "hyperwalk/environment.hpp"
#include "hyperwalk/geometry.hpp"
#include "hyperwalk/parallel.hpp"
#include "hyperwalk/reports.hpp"
#include "hyperwalk/rng.hpp"
#include "hyperwalk/stats.hpp"
#include "hyperwalk/walker.hpp"

namespace hyperwalk {

enum class EntropyMethod { kIncrement, kPlugIn };

EntropyMethod parse_entropy_method(const std::string& name);
std::string to_string(EntropyMethod m);

/// Parameters shared by the estimators. Every field has a default.
struct ExperimentParams {
  EnvironmentModel model;
  std::uint64_t seed = 1;
  int r_infty = 30;
  int threads = 1;
  std::size_t memory_budget = std::size_t{2} << 30;

  // speed and entropy
  int replicas = 200;  // M
  int horizon = 2000;  // N
  int checkpoints = 4;
  int entropy_steps = 30;  // n
  EntropyMethod entropy_method = EntropyMethod::kIncrement;
  double truncation = kDefaultTruncation;
  DistributionLimits dp_limits{kDefaultEntryBudget, 20'000};

  // local dimension
  int boundary_samples = 1000;  // samples from one environment
  int probes = 0;               // 0: every sample is a probe
  int grid_min = 0;             // radii r = exp(-j), j in [grid_min, grid_max]
  int grid_max = 0;             // 0: chosen from the data
  double auto_grid_mean_count = 5.0;
  int min_pairs = 50;
  std::uint64_t environment_replica = 0;

  // shadows
  int shadow_probes = 100;
  std::vector<double> shadow_depths{2, 4, 6, 8};
  double shadow_log_c_max = 6.0;
  double shadow_log_c_step = 0.5;
  int shadow_r0_max = 10;
  double shadow_target_rate = 0.95;

  // stationarity
  int stationarity_replicas = 10000;
  bool stationarity_weighted = true;
  double stationarity_level = 0.01;
};

/// Replica r's environment: the first candidate from (seed, r, attempt)
/// whose root cluster reaches r_infty.
template <CayleyBackend B>
ConditionedEnvironment<B> replica_environment(const B& backend, const ExperimentParams& params,
                                              std::uint64_t replica) {
  return sample_conditioned_environment(backend, params.model, params.seed, replica,
                                        params.r_infty);
}

template <CayleyBackend B>
std::string metric_name(const B& backend) {
  return backend.hyperbolic_metric() ? "hyperbolic" : "word";
}

/// l = lim dist(1, x_N) / N, one conditioned environment per replica, with a
/// convergence table at N, N/2, N/4, ...
template <CayleyBackend B>
EstimateReport estimate_speed(const B& backend, const ExperimentParams& params) {
  if (params.replicas < 2) throw std::invalid_argument("speed needs at least 2 replicas");
  if (params.horizon < 1) throw std::invalid_argument("speed needs N >= 1");
  const auto m = static_cast<std::size_t>(params.replicas);
  std::vector<int> marks;
  for (int k = 0; k < std::max(1, params.checkpoints); ++k) {
    const int s = params.horizon >> k;
    if (s < 1) break;
    marks.push_back(s);
  }
  std::vector<std::vector<double>> at_mark(marks.size(), std::vector<double>(m));
  std::vector<int> attempts(m);
  std::vector<double> row_error(m, 0.0);
  parallel_for(m, params.threads, [&](std::size_t r) {
    auto ce = replica_environment(backend, params, r);
    attempts[r] = ce.attempts;
    WalkKernel<B> kernel(ce.env);
    StreamRng rng(params.seed, r, stream::kSpeedWalk);
    KernelRow scratch;
    auto x = backend.identity();
    for (int i = 1; i <= params.horizon; ++i) {
      x = kernel.step(x, rng, scratch).first;
      row_error[r] = std::max(row_error[r], kernel.row_sum_error(scratch));
      for (std::size_t c = 0; c < marks.size(); ++c) {
        if (marks[c] == i) at_mark[c][r] = backend.norm(x) / i;
      }
    }
  });
  EstimateReport rep;
  rep.quantity = "speed";
  rep.replicas = m;
  rep.steps = params.horizon;
  rep.method = "mean_norm_over_N";
  rep.metric = metric_name(backend);
  rep.values = at_mark[0];
  const auto ms = mean_stderr(rep.values);
  rep.estimate = ms.mean;
  rep.stderr_ = ms.stderr_;
  for (std::size_t c = marks.size(); c-- > 0;) {
    const auto mc = mean_stderr(at_mark[c]);
    rep.checkpoints.push_back({marks[c], mc.mean, mc.stderr_});
  }
  double tries = 0.0;
  for (int a : attempts) tries += a;
  rep.diagnostics = {{"acceptance_rate", static_cast<double>(m) / tries},
                     {"max_row_sum_error", *std::max_element(row_error.begin(), row_error.end())},
                     {"r_infty", params.r_infty},
                     {"model", params.model.describe()}};
  return rep;
}

/// h = lim -log p^n(1, x_n) / n from an exact targeted DP in each replica's
/// own environment. The increment method reports log p^{n-1}(1, x_{n-1}) -
/// E[log p^n(1, x_n) | x_{n-1}], whose mean is H_n - H_{n-1}.
template <CayleyBackend B>
EstimateReport estimate_entropy(const B& backend, const ExperimentParams& params) {
  if (params.replicas < 2) throw std::invalid_argument("entropy needs at least 2 replicas");
  if (params.entropy_steps < 1) throw std::invalid_argument("entropy needs n >= 1");
  const auto m = static_cast<std::size_t>(params.replicas);
  std::vector<EntropySample> samples(m);
  std::vector<double> row_error(m, 0.0);
  std::vector<int> retries(m, 0);
  parallel_for(m, params.threads, [&](std::size_t r) {
    auto ce = replica_environment(backend, params, r);
    WalkKernel<B> kernel(ce.env);
    auto path = run_walk(kernel, backend.identity(), params.entropy_steps, params.seed, r,
                         stream::kEntropyWalk);
    // The threshold or the adaptive cap can drop the sampled path itself
    // (straight runs away from 1 have probability near d^-n). Such replicas
    // are redone without threshold, then with a four times larger cap.
    DistributionLimits limits = params.dp_limits;
    double threshold = params.truncation;
    for (;;) {
      try {
        samples[r] = entropy_sample(kernel, path, threshold, limits);
        break;
      } catch (const PathProbabilityLost&) {
        ++retries[r];
        if (threshold > 0.0) {
          threshold = 0.0;
        } else if (limits.adaptive_budget != 0 && limits.adaptive_budget < limits.entry_budget) {
          limits.adaptive_budget *= 4;
        } else {
          throw;
        }
      }
    }
    for (const auto& x : path.positions) {
      row_error[r] = std::max(row_error[r], kernel.row_sum_error(kernel.row(x)));
    }
  });
  EstimateReport rep;
  rep.quantity = "entropy";
  rep.replicas = m;
  rep.steps = params.entropy_steps;
  rep.method = to_string(params.entropy_method);
  rep.metric = "none";
  double trunc = 0.0, cons = 0.0, cut = 0.0, rows = 0.0;
  std::size_t peak = 0;
  std::size_t capped = 0;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& s = samples[r];
    rep.values.push_back(params.entropy_method == EntropyMethod::kIncrement ? s.increment
                                                                             : s.plug_in);
    trunc += s.truncated_mass;
    cons = std::max(cons, s.conservation_error);
    cut = std::max(cut, s.adaptive_cut);
    rows = std::max(rows, row_error[r]);
    peak = std::max(peak, s.peak_entries);
    if (s.adaptive_cut > 0.0) ++capped;
  }
  const auto ms = mean_stderr(rep.values);
  rep.estimate = std::max(0.0, ms.mean);
  rep.stderr_ = ms.stderr_;
  std::vector<double> other;
  for (const auto& s : samples) {
    other.push_back(params.entropy_method == EntropyMethod::kIncrement ? s.plug_in : s.increment);
  }
  rep.diagnostics = {{"mean_truncated_mass", trunc / static_cast<double>(m)},
                     {"max_conservation_error", cons},
                     {"max_row_sum_error", rows},
                     {"max_adaptive_cut", cut},
                     {"replicas_capped", capped},
                     {"cap_retries", std::accumulate(retries.begin(), retries.end(), 0)},
                     {"peak_entries", peak},
                     {"threshold", params.truncation},
                     {"adaptive_budget", params.dp_limits.adaptive_budget},
                     {"alternate_method", to_string(params.entropy_method == EntropyMethod::kIncrement
                                                        ? EntropyMethod::kPlugIn
                                                        : EntropyMethod::kIncrement)},
                     {"alternate_estimate", mean_stderr(other).mean}};
  return rep;
}

/// Boundary samples x_N from `count` independent walks in one environment.
template <CayleyBackend B>
std::vector<BoundarySample<B>> boundary_samples(const WalkKernel<B>& kernel,
                                                const ExperimentParams& params, int count,
                                                std::vector<Trajectory<B>>* paths = nullptr) {
  const B& backend = kernel.backend();
  std::vector<BoundarySample<B>> out(static_cast<std::size_t>(count));
  if (paths) paths->resize(static_cast<std::size_t>(count));
  parallel_for(out.size(), params.threads, [&](std::size_t i) {
    auto t = run_walk(kernel, backend.identity(), params.horizon, params.seed, i,
                      stream::kBoundaryWalk, paths != nullptr);
    out[i] = make_boundary_sample(backend, i, t.positions.back(), params.horizon);
    if (paths) (*paths)[i] = std::move(t);
  });
  return out;
}

/// Empirical local dimension of the harmonic measure of one environment:
/// per probe, regress log nu(B(xi, r)) on log r over r = exp(-j), with nu
/// estimated by leave-one-out pair counts (xi | eta) > j among the samples.
template <CayleyBackend B>
LocalDimensionReport local_dimension_from_samples(const B& backend,
                                                  const std::vector<BoundarySample<B>>& samples,
                                                  const ExperimentParams& params) {
  const std::size_t m = samples.size();
  if (m < 2) throw std::invalid_argument("local dimension needs at least 2 samples");
  const std::size_t k = params.probes > 0 ? std::min<std::size_t>(params.probes, m) : m;
  const int jmin = std::max(0, params.grid_min);
  // Products are collected once per probe and bucketed by floor so any grid
  // can be evaluated afterwards.
  double cap = 1e9;
  if constexpr (std::is_same_v<B, FuchsianGroup>) cap = backend.gromov_resolution();
  constexpr int kMaxGrid = 256;
  std::vector<std::vector<std::uint32_t>> above(k, std::vector<std::uint32_t>(kMaxGrid + 1, 0));
  parallel_for(k, params.threads, [&](std::size_t i) {
    auto& row = above[i];
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      const double prod = std::min(boundary_gromov_product(backend, samples[i], samples[j]), cap);
      // count of grid points g with prod > g, for g = 0..kMaxGrid
      const double c = std::ceil(prod) - 1.0;  // largest integer strictly below prod
      if (c < 0.0) continue;
      const int top = static_cast<int>(std::min<double>(c, kMaxGrid));
      ++row[static_cast<std::size_t>(top)];
    }
    // Suffix sums: row[g] = #{eta : prod > g}.
    for (int g = kMaxGrid; g-- > 0;) row[static_cast<std::size_t>(g)] += row[static_cast<std::size_t>(g) + 1];
  });

  LocalDimensionReport rep;
  rep.samples = m;
  rep.probes = k;
  rep.horizon = samples.front().horizon;
  int jmax = params.grid_max;
  if (jmax <= 0) {
    // Deepest radius where the average probe still sees enough neighbours.
    jmax = jmin;
    for (int g = jmin; g < kMaxGrid; ++g) {
      double total = 0.0;
      for (std::size_t i = 0; i < k; ++i) total += above[i][static_cast<std::size_t>(g)];
      if (total / static_cast<double>(k) < params.auto_grid_mean_count) break;
      jmax = g;
    }
    jmax = std::max(jmax, jmin + 3);
  }
  if (jmax - jmin + 1 < 4) throw std::invalid_argument("radius grid needs at least 4 points");
  if (backend.hyperbolic_metric() && jmax >= static_cast<int>(cap)) {
    rep.warnings.push_back("grid reaches the Gromov product resolution of the backend");
  }
  for (int g = jmin; g <= jmax; ++g) {
    rep.grid.push_back(g);
    rep.radii.push_back(std::exp(-static_cast<double>(g)));
  }
  const std::size_t ng = rep.grid.size();
  rep.pair_counts.assign(k, std::vector<std::uint32_t>(ng, 0));
  rep.column_pairs.assign(ng, 0.0);
  rep.radius_kept.assign(ng, true);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t c = 0; c < ng; ++c) {
      const auto v = above[i][static_cast<std::size_t>(std::min(rep.grid[c], kMaxGrid))];
      rep.pair_counts[i][c] = v;
      rep.column_pairs[c] += v;
    }
  }
  for (std::size_t c = 0; c < ng; ++c) {
    if (rep.column_pairs[c] < params.min_pairs) {
      rep.radius_kept[c] = false;
      rep.warnings.push_back("radius exp(-" + std::to_string(rep.grid[c]) + ") dropped: " +
                             format_double(rep.column_pairs[c]) + " pairs < " +
                             std::to_string(params.min_pairs));
    }
  }
  const double denom = static_cast<double>(m - 1);
  std::vector<double> usable;
  std::vector<double> two_point;
  rep.slopes.assign(k, std::numeric_limits<double>::quiet_NaN());
  rep.two_point_slopes.assign(k, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> xs, ys;
    for (std::size_t c = 0; c < ng; ++c) {
      if (!rep.radius_kept[c] || rep.pair_counts[i][c] == 0) continue;
      xs.push_back(-static_cast<double>(rep.grid[c]));
      ys.push_back(std::log(rep.pair_counts[i][c] / denom));
    }
    if (xs.size() < 2) continue;
    rep.slopes[i] = least_squares(xs, ys).slope;
    rep.two_point_slopes[i] = (ys.front() - ys.back()) / (xs.front() - xs.back());
    usable.push_back(rep.slopes[i]);
    two_point.push_back(rep.two_point_slopes[i]);
  }
  rep.usable_probes = usable.size();
  if (usable.size() < 2) {
    rep.warnings.push_back("fewer than two probes have a defined slope");
    rep.median = rep.q25 = rep.q75 = rep.iqr = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  rep.median = quantile(usable, 0.5);
  rep.q25 = quantile(usable, 0.25);
  rep.q75 = quantile(usable, 0.75);
  rep.iqr = rep.q75 - rep.q25;
  // Normal-theory standard error of a median with sigma estimated from the IQR.
  rep.median_stderr = std::sqrt(std::numbers::pi / 2.0) * (rep.iqr / 1.349) /
                      std::sqrt(static_cast<double>(usable.size()));
  rep.two_point_median = quantile(two_point, 0.5);
  std::vector<double> xs, ys;
  for (std::size_t c = 0; c < ng; ++c) {
    if (!rep.radius_kept[c] || rep.column_pairs[c] <= 0) continue;
    xs.push_back(-static_cast<double>(rep.grid[c]));
    ys.push_back(std::log(rep.column_pairs[c] / (denom * static_cast<double>(k))));
  }
  if (xs.size() >= 2) rep.aggregate_slope = least_squares(xs, ys).slope;
  return rep;
}

template <CayleyBackend B>
LocalDimensionReport estimate_local_dimension(const B& backend, const ExperimentParams& params) {
  auto ce = sample_conditioned_environment(backend, params.model, params.seed,
                                           params.environment_replica, params.r_infty);
  WalkKernel<B> kernel(ce.env);
  auto samples = boundary_samples(kernel, params, params.boundary_samples);
  return local_dimension_from_samples(backend, samples, params);
}

namespace detail {

/// Waypoint at distance `depth` along the geodesic from 1 toward the sample.
/// Trees use the exact prefix of the anchor word; the hyperbolic backend
/// takes the trajectory point closest to the point at distance `depth` on
/// the hyperbolic segment from o to the anchor.
template <CayleyBackend B>
typename B::Vertex geodesic_waypoint(const B& backend, const Trajectory<B>& path, double depth) {
  const auto& anchor = path.positions.back();
  if constexpr (std::is_same_v<B, FreeGroup>) {
    const auto letters = anchor.letters();
    const auto len = std::min<std::size_t>(letters.size(), static_cast<std::size_t>(depth));
    return backend.from_letters(std::vector<Label>(letters.begin(), letters.begin() + len));
  } else {
    const HyperboloidPoint a = backend.point(anchor);
    const long double dist = std::acosh(std::max(a[0], 1.0L));
    const long double t = std::min<long double>(depth, dist);
    HyperboloidPoint target{1.0L, 0.0L, 0.0L};
    if (dist > 0) {
      const long double sd = std::sinh(dist);
      const HyperboloidPoint u{(a[0] - std::cosh(dist)) / sd, a[1] / sd, a[2] / sd};
      target = {std::cosh(t) + std::sinh(t) * u[0], std::sinh(t) * u[1], std::sinh(t) * u[2]};
    }
    std::size_t best = 0;
    long double best_c = std::numeric_limits<long double>::infinity();
    for (std::size_t i = 0; i < path.positions.size(); ++i) {
      const long double c = -minkowski(backend.point(path.positions[i]), target);
      if (c < best_c) {
        best_c = c;
        best = i;
      }
    }
    return path.positions[best];
  }
}

}  // namespace detail

/// Checks B(xi, C^-1 e^{-|x|+R}) within S(x, R) within B(xi, C e^{-|x|+R})
/// for waypoints x toward sample xi, over a (log C, R0) grid, and reports the
/// smallest constants reaching the target pass rate with R in {R0, R0+2, R0+4}.
template <CayleyBackend B>
ShadowReport verify_shadow_sandwich(const B& backend, const ExperimentParams& params) {
  auto ce = sample_conditioned_environment(backend, params.model, params.seed,
                                           params.environment_replica, params.r_infty);
  WalkKernel<B> kernel(ce.env);
  std::vector<Trajectory<B>> paths;
  const bool need_paths = !std::is_same_v<B, FreeGroup>;
  auto samples = boundary_samples(kernel, params, params.boundary_samples,
                                  need_paths ? &paths : nullptr);
  const std::size_t m = samples.size();
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(params.shadow_probes), m);

  // Per probe and depth: |x|, (xi|eta) and (eta|x) for all eta.
  struct Probe {
    std::size_t sample;
    double depth;
    double norm;
    std::vector<double> to_xi;
    std::vector<double> to_x;
  };
  std::vector<Probe> probes;
  for (std::size_t i = 0; i < k; ++i) {
    for (double depth : params.shadow_depths) {
      typename B::Vertex x;
      if constexpr (std::is_same_v<B, FreeGroup>) {
        const auto letters = samples[i].anchor.letters();
        const auto len = std::min<std::size_t>(letters.size(), static_cast<std::size_t>(depth));
        x = backend.from_letters(std::vector<Label>(letters.begin(), letters.begin() + len));
      } else {
        x = detail::geodesic_waypoint(backend, paths[i], depth);
      }
      Probe p{i, depth, backend.norm(x), {}, {}};
      const auto px = backend.boundary_point(x);
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        p.to_xi.push_back(boundary_gromov_product(backend, samples[i], samples[j]));
        p.to_x.push_back(backend.boundary_product(samples[j].point, px));
      }
      probes.push_back(std::move(p));
    }
  }

  ShadowReport rep;
  rep.samples = m;
  auto evaluate = [&](double log_c, double r0, std::vector<ShadowFailure>* fails) {
    std::size_t pass = 0, total = 0;
    for (const auto& p : probes) {
      for (int step = 0; step < 3; ++step) {
        const double radius = r0 + 2.0 * step;
        const double shadow_cut = p.norm - radius;
        bool ok = true;
        for (std::size_t j = 0; j < p.to_xi.size(); ++j) {
          const bool in_shadow = p.to_x[j] > shadow_cut;
          const bool in_inner = p.to_xi[j] > shadow_cut + log_c;
          const bool in_outer = p.to_xi[j] > shadow_cut - log_c;
          if ((in_inner && !in_shadow) || (in_shadow && !in_outer)) {
            ok = false;
            if (fails && fails->size() < 200) {
              const std::size_t witness = j < p.sample ? j : j + 1;
              fails->push_back({p.sample, static_cast<int>(p.depth), radius, witness,
                                in_inner && !in_shadow ? "inner" : "outer"});
            }
            break;
          }
        }
        ++total;
        if (ok) ++pass;
      }
    }
    return total ? static_cast<double>(pass) / static_cast<double>(total) : 0.0;
  };
  for (double log_c = 0.0; log_c <= params.shadow_log_c_max + 1e-12;
       log_c += params.shadow_log_c_step) {
    for (int r0 = 1; r0 <= params.shadow_r0_max; ++r0) {
      const double rate = evaluate(log_c, r0, nullptr);
      rep.grid_rates.emplace_back(log_c, r0);
      rep.grid_pass.push_back(rate);
      if (!rep.fit_found && rate >= params.shadow_target_rate) {
        rep.fit_found = true;
        rep.fitted_log_c = log_c;
        rep.fitted_r0 = r0;
        rep.pass_rate = rate;
      }
    }
  }
  if (rep.fit_found) {
    evaluate(rep.fitted_log_c, rep.fitted_r0, &rep.failures);
  } else {
    rep.pass_rate = *std::max_element(rep.grid_pass.begin(), rep.grid_pass.end());
  }
  rep.tested = probes.size() * 3;
  // The sandwich radii are C^{-+1} e^{-|x| + R}: stepping R by 2 must scale
  // both by exactly e^2.
  double worst = 0.0;
  for (const auto& p : probes) {
    for (int step = 0; step < 2; ++step) {
      const double r = rep.fitted_r0 + 2.0 * step;
      const double inner = std::exp(-rep.fitted_log_c) * std::exp(-p.norm + r);
      const double inner2 = std::exp(-rep.fitted_log_c) * std::exp(-p.norm + r + 2.0);
      const double outer = std::exp(rep.fitted_log_c) * std::exp(-p.norm + r);
      const double outer2 = std::exp(rep.fitted_log_c) * std::exp(-p.norm + r + 2.0);
      worst = std::max({worst, std::abs(inner2 / inner / std::exp(2.0) - 1.0),
                        std::abs(outer2 / outer / std::exp(2.0) - 1.0)});
    }
  }
  rep.log_linear_error = worst;
  rep.log_linear = worst < 1e-12;
  return rep;
}

namespace detail {

/// (open degree of 1, open edges among vertices within graph distance 2 of 1).
template <CayleyBackend B>
std::pair<int, int> local_statistic(const Environment<B>& env) {
  const B& g = env.backend();
  const auto root = g.identity();
  std::vector<typename B::Vertex> ball{root};
  std::unordered_set<Digest128, DigestHash> seen{root.digest()};
  for (std::size_t head = 0; head < ball.size(); ++head) {
    if (g.word_distance(root, ball[head]) >= 2) continue;
    for (int s = 0; s < g.degree(); ++s) {
      auto w = g.multiply(ball[head], static_cast<Label>(s));
      if (seen.insert(w.digest()).second) ball.push_back(std::move(w));
    }
  }
  int edges = 0;
  for (const auto& u : ball) {
    for (int s = 0; s < g.degree(); ++s) {
      const auto l = static_cast<Label>(s);
      const Digest128 nd = g.neighbor_digest(u, l);
      // each undirected edge is seen from both ends; count it from the smaller
      if (!seen.count(nd) || !(u.digest() < nd)) continue;
      if (env.is_open(u, l)) ++edges;
    }
  }
  return {env.open_degree(root), edges};
}

}  // namespace detail

/// Compares the law of (root degree, open edges in the radius-2 ball) under
/// the environment law with the law seen from the walker after one step.
/// Weighted runs realise the degree-biased law mu' by accepting a candidate
/// with probability deg(1)/d; "before" and "after" use disjoint replica
/// halves so the two samples are independent.
template <CayleyBackend B>
StationarityReport stationarity_test(const B& backend, const ExperimentParams& params,
                                     bool weighted) {
  const auto m = static_cast<std::size_t>(params.stationarity_replicas);
  if (m < 4) throw std::invalid_argument("stationarity test needs at least 4 replicas");
  const int d = backend.degree();
  std::vector<std::pair<int, int>> stats(m);
  std::vector<std::size_t> rejected(m, 0);
  parallel_for(m, params.threads, [&](std::size_t r) {
    StreamRng rng(params.seed, r, stream::kStationarity);
    for (std::uint64_t a = 0;; ++a) {
      auto ce = sample_conditioned_environment(backend, params.model, params.seed,
                                               r | (a << 40), params.r_infty);
      const int deg = ce.env.open_degree(backend.identity());
      if (weighted && rng.below(static_cast<std::uint64_t>(d)) >= static_cast<std::uint64_t>(deg)) {
        ++rejected[r];
        if (a > 100000) throw ConditioningError("degree-biased rejection did not terminate");
        continue;
      }
      if (r < m / 2) {
        stats[r] = detail::local_statistic(ce.env);
      } else {
        WalkKernel<B> kernel(ce.env);
        const auto x1 = kernel.step(backend.identity(), rng).first;
        stats[r] = detail::local_statistic(shift_environment(ce.env, x1));
      }
      return;
    }
  });
  int max_edges = 0;
  for (const auto& s : stats) max_edges = std::max(max_edges, s.second);
  const auto cells = static_cast<std::size_t>((d + 1) * (max_edges + 1));
  std::vector<double> before(cells, 0.0), after(cells, 0.0);
  StationarityReport rep;
  rep.weighted = weighted;
  rep.replicas = m;
  rep.level = params.stationarity_level;
  rep.before_mean.assign(2, 0.0);
  rep.after_mean.assign(2, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    const auto cell = static_cast<std::size_t>(stats[r].first * (max_edges + 1) + stats[r].second);
    auto& mean = r < m / 2 ? rep.before_mean : rep.after_mean;
    (r < m / 2 ? before : after)[cell] += 1.0;
    mean[0] += stats[r].first;
    mean[1] += stats[r].second;
    rep.rejections += rejected[r];
  }
  rep.before_count = m / 2;
  rep.after_count = m - m / 2;
  for (auto& v : rep.before_mean) v /= static_cast<double>(rep.before_count);
  for (auto& v : rep.after_mean) v /= static_cast<double>(rep.after_count);
  const auto chi = chi_square_two_sample(before, after);
  rep.statistic = chi.statistic;
  rep.degrees_of_freedom = chi.degrees_of_freedom;
  rep.p_value = chi.p_value;
  rep.vacuous = chi.vacuous;
  rep.passed = chi.vacuous || chi.p_value >= params.stationarity_level;
  return rep;
}

/// Speed, entropy and their ratio for one backend, with per-cell errors
/// captured in the row instead of thrown.
template <CayleyBackend B>
SweepRow sweep_cell(const B& backend, const ExperimentParams& params, int P, int Q) {
  SweepRow row;
  row.P = P;
  row.Q = Q;
  row.p = params.model.p;
  row.backend = backend.spec();
  try {
    const auto l = estimate_speed(backend, params);
    const auto h = estimate_entropy(backend, params);
    const auto ratio = ratio_report(h, l);
    row.l_hat = l.estimate;
    row.l_se = l.stderr_;
    row.h_hat = h.estimate;
    row.h_se = h.stderr_;
    row.delta_hat = ratio.estimate;
    row.delta_se = ratio.stderr_;
    row.truncated_mass = h.diagnostics.value("mean_truncated_mass", 0.0);
    row.max_conservation_error = h.diagnostics.value("max_conservation_error", 0.0);
    row.max_row_sum_error = std::max(h.diagnostics.value("max_row_sum_error", 0.0),
                                     l.diagnostics.value("max_row_sum_error", 0.0));
  } catch (const std::exception& e) {
    row.status = "failed";
    row.error = e.what();
  }
  return row;
}

struct PQSweepReport {
  std::vector<SweepRow> rows;
  std::vector<double> fitted_c;  // (2 log Q - l) p / log log Q per cell
  double max_fitted_c = 0.0;
  bool delta_decreasing = true;  // every step in Q > -2 combined stderr, per P
  bool entropy_bounded = true;   // h <= log Q + 2 stderr in every cell
  bool partial = false;

  nlohmann::json to_json() const;
};

/// One cell per (P[i], Q[i]) on the reflection-group backend, with speed in
/// the hyperbolic metric. Cells that fail are reported and skipped.
PQSweepReport pq_sweep(const ExperimentParams& params, const std::vector<int>& sides,
                       const std::vector<int>& tiles);

struct PSweepReport {
  std::vector<SweepRow> rows;
  std::vector<bool> jump_after;  // row i and i+1 differ by more than jump_sigmas stderr
  bool partial = false;

  nlohmann::json to_json() const;
};

/// delta(p) over a grid of retention probabilities on one backend.
PSweepReport p_sweep(const AnyBackend& backend, const ExperimentParams& params,
                     const std::vector<double>& ps, double jump_sigmas);

}  // namespace hyperwalk
