#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyperwalk/backend.hpp"
#include "hyperwalk/environment.hpp"
#include "hyperwalk/rng.hpp"
#include "hyperwalk/stats.hpp"

namespace hyperwalk {

enum class KernelKind { kClusterSrw, kConductance };

/// One row of the transition kernel in canonical label order. Only labels
/// with positive probability are listed.
struct KernelRow {
  std::vector<Label> labels;
  std::vector<double> probabilities;
  std::vector<double> weights;  // unnormalized
  double total_weight = 0.0;

  std::size_t size() const { return labels.size(); }
};

class KernelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nearest-neighbour kernel on an environment: 1/deg on open edges for the
/// cluster walk, conductance ratios for the elliptic walk.
template <CayleyBackend B>
class WalkKernel {
 public:
  using Vertex = typename B::Vertex;

  WalkKernel(const Environment<B>& env, KernelKind kind) : env_(&env), kind_(kind) {
    if (kind == KernelKind::kConductance && env.model().kind != ModelKind::kConductance) {
      kind_ = KernelKind::kClusterSrw;
    }
  }

  /// Picks the natural kernel for the environment model.
  explicit WalkKernel(const Environment<B>& env)
      : WalkKernel(env, env.model().kind == ModelKind::kConductance ? KernelKind::kConductance
                                                                     : KernelKind::kClusterSrw) {}

  const Environment<B>& environment() const { return *env_; }
  const B& backend() const { return env_->backend(); }
  KernelKind kind() const { return kind_; }

  KernelRow row(const Vertex& v) const {
    KernelRow r;
    row(v, r);
    return r;
  }

  void row(const Vertex& v, KernelRow& r) const {
    r.weights.clear();
    r.probabilities.clear();
    if (kind_ == KernelKind::kClusterSrw) {
      env_->open_labels(v, r.labels);
      const auto k = r.labels.size();
      r.total_weight = static_cast<double>(k);
      r.weights.assign(k, 1.0);
      r.probabilities.assign(k, k ? 1.0 / static_cast<double>(k) : 0.0);
      return;
    }
    r.labels.clear();
    CompensatedSum total;
    const int d = backend().degree();
    for (int s = 0; s < d; ++s) {
      const double w = env_->weight(v, static_cast<Label>(s));
      r.labels.push_back(static_cast<Label>(s));
      r.weights.push_back(w);
      total.add(w);
    }
    r.total_weight = total.value();
    for (double w : r.weights) r.probabilities.push_back(w / r.total_weight);
  }

  /// |sum of row probabilities - 1|. The cluster walk's row is the rational
  /// k * (1/k) = 1 exactly, so its error is zero by construction.
  double row_sum_error(const KernelRow& r) const {
    if (kind_ == KernelKind::kClusterSrw) return 0.0;
    return std::abs(compensated_total(r.probabilities) - 1.0);
  }

  /// Samples the next vertex by inversion over the canonical label order.
  std::pair<Vertex, Label> step(const Vertex& v, StreamRng& rng, KernelRow& scratch) const {
    row(v, scratch);
    if (scratch.labels.empty()) throw KernelError("walk reached an isolated vertex");
    Label s = scratch.labels.back();
    if (kind_ == KernelKind::kClusterSrw) {
      s = scratch.labels[rng.below(scratch.labels.size())];
    } else {
      const double target = rng.uniform() * scratch.total_weight;
      CompensatedSum acc;
      for (std::size_t i = 0; i < scratch.size(); ++i) {
        acc.add(scratch.weights[i]);
        if (target < acc.value()) {
          s = scratch.labels[i];
          break;
        }
      }
    }
    return {backend().multiply(v, s), s};
  }

  std::pair<Vertex, Label> step(const Vertex& v, StreamRng& rng) const {
    KernelRow scratch;
    return step(v, rng, scratch);
  }

 private:
  const Environment<B>* env_;
  KernelKind kind_;
};

/// Sampled path x_0 = start, ..., x_N.
template <CayleyBackend B>
struct Trajectory {
  using Vertex = typename B::Vertex;

  std::uint64_t replica = 0;
  std::uint64_t stream = 0;
  Vertex start;
  std::vector<Label> steps;
  std::vector<Vertex> positions;  // empty unless kept

  std::size_t length() const { return steps.size(); }
};

/// Runs N steps from `start` with the generator of (master, replica, stream).
/// When keep_positions is false only the endpoint is stored in positions.
template <CayleyBackend B>
Trajectory<B> run_walk(const WalkKernel<B>& kernel, const typename B::Vertex& start, int n_steps,
                       std::uint64_t master, std::uint64_t replica, std::uint64_t stream_id,
                       bool keep_positions = true) {
  if (n_steps < 0) throw std::invalid_argument("run_walk: N must be >= 0");
  Trajectory<B> t;
  t.replica = replica;
  t.stream = stream_id;
  t.start = start;
  t.steps.reserve(static_cast<std::size_t>(n_steps));
  if (keep_positions) t.positions.reserve(static_cast<std::size_t>(n_steps) + 1);
  StreamRng rng(master, replica, stream_id);
  KernelRow scratch;
  auto x = start;
  if (keep_positions) t.positions.push_back(x);
  for (int i = 0; i < n_steps; ++i) {
    auto [next, s] = kernel.step(x, rng, scratch);
    t.steps.push_back(s);
    x = std::move(next);
    if (keep_positions) t.positions.push_back(x);
  }
  if (!keep_positions) t.positions.push_back(std::move(x));
  return t;
}

/// JSON lines {"replica":r,"step":i,"vertex":"..."}.
template <CayleyBackend B>
void write_trajectory_jsonl(std::ostream& os, const B& backend, const Trajectory<B>& t) {
  for (std::size_t i = 0; i < t.positions.size(); ++i) {
    nlohmann::json line = {{"replica", t.replica},
                           {"step", t.positions.size() == t.steps.size() + 1 ? i : t.steps.size()},
                           {"vertex", backend.to_string(t.positions[i])}};
    os << line.dump() << '\n';
  }
}

/// Sparse n-step distribution. Entries are in canonical (digest) order.
template <CayleyBackend B>
struct SparseDistribution {
  using Vertex = typename B::Vertex;
  struct Entry {
    Vertex vertex;
    double probability;
    int target_distance = 0;  // word distance to the DP target, when there is one
  };

  int steps = 0;
  double threshold = 0.0;
  std::vector<Entry> entries;
  double truncated_mass = 0.0;  // below threshold plus pruned
  double pruned_mass = 0.0;     // mass that can no longer reach the target
  std::size_t peak_entries = 0;
  double adaptive_cut = 0.0;  // largest probability dropped by the adaptive cap
  double max_conservation_error = 0.0;  // worst |stored + truncated - 1| over all steps

  double stored_mass() const {
    CompensatedSum s;
    for (const auto& e : entries) s.add(e.probability);
    return s.value();
  }
  double conservation_error() const { return std::abs(stored_mass() + truncated_mass - 1.0); }

  /// Stored probability of v (0 when absent).
  double probability(const Vertex& v) const {
    const auto it = std::lower_bound(
        entries.begin(), entries.end(), v.digest(),
        [](const Entry& e, const Digest128& d) { return e.vertex.digest() < d; });
    if (it == entries.end() || !(it->vertex.digest() == v.digest())) return 0.0;
    return it->probability;
  }
};

class DistributionBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultEntryBudget = 10'000'000;
inline constexpr double kDefaultTruncation = 1e-15;

struct DistributionLimits {
  /// Hard cap on live entries; exceeding it throws DistributionBudgetError.
  std::size_t entry_budget = kDefaultEntryBudget;
  /// When nonzero, after each step only this many of the largest entries are
  /// kept and the rest move to truncated mass (values stay lower bounds).
  std::size_t adaptive_budget = 0;
};

/// Word distance to a fixed vertex. step() gives the distance of v*s from
/// the distance of v; trees specialise it to O(1) without building v*s.
template <CayleyBackend B>
class DistanceTo {
 public:
  DistanceTo(const B& backend, const typename B::Vertex& center)
      : backend_(&backend), center_(center) {}
  int operator()(const typename B::Vertex& v) const { return backend_->word_distance(v, center_); }
  int step(const typename B::Vertex& v, int, Label s) const {
    return (*this)(backend_->multiply(v, s));
  }

 private:
  const B* backend_;
  typename B::Vertex center_;
};

template <>
class DistanceTo<FreeGroup> {
 public:
  DistanceTo(const FreeGroup& backend, const FreeVertex& center)
      : backend_(&backend), letters_(center.letters()) {
    FreeVertex v = center;
    prefixes_.resize(center.length() + 1);
    for (auto i = center.length();; --i) {
      prefixes_[i] = v.digest();
      if (i == 0) break;
      v = v.prefix();
    }
  }
  int operator()(const FreeVertex& v) const {
    const auto lc = static_cast<int>(letters_.size());
    const auto common = static_cast<int>(v.common_prefix_length(prefixes_));
    return static_cast<int>(v.length()) + lc - 2 * common;
  }
  int step(const FreeVertex& v, int dv, Label s) const {
    const auto lv = static_cast<int>(v.length());
    const bool up = lv > 0 && s == backend_->inverse(v.last());
    // v lies on the geodesic from 1 to the centre iff it is a prefix of it.
    const bool on_geodesic = dv == static_cast<int>(letters_.size()) - lv;
    if (on_geodesic) {
      const bool toward = !up && lv < static_cast<int>(letters_.size()) &&
                          letters_[static_cast<std::size_t>(lv)] == s;
      return toward ? dv - 1 : dv + 1;
    }
    return up ? dv - 1 : dv + 1;
  }

 private:
  const FreeGroup* backend_;
  std::vector<Label> letters_;
  std::vector<Digest128> prefixes_;
};

/// Push-forward of the exact kernel from `start` for n steps.
///
/// With a target, an entry y at step k is kept only while
/// word_distance(y, target) <= n - k + slack; everything else is counted as
/// pruned (and in truncated_mass). Stored values are then exact (for
/// threshold 0) on the ball of radius `slack` around the target. Without a
/// target this is the full distribution. Entries below `threshold` are moved
/// into truncated_mass after each step.
template <CayleyBackend B>
SparseDistribution<B> n_step_distribution(
    const WalkKernel<B>& kernel, const typename B::Vertex& start, int n, double threshold,
    const std::optional<typename B::Vertex>& target = std::nullopt, int slack = 0,
    DistributionLimits limits = {}, SparseDistribution<B>* before_last = nullptr) {
  using Vertex = typename B::Vertex;
  if (n < 0) throw std::invalid_argument("n_step_distribution: n must be >= 0");
  if (!(threshold >= 0.0 && threshold <= 1e-6)) {
    throw std::invalid_argument("n_step_distribution: threshold must lie in [0, 1e-6]");
  }
  const B& g = kernel.backend();
  std::optional<DistanceTo<B>> distance_to;
  if (target) distance_to.emplace(g, *target);

  struct Slot {
    Vertex vertex;
    int target_distance;
    CompensatedSum mass;
  };
  SparseDistribution<B> dist;
  dist.threshold = threshold;
  dist.entries.push_back({start, 1.0, distance_to ? (*distance_to)(start) : 0});
  CompensatedSum truncated;
  CompensatedSum pruned;
  // Rows are cached by digest: the same vertex recurs every other step.
  const bool fixed_rows = kernel.kind() == KernelKind::kClusterSrw &&
                          kernel.environment().model().p >= 1.0 && !kernel.environment().shifted();
  std::unordered_map<Digest128, KernelRow, DigestHash> rows;
  KernelRow fixed;
  if (fixed_rows) kernel.row(start, fixed);
  std::unordered_map<Digest128, Slot, DigestHash> next;
  std::vector<double> below;

  auto sort_entries = [](std::vector<typename SparseDistribution<B>::Entry>& entries) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.vertex.digest() < b.vertex.digest(); });
  };

  if (before_last && n == 1) *before_last = dist;
  for (int k = 1; k <= n; ++k) {
    next.clear();
    const int allowed = n - k + slack;
    for (const auto& e : dist.entries) {
      const KernelRow* r = &fixed;
      if (!fixed_rows) {
        auto rit = rows.find(e.vertex.digest());
        if (rit == rows.end()) rit = rows.emplace(e.vertex.digest(), kernel.row(e.vertex)).first;
        r = &rit->second;
      }
      if (r->labels.empty()) throw KernelError("distribution reached an isolated vertex");
      for (std::size_t i = 0; i < r->size(); ++i) {
        const Label s = r->labels[i];
        const double q = e.probability * r->probabilities[i];
        int d = 0;
        if (distance_to) {
          d = distance_to->step(e.vertex, e.target_distance, s);
          if (d > allowed) {
            pruned.add(q);
            truncated.add(q);
            continue;
          }
        }
        const Digest128 nd = g.neighbor_digest(e.vertex, s);
        auto it = next.find(nd);
        if (it == next.end()) {
          it = next.emplace(nd, Slot{g.multiply(e.vertex, s, nd), d, {}}).first;
          if (next.size() > limits.entry_budget) {
            throw DistributionBudgetError(
                "n-step distribution exceeded " + std::to_string(limits.entry_budget) +
                " entries at step " + std::to_string(k) + "; raise the truncation threshold");
          }
        }
        it->second.mass.add(q);
      }
    }
    dist.entries.clear();
    dist.entries.reserve(next.size());
    below.clear();
    for (auto& [d, slot] : next) {
      const double m = slot.mass.value();
      if (m < threshold) {
        below.push_back(m);
      } else {
        dist.entries.push_back({std::move(slot.vertex), m, slot.target_distance});
      }
    }
    // Hash-table order is not canonical; sorting the dropped values first
    // makes their sum reproducible.
    std::sort(below.begin(), below.end());
    for (double m : below) truncated.add(m);
    if (limits.adaptive_budget > 0 && dist.entries.size() > limits.adaptive_budget) {
      const auto keep = static_cast<std::ptrdiff_t>(limits.adaptive_budget);
      std::nth_element(dist.entries.begin(), dist.entries.begin() + keep, dist.entries.end(),
                       [](const auto& a, const auto& b) {
                         if (a.probability != b.probability) return a.probability > b.probability;
                         return a.vertex.digest() < b.vertex.digest();
                       });
      // Sum the dropped tail in canonical order so the total is reproducible.
      std::sort(dist.entries.begin() + keep, dist.entries.end(),
                [](const auto& a, const auto& b) { return a.vertex.digest() < b.vertex.digest(); });
      for (auto it = dist.entries.begin() + keep; it != dist.entries.end(); ++it) {
        truncated.add(it->probability);
        dist.adaptive_cut = std::max(dist.adaptive_cut, it->probability);
      }
      dist.entries.erase(dist.entries.begin() + keep, dist.entries.end());
    }
    // Canonical order makes the next step's summation order independent of
    // hash-table iteration order.
    sort_entries(dist.entries);
    dist.peak_entries = std::max(dist.peak_entries, dist.entries.size());
    dist.steps = k;
    dist.truncated_mass = truncated.value();
    dist.pruned_mass = pruned.value();
    dist.max_conservation_error = std::max(dist.max_conservation_error, dist.conservation_error());
    if (before_last && k == n - 1) *before_last = dist;
  }
  dist.steps = n;
  dist.truncated_mass = truncated.value();
  dist.pruned_mass = pruned.value();
  return dist;
}

/// CSV rows "vertex,probability".
template <CayleyBackend B>
void write_distribution_csv(std::ostream& os, const B& backend, const SparseDistribution<B>& d) {
  os << "vertex,probability\n";
  char buf[32];
  for (const auto& e : d.entries) {
    std::snprintf(buf, sizeof buf, "%.17g", e.probability);
    os << backend.to_string(e.vertex) << ',' << buf << '\n';
  }
}

/// The DP lost the probability of the sampled path (threshold or adaptive cap).
class PathProbabilityLost : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-path entropy quantities for one trajectory of length n.
struct EntropySample {
  double plug_in = 0.0;    // -log p^n(1, x_n) / n
  double increment = 0.0;  // log p^{n-1}(1, x_{n-1}) - E[log p^n(1, x_{n-1} s)]
  double truncated_mass = 0.0;
  double conservation_error = 0.0;
  std::size_t peak_entries = 0;
  double adaptive_cut = 0.0;
};

/// Exact entropy quantities along a sampled path, from one targeted DP
/// centred at x_{n-1} with slack 1 (this covers x_{n-1} and all its
/// neighbours, hence x_n).
///
/// The increment form averages the last step over the kernel instead of
/// using the sampled x_n; its expectation is H_n - H_{n-1}, which converges
/// to h much faster than H_n / n.
template <CayleyBackend B>
EntropySample entropy_sample(const WalkKernel<B>& kernel, const Trajectory<B>& path,
                             double threshold, DistributionLimits limits = {}) {
  const int n = static_cast<int>(path.length());
  if (n < 1 || path.positions.size() != path.steps.size() + 1) {
    throw std::invalid_argument("entropy_sample: need a path of length >= 1 with positions");
  }
  const auto& center = path.positions[static_cast<std::size_t>(n - 1)];
  SparseDistribution<B> previous;
  auto dist = n_step_distribution(kernel, path.start, n, threshold,
                                  std::optional<typename B::Vertex>(center), 1, limits,
                                  &previous);
  EntropySample out;
  out.truncated_mass = dist.truncated_mass;
  out.peak_entries = dist.peak_entries;
  out.conservation_error = dist.max_conservation_error;
  out.adaptive_cut = dist.adaptive_cut;

  const double p_end = dist.probability(path.positions.back());
  const double p_prev = previous.probability(center);
  if (p_end <= 0.0 || p_prev <= 0.0) {
    throw PathProbabilityLost("entropy_sample: path probability vanished (threshold too large)");
  }
  out.plug_in = -std::log(p_end) / n;

  const KernelRow r = kernel.row(center);
  const B& g = kernel.backend();
  CompensatedSum expected;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double q = dist.probability(g.multiply(center, r.labels[i]));
    if (q <= 0.0) throw PathProbabilityLost("entropy_sample: neighbour probability vanished");
    expected.add(r.probabilities[i] * std::log(q));
  }
  out.increment = std::log(p_prev) - expected.value();
  return out;
}

}  // namespace hyperwalk
