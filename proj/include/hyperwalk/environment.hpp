#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "hyperwalk/backend.hpp"
#include "hyperwalk/digest.hpp"

namespace hyperwalk {

enum class ModelKind { kBernoulli, kConductance };
enum class ConductanceLaw { kLogUniform, kUniform };

struct EnvironmentModel {
  ModelKind kind = ModelKind::kBernoulli;
  double p = 1.0;
  double alpha = 0.5;
  ConductanceLaw law = ConductanceLaw::kLogUniform;

  static EnvironmentModel bernoulli(double p);
  static EnvironmentModel conductance(double alpha, ConductanceLaw law = ConductanceLaw::kLogUniform);

  /// Throws std::invalid_argument when parameters are out of range.
  void validate() const;
  std::string describe() const;
};

ConductanceLaw parse_conductance_law(const std::string& name);
std::string to_string(ConductanceLaw law);

struct EdgeState {
  bool open = false;
  double conductance = 0.0;  // 1 or 0 for Bernoulli
};

/// Seed-derived PRF key for edge states.
Key128 edge_key(std::uint64_t seed);

/// Edge PRF uniform in (0,1) for the unordered pair of canonical digests.
double edge_uniform(const Key128& key, const Digest128& a, const Digest128& b);

/// Maps a PRF uniform to a conductance strictly inside (alpha, 1/alpha).
double conductance_from_uniform(const EnvironmentModel& model, double u);

/// Lazily evaluated environment: every edge state is a pure function of
/// (seed, model, translated edge key). Nothing is stored.
template <CayleyBackend B>
class Environment {
 public:
  using Vertex = typename B::Vertex;

  Environment(const B& backend, EnvironmentModel model, std::uint64_t seed)
      : backend_(&backend), model_(model), seed_(seed), key_(edge_key(seed)),
        offset_(backend.identity()) {
    model_.validate();
  }

  const B& backend() const { return *backend_; }
  const EnvironmentModel& model() const { return model_; }
  std::uint64_t seed() const { return seed_; }
  const Vertex& offset() const { return offset_; }
  bool shifted() const { return has_offset_; }

  /// PRF uniform of the edge {u, u*s}.
  double uniform(const Vertex& u, Label s) const {
    if (!has_offset_) return edge_uniform(key_, u.digest(), backend_->neighbor_digest(u, s));
    const Vertex t = backend_->left_multiply(offset_, u);
    return edge_uniform(key_, t.digest(), backend_->neighbor_digest(t, s));
  }

  bool is_open(const Vertex& u, Label s) const {
    if (model_.kind == ModelKind::kConductance) return true;
    if (model_.p >= 1.0) return true;
    if (model_.p <= 0.0) return false;
    return uniform(u, s) < model_.p;
  }

  /// Edge weight: 1/0 for Bernoulli, the conductance otherwise.
  double weight(const Vertex& u, Label s) const {
    if (model_.kind == ModelKind::kBernoulli) return is_open(u, s) ? 1.0 : 0.0;
    return conductance_from_uniform(model_, uniform(u, s));
  }

  EdgeState edge_state(const Vertex& u, Label s) const {
    const double w = weight(u, s);
    return {w > 0.0, w};
  }

  /// State of the edge {u, v}; throws when u and v are not adjacent.
  EdgeState edge_state(const Vertex& u, const Vertex& v) const {
    const int s = backend_->adjacency_label(u, v);
    if (s < 0) throw std::invalid_argument("edge_state: vertices are not adjacent");
    return edge_state(u, static_cast<Label>(s));
  }

  /// Open incident labels of u in canonical label order.
  std::vector<Label> open_labels(const Vertex& u) const {
    std::vector<Label> out;
    open_labels(u, out);
    return out;
  }

  void open_labels(const Vertex& u, std::vector<Label>& out) const {
    out.clear();
    const int d = backend_->degree();
    if (model_.kind == ModelKind::kConductance || model_.p >= 1.0) {
      for (int s = 0; s < d; ++s) out.push_back(static_cast<Label>(s));
      return;
    }
    if (model_.p <= 0.0) return;
    if (!has_offset_) {
      for (int s = 0; s < d; ++s) {
        const auto l = static_cast<Label>(s);
        if (edge_uniform(key_, u.digest(), backend_->neighbor_digest(u, l)) < model_.p) {
          out.push_back(l);
        }
      }
      return;
    }
    const Vertex t = backend_->left_multiply(offset_, u);
    for (int s = 0; s < d; ++s) {
      const auto l = static_cast<Label>(s);
      if (edge_uniform(key_, t.digest(), backend_->neighbor_digest(t, l)) < model_.p) {
        out.push_back(l);
      }
    }
  }

  int open_degree(const Vertex& u) const { return static_cast<int>(open_labels(u).size()); }

  /// Environment with edge_state(shifted, u, v) = edge_state(*this, g*u, g*v).
  Environment shift(const Vertex& g) const {
    Environment out = *this;
    out.offset_ = backend_->left_multiply(offset_, g);
    out.has_offset_ = !(out.offset_ == backend_->identity());
    return out;
  }

 private:
  const B* backend_;
  EnvironmentModel model_;
  std::uint64_t seed_;
  Key128 key_;
  Vertex offset_;
  bool has_offset_ = false;
};

template <CayleyBackend B>
Environment<B> shift_environment(const Environment<B>& env, const typename B::Vertex& g) {
  return env.shift(g);
}

/// Explored part of the open cluster of `root` inside the graph ball of
/// radius `radius` around it.
template <CayleyBackend B>
struct ClusterView {
  using Vertex = typename B::Vertex;

  Vertex root;
  int radius = 0;
  bool survived = false;
  bool truncated = false;
  std::vector<Vertex> vertices;  // breadth-first order, root first
  std::vector<int> distance;     // graph distance to root
  std::vector<int> degree;       // open degree in the whole graph
  std::vector<std::vector<std::pair<std::size_t, Label>>> adjacency;  // open edges inside the view
  std::unordered_map<Digest128, std::size_t, DigestHash> index;

  std::size_t size() const { return vertices.size(); }
  bool contains(const Vertex& v) const { return index.count(v.digest()) != 0; }
  std::size_t open_edge_count() const {
    std::size_t twice = 0;
    for (const auto& a : adjacency) twice += a.size();
    return twice / 2;
  }
};

/// Rough per-vertex footprint used to turn a byte budget into a vertex cap.
inline constexpr std::size_t kClusterBytesPerVertex = 256;

/// Breadth-first exploration of the open cluster of `root` restricted to the
/// graph ball of radius `radius`. Stops with `truncated` set once the memory
/// budget is spent.
template <CayleyBackend B>
ClusterView<B> explore_cluster(const Environment<B>& env, const typename B::Vertex& root,
                               int radius, std::size_t memory_budget = std::size_t{2} << 30) {
  if (radius < 1) throw std::invalid_argument("explore_cluster: radius must be >= 1");
  const B& g = env.backend();
  const std::size_t cap = std::max<std::size_t>(1, memory_budget / kClusterBytesPerVertex);
  ClusterView<B> view;
  view.root = root;
  view.radius = radius;
  view.vertices.push_back(root);
  view.distance.push_back(0);
  view.adjacency.emplace_back();
  view.index.emplace(root.digest(), 0);
  std::vector<Label> open;
  for (std::size_t head = 0; head < view.vertices.size(); ++head) {
    const auto v = view.vertices[head];
    env.open_labels(v, open);
    view.degree.push_back(static_cast<int>(open.size()));
    for (Label s : open) {
      const Digest128 nd = g.neighbor_digest(v, s);
      auto it = view.index.find(nd);
      if (it != view.index.end()) {
        if (it->second > head) view.adjacency[head].emplace_back(it->second, s);
        continue;
      }
      auto w = g.multiply(v, s);
      const int d = g.word_distance(root, w);
      if (d > radius) continue;
      if (view.vertices.size() >= cap) {
        view.truncated = true;
        continue;
      }
      const std::size_t id = view.vertices.size();
      view.index.emplace(nd, id);
      view.vertices.push_back(std::move(w));
      view.distance.push_back(d);
      view.adjacency.emplace_back();
      view.adjacency[head].emplace_back(id, s);
      if (d == radius) view.survived = true;
    }
  }
  // Symmetrize: each open edge was recorded once from the earlier endpoint.
  for (std::size_t i = 0; i < view.adjacency.size(); ++i) {
    for (const auto& [j, s] : view.adjacency[i]) {
      if (j > i) view.adjacency[j].emplace_back(i, g.inverse(s));
    }
  }
  for (auto& a : view.adjacency) std::sort(a.begin(), a.end(), [](auto& x, auto& y) {
    return x.second < y.second;
  });
  return view;
}

/// True iff the open cluster of `root` reaches graph distance `radius` from
/// it through a path inside the ball. Depth-first with early exit.
template <CayleyBackend B>
bool reaches_radius(const Environment<B>& env, const typename B::Vertex& root, int radius) {
  if (radius <= 0) return true;
  const B& g = env.backend();
  std::unordered_set<Digest128, DigestHash> seen{root.digest()};
  struct Frame {
    typename B::Vertex v;
    int dist;
  };
  std::vector<Frame> stack{{root, 0}};
  std::vector<Label> open;
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    env.open_labels(f.v, open);
    // Push inward moves first so outward moves are explored first.
    std::vector<Frame> outward;
    for (Label s : open) {
      const Digest128 nd = g.neighbor_digest(f.v, s);
      if (!seen.insert(nd).second) continue;
      auto w = g.multiply(f.v, s);
      const int d = g.word_distance(root, w);
      if (d >= radius) return true;
      if (d > f.dist) {
        outward.push_back({std::move(w), d});
      } else {
        stack.push_back({std::move(w), d});
      }
    }
    for (auto it = outward.rbegin(); it != outward.rend(); ++it) stack.push_back(std::move(*it));
  }
  return false;
}

class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxConditioningAttempts = 10000;

std::uint64_t environment_seed(std::uint64_t master, std::uint64_t replica, std::uint64_t attempt);

template <CayleyBackend B>
struct ConditionedEnvironment {
  Environment<B> env;
  int attempts = 1;  // candidates drawn, including the accepted one
};

/// First environment derived from (master, replica, attempt) whose root
/// cluster reaches radius r_infty.
template <CayleyBackend B>
ConditionedEnvironment<B> sample_conditioned_environment(const B& backend,
                                                         const EnvironmentModel& model,
                                                         std::uint64_t master,
                                                         std::uint64_t replica, int r_infty) {
  for (int attempt = 0; attempt < kMaxConditioningAttempts; ++attempt) {
    Environment<B> env(backend, model, environment_seed(master, replica, attempt));
    if (reaches_radius(env, backend.identity(), r_infty)) return {std::move(env), attempt + 1};
  }
  throw ConditioningError("no surviving cluster after " +
                          std::to_string(kMaxConditioningAttempts) +
                          " candidates: apparently subcritical or R_infty too large");
}

/// Degree of the root in its cluster: the density of mu' with respect to mu
/// up to the normalising constant.
template <CayleyBackend B>
int degree_biased_weight(const ClusterView<B>& view) {
  if (!view.survived) throw std::invalid_argument("degree_biased_weight: cluster did not survive");
  if (view.degree.empty() || view.degree[0] == 0) {
    throw std::invalid_argument("degree_biased_weight: isolated root");
  }
  return view.degree[0];
}

/// Memoizes cluster views per (environment, root, radius) under a byte budget.
/// When the budget is hit the whole cache is dropped, which invalidates
/// references returned earlier. Not thread-safe; use one cache per worker.
template <CayleyBackend B>
class ClusterCache {
 public:
  explicit ClusterCache(std::size_t memory_budget = std::size_t{2} << 30)
      : budget_(memory_budget) {}

  const ClusterView<B>& get(const Environment<B>& env, const typename B::Vertex& root, int radius) {
    const std::uint64_t words[6] = {env.seed(),          env.offset().digest().lo,
                                    env.offset().digest().hi, root.digest().lo,
                                    root.digest().hi,     static_cast<std::uint64_t>(radius)};
    static const Key128 key = derive_key(domain::kVertex, 0x636163686500ULL);
    const Digest128 k = siphash128_words(key, words);
    auto it = views_.find(k);
    if (it != views_.end()) {
      ++hits_;
      return it->second;
    }
    auto view = explore_cluster(env, root, radius, budget_);
    const std::size_t bytes = view.size() * kClusterBytesPerVertex;
    if (used_ + bytes > budget_) {
      views_.clear();
      used_ = 0;
    }
    used_ += bytes;
    return views_.emplace(k, std::move(view)).first->second;
  }

  std::size_t hits() const { return hits_; }
  std::size_t size() const { return views_.size(); }

 private:
  std::size_t budget_;
  std::size_t used_ = 0;
  std::size_t hits_ = 0;
  std::unordered_map<Digest128, ClusterView<B>, DigestHash> views_;
};

/// Adjacency-list snapshot of a view; vertices are serialized words.
template <CayleyBackend B>
nlohmann::json cluster_to_json(const B& backend, const ClusterView<B>& view) {
  nlohmann::json vertices = nlohmann::json::array();
  for (std::size_t i = 0; i < view.size(); ++i) {
    nlohmann::json nbrs = nlohmann::json::array();
    for (const auto& [j, s] : view.adjacency[i]) nbrs.push_back(j);
    vertices.push_back({{"id", i},
                        {"word", backend.to_string(view.vertices[i])},
                        {"dist", view.distance[i]},
                        {"deg", view.degree[i]},
                        {"nbrs", std::move(nbrs)}});
  }
  return {{"backend", backend.spec()},
          {"root", backend.to_string(view.root)},
          {"radius", view.radius},
          {"survived", view.survived},
          {"truncated", view.truncated},
          {"vertices", std::move(vertices)}};
}

}  // namespace hyperwalk
