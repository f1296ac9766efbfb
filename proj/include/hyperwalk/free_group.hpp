#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hyperwalk/digest.hpp"

namespace hyperwalk {

/// Generator index. For a free group of rank k, label 2i is the i-th free
/// generator and 2i+1 its inverse.
using Label = std::uint8_t;

/// Vertex of the Cayley tree of a free group: a reduced word stored as a
/// persistent parent chain, so a word and all of its prefixes share storage
/// and extending or shortening by one letter is O(1).
class FreeVertex {
 public:
  FreeVertex() = default;

  std::uint32_t length() const { return node_ ? node_->depth : 0; }
  const Digest128& digest() const { return node_ ? node_->digest : root_digest(); }
  bool is_identity() const { return node_ == nullptr; }
  Label last() const { return node_->letter; }
  FreeVertex prefix() const { return FreeVertex(node_->parent); }

  /// Letters from first to last.
  std::vector<Label> letters() const;

  /// Length of the longest common prefix with the word whose prefix digests
  /// (lengths 0..L) are given. Walks the parent chain without copying.
  std::uint32_t common_prefix_length(const std::vector<Digest128>& prefix_digests) const;

  friend bool operator==(const FreeVertex& a, const FreeVertex& b);

  static const Digest128& root_digest();

 private:
  friend class FreeGroup;
  struct Node {
    std::shared_ptr<const Node> parent;
    Digest128 digest;
    std::uint32_t depth;
    Label letter;
  };
  explicit FreeVertex(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Free group F_k with its standard symmetric generating set (degree 2k). The
/// Cayley graph is the (2k)-regular tree: 0-hyperbolic, word metric.
class FreeGroup {
 public:
  using Vertex = FreeVertex;
  using BoundaryPoint = std::vector<Label>;

  /// Ranks 2..32, so labels fit a 64-bit open-edge mask.
  explicit FreeGroup(int rank);

  int rank() const { return rank_; }
  int degree() const { return 2 * rank_; }
  double hyperbolicity() const { return 0.0; }
  bool hyperbolic_metric() const { return false; }
  std::string spec() const;

  Label inverse(Label s) const { return static_cast<Label>(s ^ 1U); }

  Vertex identity() const { return {}; }
  Vertex multiply(const Vertex& v, Label s) const;
  /// v * s when its digest is already known (from neighbor_digest).
  Vertex multiply(const Vertex& v, Label s, const Digest128& digest) const;
  /// g * v.
  Vertex left_multiply(const Vertex& g, const Vertex& v) const;
  Vertex inverse(const Vertex& v) const;
  Vertex from_letters(const std::vector<Label>& word) const;

  /// Canonical digest of v*s without building the vertex.
  Digest128 neighbor_digest(const Vertex& v, Label s) const;
  std::vector<std::pair<Vertex, Label>> neighbors(const Vertex& v) const;

  /// Graph (word) distance, exact.
  int word_length(const Vertex& v) const { return static_cast<int>(v.length()); }
  int word_distance(const Vertex& u, const Vertex& v) const;
  /// The backend's metric; for trees this is the word metric.
  double dist(const Vertex& u, const Vertex& v) const { return word_distance(u, v); }
  double norm(const Vertex& v) const { return v.length(); }
  double gromov_product(const Vertex& x, const Vertex& y, const Vertex& base) const;

  /// Returns s if v = u*s for a generator s, or -1.
  int adjacency_label(const Vertex& u, const Vertex& v) const;

  /// Anchor coordinates used for bulk boundary Gromov products.
  BoundaryPoint boundary_point(const Vertex& v) const { return v.letters(); }
  double boundary_norm(const BoundaryPoint& p) const { return static_cast<double>(p.size()); }
  /// Gromov product over the identity: the common-prefix length.
  double boundary_product(const BoundaryPoint& a, const BoundaryPoint& b) const;

  std::string to_string(const Vertex& v) const;
  Vertex parse(std::string_view word) const;
  std::string label_name(Label s) const;

 private:
  Vertex extend(const Vertex& v, Label s) const;

  int rank_;
};

}  // namespace hyperwalk
