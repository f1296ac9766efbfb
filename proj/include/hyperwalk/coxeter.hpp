#pragma once

#include <cstdint>
#include <vector>

#include "hyperwalk/free_group.hpp"  // Label

namespace hyperwalk {

/// Coxeter group of a hyperbolic polygon: generators are the reflections in
/// the sides s_0..s_{n-1} of a regular n-gon, consecutive sides meet at angle
/// pi/m (so (s_i s_{i+1})^m = 1) and non-consecutive sides are ultraparallel
/// (infinite order).
///
/// Reduced words are maintained exactly through the Brink-Howlett minimal
/// root table: multiplying a reduced word by a generator either appends the
/// letter or deletes exactly one letter, and the position is found by pushing
/// the simple root through the word while it stays minimal.
class CoxeterPolygon {
 public:
  static constexpr int kNegative = -1;
  static constexpr int kDominant = -2;

  CoxeterPolygon(int sides, int vertex_order);

  int rank() const { return sides_; }
  int vertex_order() const { return order_; }
  bool adjacent(int i, int j) const;
  /// Tits bilinear form on simple roots.
  double form(int i, int j) const;

  std::size_t minimal_root_count() const { return roots_.size(); }
  const std::vector<double>& minimal_root(std::size_t index) const { return roots_[index]; }
  /// Image of minimal root `root` under reflection s: a minimal root index,
  /// kNegative (root == alpha_s) or kDominant.
  int reflect(int root, int s) const { return table_[static_cast<std::size_t>(root) * sides_ + s]; }

  /// word <- word * s. Returns true when the length decreased.
  bool multiply_right(std::vector<Label>& word, Label s) const;
  /// word <- s * word. Returns true when the length decreased.
  bool multiply_left(Label s, std::vector<Label>& word) const;

  /// True when the word is reduced (checked letter by letter).
  bool is_reduced(const std::vector<Label>& word) const;

 private:
  int sides_;
  int order_;
  std::vector<std::vector<double>> roots_;
  std::vector<int> table_;
};

}  // namespace hyperwalk
