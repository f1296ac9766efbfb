#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hyperwalk/coxeter.hpp"
#include "hyperwalk/digest.hpp"

namespace hyperwalk {

/// Point of the hyperboloid model {x : -x0^2 + x1^2 + x2^2 = -1, x0 > 0}.
using HyperboloidPoint = std::array<long double, 3>;

/// Vertex of the {P,Q} tile-adjacency graph. Identity is decided by an exact
/// fingerprint (the orbit point of a fixed covector under the Tits
/// representation reduced modulo two primes); the reduced word is kept for
/// exact word lengths and well-conditioned geometry.
class FuchsianVertex {
 public:
  const std::vector<Label>& word() const { return word_; }
  const std::vector<std::uint64_t>& fingerprint() const { return fingerprint_; }
  const Digest128& digest() const { return digest_; }
  std::uint32_t length() const { return static_cast<std::uint32_t>(word_.size()); }

  friend bool operator==(const FuchsianVertex& a, const FuchsianVertex& b) {
    return a.fingerprint_ == b.fingerprint_;
  }

 private:
  friend class FuchsianGroup;
  std::vector<Label> word_;
  std::vector<std::uint64_t> fingerprint_;
  Digest128 digest_;
};

/// Cayley graph of the reflection group of a regular hyperbolic P-gon with
/// interior angles 2*pi/Q. Tiles of the {P,Q} tiling correspond one-to-one to
/// group elements, and right multiplication by the P side reflections moves
/// to the P edge-adjacent tiles, so this is the dual graph of the tiling with
/// tile centres g*o. Requires 1/P + 1/Q < 1/2 and Q even.
class FuchsianGroup {
 public:
  using Vertex = FuchsianVertex;
  using BoundaryPoint = HyperboloidPoint;

  FuchsianGroup(int sides, int tiles_per_vertex);

  int sides() const { return sides_; }
  int tiles_per_vertex() const { return tiles_per_vertex_; }
  int degree() const { return sides_; }
  /// Four-point constant of the hyperbolic plane.
  double hyperbolicity() const;
  bool hyperbolic_metric() const { return true; }
  std::string spec() const;
  const CoxeterPolygon& coxeter() const { return coxeter_; }

  /// Distance between adjacent tile centres, measured on the generator images.
  long double edge_length() const { return edge_length_; }
  /// Largest word length for which hyperboloid coordinates stay finite.
  int radius_cap() const { return radius_cap_; }
  /// Gromov products above this value are beyond long double resolution.
  double gromov_resolution() const;

  Label inverse(Label s) const { return s; }

  Vertex identity() const;
  Vertex multiply(const Vertex& v, Label s) const;
  /// v * s when its digest is already known (from neighbor_digest).
  Vertex multiply(const Vertex& v, Label s, const Digest128& digest) const;
  Vertex left_multiply(const Vertex& g, const Vertex& v) const;
  Vertex inverse(const Vertex& v) const;
  Vertex from_letters(const std::vector<Label>& word) const;

  Digest128 neighbor_digest(const Vertex& v, Label s) const;
  std::vector<std::pair<Vertex, Label>> neighbors(const Vertex& v) const;

  int word_length(const Vertex& v) const { return static_cast<int>(v.length()); }
  int word_distance(const Vertex& u, const Vertex& v) const;
  /// Hyperbolic distance between the tile centres u*o and v*o.
  double dist(const Vertex& u, const Vertex& v) const;
  double norm(const Vertex& v) const;
  double gromov_product(const Vertex& x, const Vertex& y, const Vertex& base) const;

  int adjacency_label(const Vertex& u, const Vertex& v) const;

  HyperboloidPoint point(const std::vector<Label>& word) const;
  HyperboloidPoint point(const Vertex& v) const { return point(v.word()); }

  BoundaryPoint boundary_point(const Vertex& v) const { return point(v); }
  double boundary_norm(const BoundaryPoint& p) const;
  double boundary_product(const BoundaryPoint& a, const BoundaryPoint& b) const;

  std::string to_string(const Vertex& v) const;
  Vertex parse(std::string_view word) const;
  std::string label_name(Label s) const { return std::to_string(s); }

  /// Count of arccosh arguments below 1 clamped by rounding.
  std::uint64_t numeric_warnings() const;

  struct Modulus {
    std::uint64_t prime;
    std::uint64_t lambda;  // image of 2cos(pi/m)
  };
  const std::array<Modulus, 2>& moduli() const { return moduli_; }

 private:
  void apply_letter(std::vector<std::uint64_t>& fp, Label s) const;
  Digest128 fingerprint_digest(const std::vector<std::uint64_t>& fp) const;
  Vertex make_vertex(std::vector<Label> word, std::vector<std::uint64_t> fp) const;
  Vertex make_vertex(std::vector<Label> word, std::vector<std::uint64_t> fp,
                     const Digest128& digest) const;
  double arccosh_checked(long double x) const;

  int sides_;
  int tiles_per_vertex_;
  CoxeterPolygon coxeter_;
  std::vector<HyperboloidPoint> normals_;
  long double edge_length_;
  int radius_cap_;
  std::array<Modulus, 2> moduli_;
  std::shared_ptr<std::atomic<std::uint64_t>> warnings_;
};

/// Minkowski bilinear form -x0*y0 + x1*y1 + x2*y2.
long double minkowski(const HyperboloidPoint& x, const HyperboloidPoint& y);

}  // namespace hyperwalk
