#include <cmath>
#include <queue>
#include <unordered_map>

#include "doctest.h"
#include "hyperwalk/fuchsian.hpp"
#include "hyperwalk/oracles.hpp"

using namespace hyperwalk;

namespace {

// Breadth-first lengths in the Cayley graph, vertices identified by digest.
std::unordered_map<Digest128, int, DigestHash> bfs_lengths(const FuchsianGroup& g, int radius,
                                                           std::vector<FuchsianVertex>* out) {
  std::unordered_map<Digest128, int, DigestHash> len{{g.identity().digest(), 0}};
  std::vector<FuchsianVertex> queue{g.identity()};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int d = len[queue[head].digest()];
    if (d == radius) continue;
    for (int s = 0; s < g.degree(); ++s) {
      auto w = g.multiply(queue[head], static_cast<Label>(s));
      if (len.emplace(w.digest(), d + 1).second) queue.push_back(std::move(w));
    }
  }
  if (out) *out = queue;
  return len;
}

}  // namespace

TEST_CASE("generators are involutions and consecutive pairs have order Q/2") {
  for (auto [P, Q] : {std::pair{5, 4}, std::pair{4, 6}, std::pair{3, 8}, std::pair{5, 8}}) {
    const FuchsianGroup g(P, Q);
    for (int i = 0; i < P; ++i) {
      const auto s = static_cast<Label>(i), t = static_cast<Label>((i + 1) % P);
      CHECK(g.multiply(g.multiply(g.identity(), s), s) == g.identity());
      auto v = g.identity();
      for (int k = 0; k < Q / 2; ++k) v = g.multiply(g.multiply(v, s), t);
      CHECK(v == g.identity());
      auto w = g.identity();
      for (int k = 0; k < Q / 2 - 1; ++k) w = g.multiply(g.multiply(w, s), t);
      CHECK_FALSE(w == g.identity());
    }
  }
}

TEST_CASE("reduced word lengths equal breadth-first distances") {
  const FuchsianGroup g(5, 4);
  std::vector<FuchsianVertex> all;
  const auto len = bfs_lengths(g, 7, &all);
  for (const auto& v : all) {
    CHECK(static_cast<int>(v.length()) == len.at(v.digest()));
    CHECK(g.coxeter().is_reduced(v.word()));
  }
}

TEST_CASE("sphere sizes of the {4,6} graph grow exponentially and match word lengths") {
  const FuchsianGroup g(4, 6);
  std::vector<FuchsianVertex> all;
  const auto len = bfs_lengths(g, 6, &all);
  std::vector<int> sphere(7, 0);
  for (const auto& [d, k] : len) ++sphere[static_cast<std::size_t>(k)];
  CHECK(sphere[0] == 1);
  CHECK(sphere[1] == 4);
  for (int k = 2; k <= 6; ++k) CHECK(sphere[k] > sphere[k - 1]);
}

TEST_CASE("edge length matches the right-triangle formula and every step has that length") {
  for (auto [P, Q] : {std::pair{5, 4}, std::pair{5, 8}, std::pair{5, 64}, std::pair{3, 8}}) {
    const FuchsianGroup g(P, Q);
    const double e = oracles::fuchsian_edge_length(P, Q);
    CHECK(static_cast<double>(g.edge_length()) == doctest::Approx(e).epsilon(1e-12));
    auto v = g.from_letters({0, 1, static_cast<Label>(2 % P), 0});
    for (int s = 0; s < P; ++s) {
      CHECK(g.dist(v, g.multiply(v, static_cast<Label>(s))) == doctest::Approx(e).epsilon(1e-9));
    }
  }
}

TEST_CASE("left multiplication is an isometry") {
  const FuchsianGroup g(5, 8);
  const auto h = g.from_letters({3, 1, 4, 0, 2});
  const auto u = g.from_letters({0, 2, 4, 1});
  const auto v = g.from_letters({1, 3, 0, 2, 4, 1});
  CHECK(g.dist(g.left_multiply(h, u), g.left_multiply(h, v)) ==
        doctest::Approx(g.dist(u, v)).epsilon(1e-9));
  CHECK(g.word_distance(g.left_multiply(h, u), g.left_multiply(h, v)) == g.word_distance(u, v));
  CHECK(g.left_multiply(g.inverse(h), h) == g.identity());
}

TEST_CASE("hyperboloid points lie on the hyperboloid") {
  const FuchsianGroup g(5, 8);
  const auto v = g.from_letters({0, 2, 4, 1, 3, 0, 2});
  const auto p = g.point(v);
  // Cancellation error grows with p0^2.
  CHECK(std::abs(static_cast<double>(minkowski(p, p) + 1.0L)) < 1e-15 * static_cast<double>(p[0] * p[0]));
  CHECK(p[0] >= 1.0L);
}

TEST_CASE("serialization round trip") {
  const FuchsianGroup g(5, 8);
  const auto v = g.from_letters({0, 2, 4, 1});
  CHECK(g.to_string(g.identity()) == "e");
  CHECK(g.parse(g.to_string(v)) == v);
  CHECK(g.parse("e") == g.identity());
}

TEST_CASE("constructor rejects non-hyperbolic or odd Q, and words beyond the radius cap") {
  CHECK_THROWS(FuchsianGroup(4, 4));
  CHECK_THROWS(FuchsianGroup(5, 5));
  CHECK_THROWS(FuchsianGroup(3, 6));
  const FuchsianGroup g(5, 8);
  std::vector<Label> word;
  for (int i = 0; i <= g.radius_cap(); ++i) word.push_back(static_cast<Label>(i % 2 == 0 ? 0 : 2));
  CHECK_THROWS_AS(g.from_letters(word), std::overflow_error);
}
