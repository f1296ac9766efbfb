#include <cmath>
#include <numeric>

#include "doctest.h"
#include "hyperwalk/oracles.hpp"

using namespace hyperwalk;

TEST_CASE("tree drift: closed form, birth-death chain and simulation agree") {
  for (int q : {2, 3, 5}) {
    CHECK(oracles::tree_srw_speed_birth_death(q) ==
          doctest::Approx(oracles::tree_srw_speed(q)).epsilon(1e-12));
  }
  const double up = oracles::birth_death_up_frequency(2, 2'000'000, 7);
  CHECK(2.0 * up - 1.0 == doctest::Approx(oracles::tree_srw_speed(2)).epsilon(0.01));
}

TEST_CASE("distance law is a probability vector with the right parity") {
  const auto law = oracles::tree_distance_law(2, 11);
  CHECK(std::accumulate(law.begin(), law.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t k = 0; k < law.size(); k += 2) CHECK(law[k] == 0.0);
  CHECK(law[11] == doctest::Approx(std::pow(2.0 / 3.0, 10)));
}

TEST_CASE("entropy expectations converge to the closed form from above") {
  const double h = oracles::tree_srw_entropy(3);
  CHECK(h == doctest::Approx(0.5 * std::log(3.0)));
  CHECK(oracles::tree_srw_entropy(2) == doctest::Approx(std::log(2.0) / 3.0));
  double prev = 10.0;
  for (int n : {10, 20, 40}) {
    const double inc = oracles::tree_increment_entropy(3, n);
    CHECK(inc > h);
    CHECK(inc < prev);
    prev = inc;
  }
  CHECK(oracles::tree_plug_in_entropy(3, 40) > oracles::tree_increment_entropy(3, 40));
}

TEST_CASE("Galton-Watson survival") {
  CHECK(oracles::gw_survival(0.3, 3) == 0.0);  // mean 0.9 subcritical
  CHECK(oracles::gw_survival(1.0, 3) == doctest::Approx(1.0));
  // Binomial(2, p): extinction q = ((1-p)/p)^2.
  CHECK(oracles::gw_survival(0.8, 2) == doctest::Approx(1.0 - 0.0625).epsilon(1e-9));
  CHECK(oracles::tree_cluster_reaches(0.7, 4, 60) ==
        doctest::Approx(oracles::tree_cluster_survival(0.7, 4)).epsilon(1e-9));
}

TEST_CASE("edge length of the {P,Q} tiling") {
  // {4,5}-type check through the right triangle: cosh(half edge) = cos(pi/Q)/sin(pi/P).
  const double e = oracles::fuchsian_edge_length(5, 4);
  CHECK(std::cosh(e / 2) == doctest::Approx(std::cos(M_PI / 4) / std::sin(M_PI / 5)));
}
