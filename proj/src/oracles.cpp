#include "hyperwalk/oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace hyperwalk::oracles {

namespace {

void require_branching(int q) {
  if (q < 2) throw std::invalid_argument("tree oracle needs branching q >= 2");
}

long double binomial_pmf(int n, int k, long double p) {
  long double c = 1.0L;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c * std::pow(p, k) * std::pow(1.0L - p, n - k);
}

}  // namespace

double tree_srw_speed(int q) {
  require_branching(q);
  return static_cast<double>(q - 1) / (q + 1);
}

double tree_srw_speed_birth_death(int q) {
  require_branching(q);
  // Away from the root the distance chain moves up with probability
  // q/(q+1); it is transient so the root is visited finitely often and the
  // drift equals the off-root mean increment.
  const long double up = static_cast<long double>(q) / (q + 1);
  return static_cast<double>(up * 1.0L + (1.0L - up) * -1.0L);
}

double tree_srw_entropy(int q) {
  require_branching(q);
  return static_cast<double>(q - 1) / (q + 1) * std::log(static_cast<double>(q));
}

std::vector<double> tree_distance_law(int q, int n) {
  require_branching(q);
  std::vector<long double> law(static_cast<std::size_t>(n) + 2, 0.0L);
  law[0] = 1.0L;
  const long double up = static_cast<long double>(q) / (q + 1);
  for (int step = 0; step < n; ++step) {
    std::vector<long double> next(law.size(), 0.0L);
    next[1] += law[0];
    for (std::size_t k = 1; k + 1 < law.size(); ++k) {
      next[k + 1] += law[k] * up;
      next[k - 1] += law[k] * (1.0L - up);
    }
    law = std::move(next);
  }
  law.pop_back();
  return {law.begin(), law.end()};
}

double tree_sphere_size(int q, int k) {
  if (k == 0) return 1.0;
  return (q + 1) * std::pow(static_cast<double>(q), k - 1);
}

double tree_return_probability(int q, int n) { return tree_distance_law(q, n)[0]; }

double tree_path_entropy(int q, int n) {
  const auto law = tree_distance_law(q, n);
  long double h = 0.0L;
  for (std::size_t k = 0; k < law.size(); ++k) {
    if (law[k] <= 0.0) continue;
    const long double per_vertex =
        static_cast<long double>(law[k]) / tree_sphere_size(q, static_cast<int>(k));
    h -= law[k] * std::log(per_vertex);
  }
  return static_cast<double>(h);
}

double tree_plug_in_entropy(int q, int n) { return tree_path_entropy(q, n) / n; }

double tree_increment_entropy(int q, int n) {
  return tree_path_entropy(q, n) - tree_path_entropy(q, n - 1);
}

double gw_survival(double p, int offspring_max, double tolerance) {
  if (offspring_max * p <= 1.0) return 0.0;
  long double s = 0.0L;
  for (int it = 0; it < 1000000; ++it) {
    const long double next = std::pow(1.0L - p + p * s, offspring_max);
    if (std::abs(static_cast<double>(next - s)) < tolerance) {
      s = next;
      break;
    }
    s = next;
  }
  return static_cast<double>(1.0L - s);
}

double tree_cluster_reaches(double p, int degree, int depth) {
  if (depth <= 0) return 1.0;
  // e = P(a child's subtree does not reach relative depth j), j = depth - 1.
  long double e = 0.0L;
  for (int j = 1; j <= depth - 1; ++j) e = std::pow(1.0L - p + p * e, degree - 1);
  return static_cast<double>(1.0L - std::pow(1.0L - p + p * e, degree));
}

double tree_cluster_survival(double p, int degree) {
  const double child = gw_survival(p, degree - 1);
  return 1.0 - std::pow(1.0 - p * child, degree);
}

double tree_conditioned_mean_degree(double p, int degree, int depth) {
  long double e = 0.0L;
  for (int j = 1; j <= depth - 1; ++j) e = std::pow(1.0L - p + p * e, degree - 1);
  long double num = 0.0L, den = 0.0L;
  for (int k = 1; k <= degree; ++k) {
    const long double w = binomial_pmf(degree, k, p) * (1.0L - std::pow(e, k));
    num += k * w;
    den += w;
  }
  return static_cast<double>(num / den);
}

DegreeLaws tree_degree_laws_after_step(double p, int degree, bool weighted) {
  DegreeLaws out{std::vector<double>(degree + 1, 0.0), std::vector<double>(degree + 1, 0.0)};
  long double norm = 0.0L;
  const unsigned root_configs = 1U << degree;
  const unsigned far_configs = 1U << (degree - 1);
  for (unsigned a = 1; a < root_configs; ++a) {
    const int k = __builtin_popcount(a);
    long double w = std::pow(static_cast<long double>(p), k) *
                    std::pow(1.0L - p, degree - k);
    if (weighted) w *= k;
    norm += w;
    out.root[k] += static_cast<double>(w);
    // Step to each open neighbour with probability 1/k, then enumerate its
    // other degree-1 edges.
    for (unsigned b = 0; b < far_configs; ++b) {
      const int j = __builtin_popcount(b);
      const long double wb = std::pow(static_cast<long double>(p), j) *
                             std::pow(1.0L - p, degree - 1 - j);
      out.after_step[1 + j] += static_cast<double>(w * wb);
    }
  }
  for (auto& v : out.root) v /= static_cast<double>(norm);
  for (auto& v : out.after_step) v /= static_cast<double>(norm);
  return out;
}

double fuchsian_edge_length(int P, int Q) {
  if (P < 3 || Q < 3 || P * Q <= 2 * (P + Q)) {
    throw std::invalid_argument("fuchsian_edge_length needs 1/P + 1/Q < 1/2");
  }
  const long double pi = std::numbers::pi_v<long double>;
  const long double cosh_inradius = std::cos(pi / Q) / std::sin(pi / P);
  return static_cast<double>(2.0L * std::acosh(cosh_inradius));
}

double birth_death_up_frequency(int q, std::uint64_t steps, std::uint64_t seed) {
  require_branching(q);
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> pick(0, q);
  long long dist = 0;
  std::uint64_t moves = 0, ups = 0;
  for (std::uint64_t i = 0; i < steps; ++i) {
    if (dist == 0) {
      dist = 1;
      continue;
    }
    ++moves;
    if (pick(gen) != 0) {
      ++dist;
      ++ups;
    } else {
      --dist;
    }
  }
  return moves ? static_cast<double>(ups) / static_cast<double>(moves) : 0.0;
}

}  // namespace hyperwalk::oracles
