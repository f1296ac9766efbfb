#pragma once

#include <cstdint>
#include <vector>

namespace hyperwalk::oracles {

// Reference values computed by separate arithmetic from the estimators. A
// regular tree of degree q+1 is the Cayley graph of F_k when q = 2k - 1.

/// Drift (q-1)/(q+1) of simple random walk on the (q+1)-regular tree.
double tree_srw_speed(int q);

/// Drift of the distance chain, found by solving its stationary increments
/// away from the root; must agree with tree_srw_speed.
double tree_srw_speed_birth_death(int q);

/// Entropy ((q-1)/(q+1)) log q of simple random walk on the (q+1)-regular tree.
double tree_srw_entropy(int q);

/// Law of |x_n| for simple random walk on the (q+1)-regular tree started at
/// the root, by a transfer matrix on the distance. Index k holds P(|x_n| = k).
std::vector<double> tree_distance_law(int q, int n);

/// Number of vertices at distance k from the root.
double tree_sphere_size(int q, int k);

/// p^n(1, 1) on the tree.
double tree_return_probability(int q, int n);

/// H_n = E[-log p^n(1, x_n)] on the tree, using that p^n(1, v) depends only on |v|.
double tree_path_entropy(int q, int n);

/// H_n / n and H_n - H_{n-1}: the expectations of the plug-in and increment
/// entropy estimators at step n.
double tree_plug_in_entropy(int q, int n);
double tree_increment_entropy(int q, int n);

/// Smallest fixed point of the Binomial(m, p) generating function by monotone
/// iteration; returns 1 - fixed point (0 when subcritical or critical).
double gw_survival(double p, int offspring_max, double tolerance = 1e-12);

/// P(the open cluster of the root reaches distance `depth`) on the
/// (m+1)-regular tree: root has m+1 potential children, others m.
double tree_cluster_reaches(double p, int degree, int depth);

/// P(root cluster is infinite) on the degree-regular tree.
double tree_cluster_survival(double p, int degree);

/// E[deg(root) | cluster reaches depth] on the degree-regular tree.
double tree_conditioned_mean_degree(double p, int degree, int depth);

/// Law of the root degree (index k = degree k, k = 0..degree) after
/// conditioning on deg >= 1, under mu (weighted = false) or the
/// degree-biased mu' (weighted = true); and the law of deg(x_1) after one
/// walk step under the same starting law. Computed by enumerating all open
/// sets of the root star and the star of x_1.
struct DegreeLaws {
  std::vector<double> root;
  std::vector<double> after_step;
};
DegreeLaws tree_degree_laws_after_step(double p, int degree, bool weighted);

/// Distance between adjacent tile centres of the {P,Q} tiling (P-gons with
/// interior angle 2pi/Q): twice the inradius from the right triangle with
/// angles pi/P, pi/Q, pi/2.
double fuchsian_edge_length(int P, int Q);

/// Frequencies of +1 increments of the distance chain away from the root,
/// simulated directly as a +-1 chain with its own generator.
double birth_death_up_frequency(int q, std::uint64_t steps, std::uint64_t seed);

}  // namespace hyperwalk::oracles
