#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "hyperwalk/backend.hpp"

namespace hyperwalk {

/// Finite-horizon proxy for the boundary limit of a trajectory: its position
/// at step N. Gromov products between samples are only comparable at equal N.
template <CayleyBackend B>
struct BoundarySample {
  std::uint64_t trajectory = 0;
  typename B::Vertex anchor;
  typename B::BoundaryPoint point;
  int horizon = 0;
};

template <CayleyBackend B>
BoundarySample<B> make_boundary_sample(const B& backend, std::uint64_t trajectory,
                                       const typename B::Vertex& anchor, int horizon) {
  return {trajectory, anchor, backend.boundary_point(anchor), horizon};
}

/// (anchor1 | anchor2) over the identity.
template <CayleyBackend B>
double boundary_gromov_product(const B& backend, const BoundarySample<B>& a,
                               const BoundarySample<B>& b) {
  if (a.horizon != b.horizon) {
    throw std::invalid_argument("boundary samples have different horizons");
  }
  return backend.boundary_product(a.point, b.point);
}

/// Quasi-metric proxy rho = exp(-(xi | xi')).
template <CayleyBackend B>
double rho_proxy(const B& backend, const BoundarySample<B>& a, const BoundarySample<B>& b) {
  return std::exp(-boundary_gromov_product(backend, a, b));
}

/// xi in S(x, R) iff (xi | x) > |x| - R, with (xi | x) taken at the anchor.
template <CayleyBackend B>
bool shadow_membership(const B& backend, const typename B::Vertex& x, double radius,
                       const BoundarySample<B>& sample) {
  if (!(radius > 0.0)) throw std::invalid_argument("shadow radius must be positive");
  const auto px = backend.boundary_point(x);
  return backend.boundary_product(sample.point, px) > backend.norm(x) - radius;
}

}  // namespace hyperwalk
