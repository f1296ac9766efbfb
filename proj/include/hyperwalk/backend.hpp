#pragma once

#include <concepts>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hyperwalk/free_group.hpp"
#include "hyperwalk/fuchsian.hpp"

namespace hyperwalk {

/// What the environment, walker and estimators need from a Cayley graph.
template <typename B>
concept CayleyBackend = requires(const B& b, const typename B::Vertex& v, Label s) {
  { b.degree() } -> std::convertible_to<int>;
  { b.identity() } -> std::same_as<typename B::Vertex>;
  { b.multiply(v, s) } -> std::same_as<typename B::Vertex>;
  { b.multiply(v, s, v.digest()) } -> std::same_as<typename B::Vertex>;
  { b.left_multiply(v, v) } -> std::same_as<typename B::Vertex>;
  { b.inverse(v) } -> std::same_as<typename B::Vertex>;
  { b.inverse(s) } -> std::same_as<Label>;
  { b.neighbor_digest(v, s) } -> std::same_as<Digest128>;
  { b.word_distance(v, v) } -> std::convertible_to<int>;
  { b.dist(v, v) } -> std::convertible_to<double>;
  { b.norm(v) } -> std::convertible_to<double>;
  { b.boundary_point(v) } -> std::same_as<typename B::BoundaryPoint>;
  { b.to_string(v) } -> std::convertible_to<std::string>;
  { v.digest() } -> std::convertible_to<Digest128>;
};

static_assert(CayleyBackend<FreeGroup>);
static_assert(CayleyBackend<FuchsianGroup>);

using AnyBackend = std::variant<FreeGroup, FuchsianGroup>;

/// Parses "free:k" or "fuchsian:P,Q". Throws std::invalid_argument.
AnyBackend make_backend(std::string_view spec);

std::string backend_spec(const AnyBackend& backend);

}  // namespace hyperwalk
