#include "hyperwalk/free_group.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace hyperwalk {

namespace {

Digest128 chain_digest(const Digest128& parent, Label s) {
  const std::uint64_t words[3] = {parent.lo, parent.hi, static_cast<std::uint64_t>(s)};
  return siphash128_words(vertex_digest_key(), words);
}

}  // namespace

const Digest128& FreeVertex::root_digest() {
  static const Digest128 d = [] {
    const std::uint64_t words[1] = {0x726f6f74ULL};
    return siphash128_words(vertex_digest_key(), words);
  }();
  return d;
}

std::vector<Label> FreeVertex::letters() const {
  std::vector<Label> out(length());
  const Node* n = node_.get();
  for (auto i = out.size(); i-- > 0;) {
    out[i] = n->letter;
    n = n->parent.get();
  }
  return out;
}

std::uint32_t FreeVertex::common_prefix_length(const std::vector<Digest128>& prefix_digests) const {
  const auto limit = static_cast<std::uint32_t>(prefix_digests.size() - 1);
  const Node* n = node_.get();
  std::uint32_t depth = length();
  while (depth > limit) {
    n = n->parent.get();
    --depth;
  }
  while (depth > 0 && !(n->digest == prefix_digests[depth])) {
    n = n->parent.get();
    --depth;
  }
  return depth;
}

bool operator==(const FreeVertex& a, const FreeVertex& b) {
  if (a.length() != b.length() || a.digest() != b.digest()) return false;
  const FreeVertex::Node* x = a.node_.get();
  const FreeVertex::Node* y = b.node_.get();
  while (x != y) {
    if (x->letter != y->letter) return false;
    x = x->parent.get();
    y = y->parent.get();
  }
  return true;
}

FreeGroup::FreeGroup(int rank) : rank_(rank) {
  if (rank < 2 || rank > 32) {
    throw std::invalid_argument("free group rank must lie in [2, 32] (nonelementary)");
  }
}

std::string FreeGroup::spec() const { return "free:" + std::to_string(rank_); }

FreeGroup::Vertex FreeGroup::extend(const Vertex& v, Label s) const {
  auto node = std::make_shared<const Vertex::Node>(
      Vertex::Node{v.node_, chain_digest(v.digest(), s), v.length() + 1, s});
  return Vertex(std::move(node));
}

FreeGroup::Vertex FreeGroup::multiply(const Vertex& v, Label s) const {
  if (s >= degree()) throw std::out_of_range("generator label out of range");
  if (!v.is_identity() && v.last() == inverse(s)) return v.prefix();
  return extend(v, s);
}

FreeGroup::Vertex FreeGroup::multiply(const Vertex& v, Label s, const Digest128& digest) const {
  if (s >= degree()) throw std::out_of_range("generator label out of range");
  if (!v.is_identity() && v.last() == inverse(s)) return v.prefix();
  auto node = std::make_shared<const Vertex::Node>(Vertex::Node{v.node_, digest, v.length() + 1, s});
  return Vertex(std::move(node));
}

Digest128 FreeGroup::neighbor_digest(const Vertex& v, Label s) const {
  if (!v.is_identity() && v.last() == inverse(s)) return v.prefix().digest();
  return chain_digest(v.digest(), s);
}

std::vector<std::pair<FreeGroup::Vertex, Label>> FreeGroup::neighbors(const Vertex& v) const {
  std::vector<std::pair<Vertex, Label>> out;
  out.reserve(static_cast<std::size_t>(degree()));
  for (int s = 0; s < degree(); ++s) {
    out.emplace_back(multiply(v, static_cast<Label>(s)), static_cast<Label>(s));
  }
  return out;
}

FreeGroup::Vertex FreeGroup::left_multiply(const Vertex& g, const Vertex& v) const {
  Vertex out = g;
  for (Label s : v.letters()) out = multiply(out, s);
  return out;
}

FreeGroup::Vertex FreeGroup::inverse(const Vertex& v) const {
  Vertex out;
  const auto w = v.letters();
  for (auto it = w.rbegin(); it != w.rend(); ++it) out = multiply(out, inverse(*it));
  return out;
}

FreeGroup::Vertex FreeGroup::from_letters(const std::vector<Label>& word) const {
  Vertex out;
  for (Label s : word) out = multiply(out, s);
  return out;
}

int FreeGroup::word_distance(const Vertex& u, const Vertex& v) const {
  const auto a = u.letters();
  const auto b = v.letters();
  const auto n = std::min(a.size(), b.size());
  std::size_t k = 0;
  while (k < n && a[k] == b[k]) ++k;
  return static_cast<int>(a.size() + b.size() - 2 * k);
}

double FreeGroup::gromov_product(const Vertex& x, const Vertex& y, const Vertex& base) const {
  return 0.5 * (dist(x, base) + dist(y, base) - dist(x, y));
}

int FreeGroup::adjacency_label(const Vertex& u, const Vertex& v) const {
  if (v.length() == u.length() + 1 && v.prefix() == u) return v.last();
  if (u.length() == v.length() + 1 && u.prefix() == v) return inverse(u.last());
  return -1;
}

double FreeGroup::boundary_product(const BoundaryPoint& a, const BoundaryPoint& b) const {
  const auto n = std::min(a.size(), b.size());
  std::size_t k = 0;
  while (k < n && a[k] == b[k]) ++k;
  return static_cast<double>(k);
}

std::string FreeGroup::label_name(Label s) const {
  const char base = static_cast<char>('a' + s / 2);
  return std::string(1, (s % 2 == 0) ? base : static_cast<char>(std::toupper(base)));
}

std::string FreeGroup::to_string(const Vertex& v) const {
  std::string out;
  for (Label s : v.letters()) out += label_name(s);
  return out;
}

FreeGroup::Vertex FreeGroup::parse(std::string_view word) const {
  Vertex out;
  for (char c : word) {
    const bool inv = std::isupper(static_cast<unsigned char>(c)) != 0;
    const int gen = std::tolower(static_cast<unsigned char>(c)) - 'a';
    if (gen < 0 || gen >= rank_) {
      throw std::invalid_argument("letter '" + std::string(1, c) + "' is not a generator of " +
                                  spec());
    }
    out = multiply(out, static_cast<Label>(2 * gen + (inv ? 1 : 0)));
  }
  return out;
}

}  // namespace hyperwalk
