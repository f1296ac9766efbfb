#include "hyperwalk/fuchsian.hpp"

#include <cfloat>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hyperwalk {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++r;
  }
  // Deterministic witness set for all 64-bit integers.
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    u64 x = pow_mod(a % n, d, n);
    if (a % n == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<u64> odd_prime_factors(u64 n) {
  std::vector<u64> out;
  while (n % 2 == 0) n /= 2;
  for (u64 f = 3; f * f <= n; f += 2) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// Primes p < 2^61 with p = 1 mod 2m, and the image of 2cos(pi/m) as
/// zeta + zeta^{-1} for a primitive 2m-th root of unity zeta mod p.
std::array<FuchsianGroup::Modulus, 2> find_moduli(int m) {
  const u64 step = 2 * static_cast<u64>(m);
  const auto odd = odd_prime_factors(static_cast<u64>(m));
  std::array<FuchsianGroup::Modulus, 2> out{};
  std::size_t found = 0;
  u64 p = ((1ULL << 61) - 1) / step * step + 1;
  for (; found < out.size() && p > step; p -= step) {
    if (!is_prime(p)) continue;
    for (u64 g = 2; g < 1000; ++g) {
      const u64 zeta = pow_mod(g, (p - 1) / step, p);
      if (pow_mod(zeta, static_cast<u64>(m), p) != p - 1) continue;
      bool primitive = true;
      for (u64 q : odd) {
        if (pow_mod(zeta, step / q, p) == 1) primitive = false;
      }
      if (!primitive) continue;
      const u64 zeta_inv = pow_mod(zeta, p - 2, p);
      out[found++] = {p, (zeta + zeta_inv) % p};
      break;
    }
  }
  if (found != out.size()) throw std::runtime_error("no suitable fingerprint primes");
  return out;
}

}  // namespace

long double minkowski(const HyperboloidPoint& x, const HyperboloidPoint& y) {
  return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

FuchsianGroup::FuchsianGroup(int sides, int tiles_per_vertex)
    : sides_(sides),
      tiles_per_vertex_(tiles_per_vertex),
      coxeter_([&] {
        if (sides < 3 || tiles_per_vertex < 3) {
          throw std::invalid_argument("fuchsian:P,Q needs P >= 3 and Q >= 3");
        }
        if (sides * tiles_per_vertex <= 2 * (sides + tiles_per_vertex)) {
          throw std::invalid_argument("fuchsian:P,Q needs 1/P + 1/Q < 1/2 (hyperbolic tiling)");
        }
        if (tiles_per_vertex % 2 != 0) {
          throw std::invalid_argument(
              "fuchsian:P,Q needs Q even (side reflections must generate the tiling)");
        }
        return CoxeterPolygon(sides, tiles_per_vertex / 2);
      }()),
      warnings_(std::make_shared<std::atomic<std::uint64_t>>(0)) {
  const long double pi = std::numbers::pi_v<long double>;
  // Inradius of the regular P-gon with interior angle 2*pi/Q.
  const long double inradius =
      std::acosh(std::cos(pi / tiles_per_vertex_) / std::sin(pi / sides_));
  for (int i = 0; i < sides_; ++i) {
    const long double theta = 2 * pi * i / sides_;
    normals_.push_back({std::sinh(inradius), std::cosh(inradius) * std::cos(theta),
                        std::cosh(inradius) * std::sin(theta)});
  }
  const HyperboloidPoint neighbour = point(std::vector<Label>{0});
  edge_length_ = std::acosh(neighbour[0]);
  const long double log_max = std::log(LDBL_MAX);
  radius_cap_ = static_cast<int>(std::floor(log_max / (2 * edge_length_))) - 1;
  moduli_ = find_moduli(tiles_per_vertex_ / 2);
}

double FuchsianGroup::hyperbolicity() const { return std::numbers::ln2; }

double FuchsianGroup::gromov_resolution() const {
  // Relative rounding of the Minkowski product grows like exp(2 * product).
  return 0.5 * std::log(1.0L / LDBL_EPSILON) - 2.0;
}

std::string FuchsianGroup::spec() const {
  return "fuchsian:" + std::to_string(sides_) + "," + std::to_string(tiles_per_vertex_);
}

void FuchsianGroup::apply_letter(std::vector<std::uint64_t>& fp, Label s) const {
  const auto n = static_cast<std::size_t>(sides_);
  for (std::size_t b = 0; b < moduli_.size(); ++b) {
    const u64 p = moduli_[b].prime;
    u64* f = fp.data() + b * n;
    const u64 fs = f[s];
    const u64 adjacent_term = mul_mod(moduli_[b].lambda, fs, p);
    const u64 far_term = (2 * fs) % p;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == s) continue;
      const u64 add = coxeter_.adjacent(static_cast<int>(j), s) ? adjacent_term : far_term;
      f[j] = (f[j] + add) % p;
    }
    f[s] = (fs == 0) ? 0 : p - fs;
  }
}

Digest128 FuchsianGroup::fingerprint_digest(const std::vector<std::uint64_t>& fp) const {
  static const Key128 key = derive_key(domain::kFingerprint, 0);
  return siphash128_words(key, fp);
}

FuchsianGroup::Vertex FuchsianGroup::make_vertex(std::vector<Label> word,
                                                 std::vector<std::uint64_t> fp) const {
  const Digest128 digest = fingerprint_digest(fp);
  return make_vertex(std::move(word), std::move(fp), digest);
}

FuchsianGroup::Vertex FuchsianGroup::make_vertex(std::vector<Label> word,
                                                 std::vector<std::uint64_t> fp,
                                                 const Digest128& digest) const {
  if (static_cast<int>(word.size()) > radius_cap_) {
    throw std::overflow_error("word length exceeds the radius cap of " + spec() + " (" +
                              std::to_string(radius_cap_) + ")");
  }
  Vertex v;
  v.digest_ = digest;
  v.word_ = std::move(word);
  v.fingerprint_ = std::move(fp);
  return v;
}

FuchsianGroup::Vertex FuchsianGroup::identity() const {
  return make_vertex({}, std::vector<std::uint64_t>(moduli_.size() * sides_, 1));
}

FuchsianGroup::Vertex FuchsianGroup::multiply(const Vertex& v, Label s) const {
  if (s >= sides_) throw std::out_of_range("generator label out of range");
  std::vector<Label> word = v.word_;
  coxeter_.multiply_right(word, s);
  std::vector<std::uint64_t> fp = v.fingerprint_;
  apply_letter(fp, s);
  return make_vertex(std::move(word), std::move(fp));
}

FuchsianGroup::Vertex FuchsianGroup::multiply(const Vertex& v, Label s,
                                              const Digest128& digest) const {
  if (s >= sides_) throw std::out_of_range("generator label out of range");
  std::vector<Label> word = v.word_;
  coxeter_.multiply_right(word, s);
  std::vector<std::uint64_t> fp = v.fingerprint_;
  apply_letter(fp, s);
  return make_vertex(std::move(word), std::move(fp), digest);
}

Digest128 FuchsianGroup::neighbor_digest(const Vertex& v, Label s) const {
  std::vector<std::uint64_t> fp = v.fingerprint_;
  apply_letter(fp, s);
  return fingerprint_digest(fp);
}

std::vector<std::pair<FuchsianGroup::Vertex, Label>> FuchsianGroup::neighbors(
    const Vertex& v) const {
  std::vector<std::pair<Vertex, Label>> out;
  out.reserve(static_cast<std::size_t>(sides_));
  for (int s = 0; s < sides_; ++s) {
    out.emplace_back(multiply(v, static_cast<Label>(s)), static_cast<Label>(s));
  }
  return out;
}

FuchsianGroup::Vertex FuchsianGroup::left_multiply(const Vertex& g, const Vertex& v) const {
  std::vector<Label> word = v.word_;
  for (auto it = g.word_.rbegin(); it != g.word_.rend(); ++it) coxeter_.multiply_left(*it, word);
  std::vector<std::uint64_t> fp = g.fingerprint_;
  for (Label s : v.word_) apply_letter(fp, s);
  return make_vertex(std::move(word), std::move(fp));
}

FuchsianGroup::Vertex FuchsianGroup::inverse(const Vertex& v) const {
  return from_letters(std::vector<Label>(v.word_.rbegin(), v.word_.rend()));
}

FuchsianGroup::Vertex FuchsianGroup::from_letters(const std::vector<Label>& word) const {
  std::vector<Label> reduced;
  std::vector<std::uint64_t> fp(moduli_.size() * sides_, 1);
  for (Label s : word) {
    if (s >= sides_) throw std::out_of_range("generator label out of range");
    coxeter_.multiply_right(reduced, s);
    apply_letter(fp, s);
  }
  return make_vertex(std::move(reduced), std::move(fp));
}

int FuchsianGroup::word_distance(const Vertex& u, const Vertex& v) const {
  std::vector<Label> word = v.word_;
  for (Label s : u.word_) coxeter_.multiply_left(s, word);
  return static_cast<int>(word.size());
}

HyperboloidPoint FuchsianGroup::point(const std::vector<Label>& word) const {
  HyperboloidPoint x{1.0L, 0.0L, 0.0L};
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const HyperboloidPoint& n = normals_[*it];
    const long double c = 2 * minkowski(x, n);
    x[0] -= c * n[0];
    x[1] -= c * n[1];
    x[2] -= c * n[2];
  }
  return x;
}

double FuchsianGroup::arccosh_checked(long double x) const {
  if (x < 1.0L) {
    if (x < 1.0L - 1e-9L) warnings_->fetch_add(1, std::memory_order_relaxed);
    return 0.0;
  }
  return static_cast<double>(std::acosh(x));
}

double FuchsianGroup::dist(const Vertex& u, const Vertex& v) const {
  if (u == v) return 0.0;
  std::vector<Label> word = v.word_;
  for (Label s : u.word_) coxeter_.multiply_left(s, word);
  return arccosh_checked(point(word)[0]);
}

double FuchsianGroup::norm(const Vertex& v) const { return arccosh_checked(point(v)[0]); }

double FuchsianGroup::gromov_product(const Vertex& x, const Vertex& y, const Vertex& base) const {
  return 0.5 * (dist(x, base) + dist(y, base) - dist(x, y));
}

int FuchsianGroup::adjacency_label(const Vertex& u, const Vertex& v) const {
  for (int s = 0; s < sides_; ++s) {
    std::vector<std::uint64_t> fp = u.fingerprint_;
    apply_letter(fp, static_cast<Label>(s));
    if (fp == v.fingerprint_) return s;
  }
  return -1;
}

double FuchsianGroup::boundary_norm(const BoundaryPoint& p) const { return arccosh_checked(p[0]); }

double FuchsianGroup::boundary_product(const BoundaryPoint& a, const BoundaryPoint& b) const {
  const long double c = -minkowski(a, b);
  const long double da = std::acosh(std::max(a[0], 1.0L));
  const long double db = std::acosh(std::max(b[0], 1.0L));
  const long double dab = std::acosh(std::max(c, 1.0L));
  return static_cast<double>(0.5L * (da + db - dab));
}

std::string FuchsianGroup::to_string(const Vertex& v) const {
  if (v.word_.empty()) return "e";
  std::ostringstream os;
  for (std::size_t i = 0; i < v.word_.size(); ++i) {
    if (i) os << '.';
    os << static_cast<int>(v.word_[i]);
  }
  return os.str();
}

FuchsianGroup::Vertex FuchsianGroup::parse(std::string_view text) const {
  std::vector<Label> word;
  if (text == "e" || text.empty()) return identity();
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto dot = text.find('.', pos);
    const auto token = text.substr(pos, dot == std::string_view::npos ? text.npos : dot - pos);
    int value = 0;
    if (token.empty()) throw std::invalid_argument("empty letter in word");
    for (char c : token) {
      if (c < '0' || c > '9') throw std::invalid_argument("bad letter in word: " + std::string(text));
      value = value * 10 + (c - '0');
    }
    if (value >= sides_) throw std::invalid_argument("letter out of range in word");
    word.push_back(static_cast<Label>(value));
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return from_letters(word);
}

std::uint64_t FuchsianGroup::numeric_warnings() const { return warnings_->load(); }

}  // namespace hyperwalk
