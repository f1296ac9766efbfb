#pragma once

#include <cstdint>
#include <limits>

#include "hyperwalk/digest.hpp"

namespace hyperwalk {

/// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stream identifiers. Each (master seed, replica, stream) triple owns an
/// independent counter-based generator.
namespace stream {
inline constexpr std::uint64_t kSpeedWalk = 1;
inline constexpr std::uint64_t kEntropyWalk = 2;
inline constexpr std::uint64_t kBoundaryWalk = 3;
inline constexpr std::uint64_t kStationarity = 4;
inline constexpr std::uint64_t kShadow = 5;
inline constexpr std::uint64_t kTest = 99;
}  // namespace stream

/// Counter-based generator: output n is mix64(key + n * gamma) with the key
/// derived from (master, replica, stream) through the keyed hash. No state is
/// shared between streams, so replicas can run in any order or in parallel.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  StreamRng(std::uint64_t master, std::uint64_t replica, std::uint64_t stream_id)
      : key_(derive(master, replica, stream_id)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix64(key_ + (++counter_) * kGamma); }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n) by Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::uint64_t counter() const { return counter_; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t derive(std::uint64_t master, std::uint64_t replica, std::uint64_t s) {
    const Key128 k = derive_key(domain::kStream, master, replica, s);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(k[i]) << (8 * i);
    return v;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace hyperwalk
