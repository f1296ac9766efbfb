#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>

namespace hyperwalk {

/// 128-bit value produced by the keyed hash. Used both as a canonical vertex
/// digest and as raw PRF output.
struct Digest128 {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  friend constexpr bool operator==(const Digest128&, const Digest128&) = default;
  friend constexpr auto operator<=>(const Digest128&, const Digest128&) = default;

  std::array<std::byte, 16> bytes() const;
  std::string hex() const;
};

struct DigestHash {
  std::size_t operator()(const Digest128& d) const noexcept {
    return static_cast<std::size_t>(d.lo ^ (d.hi * 0x9E3779B97F4A7C15ULL));
  }
};

using Key128 = std::array<std::uint8_t, 16>;

/// SipHash-2-4 with 128-bit output (libsodium `crypto_shorthash_siphashx24`).
Digest128 siphash128(const Key128& key, std::span<const std::byte> message);

/// Keyed hash of a short list of words; convenient for key derivation.
Digest128 siphash128_words(const Key128& key, std::span<const std::uint64_t> words);

/// Derives a 128-bit key from a domain tag and up to three integers.
Key128 derive_key(std::uint64_t domain, std::uint64_t a, std::uint64_t b = 0,
                  std::uint64_t c = 0);

/// Maps 52 bits of a digest to a double in (0, 1), never hitting either end.
inline double open_unit_interval(const Digest128& d) {
  // k + 1/2 and the product are both exact, so the result lies in
  // [2^-53, 1 - 2^-53]. With 53 bits the top value would round to 1.
  return (static_cast<double>(d.hi >> 12) + 0.5) * 0x1.0p-52;
}

/// Domain tags keep independent uses of the hash apart.
namespace domain {
inline constexpr std::uint64_t kVertex = 0x7665727465780001ULL;
inline constexpr std::uint64_t kEdge = 0x6564676500000002ULL;
inline constexpr std::uint64_t kEnvironmentSeed = 0x656e760000000003ULL;
inline constexpr std::uint64_t kStream = 0x7374726d00000004ULL;
inline constexpr std::uint64_t kFingerprint = 0x66707200000005ULL;
}  // namespace domain

/// Fixed key used for canonical vertex digests (independent of any seed).
const Key128& vertex_digest_key();

}  // namespace hyperwalk
