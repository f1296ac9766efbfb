#include "hyperwalk/digest.hpp"

#include <sodium.h>

#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace hyperwalk {

namespace {

void ensure_sodium() {
  static const int status = sodium_init();
  if (status < 0) throw std::runtime_error("libsodium initialisation failed");
}

}  // namespace

std::array<std::byte, 16> Digest128::bytes() const {
  std::array<std::byte, 16> out{};
  std::memcpy(out.data(), &lo, 8);
  std::memcpy(out.data() + 8, &hi, 8);
  return out;
}

std::string Digest128::hex() const {
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(hi),
                static_cast<unsigned long long>(lo));
  return buf;
}

Digest128 siphash128(const Key128& key, std::span<const std::byte> message) {
  static_assert(crypto_shorthash_siphashx24_BYTES == 16);
  static_assert(crypto_shorthash_siphashx24_KEYBYTES == 16);
  ensure_sodium();
  unsigned char out[16];
  crypto_shorthash_siphashx24(out, reinterpret_cast<const unsigned char*>(message.data()),
                              message.size(), key.data());
  Digest128 d;
  std::memcpy(&d.lo, out, 8);
  std::memcpy(&d.hi, out + 8, 8);
  return d;
}

Digest128 siphash128_words(const Key128& key, std::span<const std::uint64_t> words) {
  return siphash128(key, std::as_bytes(words));
}

Key128 derive_key(std::uint64_t domain, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  static const Key128 kDerivationKey = {0x68, 0x79, 0x70, 0x65, 0x72, 0x77, 0x61, 0x6c,
                                        0x6b, 0x2d, 0x6b, 0x64, 0x66, 0x2d, 0x76, 0x31};
  const std::uint64_t words[4] = {domain, a, b, c};
  const Digest128 d = siphash128_words(kDerivationKey, words);
  Key128 key{};
  std::memcpy(key.data(), &d.lo, 8);
  std::memcpy(key.data() + 8, &d.hi, 8);
  return key;
}

const Key128& vertex_digest_key() {
  static const Key128 key = derive_key(domain::kVertex, 0);
  return key;
}

}  // namespace hyperwalk
