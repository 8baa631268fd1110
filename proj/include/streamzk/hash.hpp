#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>

#include "streamzk/field.hpp"

namespace streamzk {

using Digest = std::array<uint8_t, 32>;

// Incremental SHA-256 (OpenSSL EVP).
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(std::span<const uint8_t> bytes);
  Sha256& update(std::string_view text);
  Sha256& update_u64(uint64_t v);
  Digest finish();

  static Digest hash(std::span<const uint8_t> bytes);

 private:
  struct Ctx;
  std::unique_ptr<Ctx> ctx_;
};

std::string to_hex(std::span<const uint8_t> bytes);

// Counter-mode SHA-256 generator. Deterministic in its seed; used for SRS
// trapdoors, blinders and test vectors.
class HashDrbg {
 public:
  explicit HashDrbg(std::string_view seed);
  HashDrbg(std::string_view domain, uint64_t seed);

  void fill(std::span<uint8_t> out);
  uint64_t next_u64();
  Fr next_field();

  // UniformRandomBitGenerator interface.
  using result_type = uint64_t;
  static constexpr uint64_t min() { return 0; }
  static constexpr uint64_t max() { return ~0ULL; }
  uint64_t operator()() { return next_u64(); }

 private:
  void refill();

  Digest key_{};
  uint64_t counter_ = 0;
  Digest block_{};
  size_t used_ = 32;
};

}  // namespace streamzk
