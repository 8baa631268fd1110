#pragma once

// BN254 G1: y^2 = x^3 + 3 over Fq, prime order r (cofactor 1), so Fr is both
// the scalar field of the group and the field of the proof system.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "streamzk/field.hpp"

namespace streamzk {

struct G1Affine {
  Fq x;
  Fq y;
  bool infinity = true;

  static G1Affine identity() { return G1Affine{}; }
  static G1Affine generator();
  bool on_curve() const;
  G1Affine operator-() const;
  bool operator==(const G1Affine& o) const;

  // 32 bytes: x little-endian, bit 255 = parity of y, bit 254 = infinity.
  std::array<uint8_t, 32> compress() const;
  static std::optional<G1Affine> decompress(std::span<const uint8_t> bytes);
};

struct G1 {
  Fq X;
  Fq Y = Fq::one();
  Fq Z;  // Z == 0 encodes the identity

  G1() = default;
  G1(const G1Affine& p);  // NOLINT(google-explicit-constructor)

  static G1 identity() { return G1(); }
  static G1 generator() { return G1(G1Affine::generator()); }

  bool is_identity() const { return Z.is_zero(); }
  G1 doubled() const;
  G1 operator+(const G1& o) const;
  G1& operator+=(const G1& o) { return *this = *this + o; }
  G1 add_mixed(const G1Affine& o) const;
  G1 operator-() const;
  G1 operator-(const G1& o) const { return *this + (-o); }
  G1 operator*(const Fr& k) const;
  bool operator==(const G1& o) const;
  bool operator!=(const G1& o) const { return !(*this == o); }

  G1Affine to_affine() const;
};

template <>
struct MeterKindOf<G1> {
  static constexpr ElemKind value = ElemKind::kGroup;
};
template <>
struct MeterKindOf<G1Affine> {
  static constexpr ElemKind value = ElemKind::kGroup;
};

// Normalizes with a single field inversion.
void batch_normalize(std::span<const G1> in, std::span<G1Affine> out);

// Deterministic hash-to-curve by try-and-increment; nobody knows its
// discrete log relative to the generator.
G1Affine hash_to_curve(std::string_view domain, std::span<const uint8_t> msg);

// sum_i scalars[i] * bases[i]. Bucket memory is O(n) group elements.
G1 msm(std::span<const Fr> scalars, std::span<const G1Affine> bases);

// Precomputed 8-bit windows of a fixed base.
class FixedBaseTable {
 public:
  explicit FixedBaseTable(const G1& base);
  G1 mul(const Fr& k) const;

 private:
  std::array<std::array<G1Affine, 255>, 32> windows_;
};

}  // namespace streamzk
