#pragma once

// Prime fields over 4x64-bit limbs in Montgomery form. Fr is the BN254 scalar
// field (the proof system's field), Fq is the BN254 base field used by the
// curve arithmetic only.

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "streamzk/meter.hpp"

namespace streamzk {

using u128 = unsigned __int128;
using Limbs = std::array<uint64_t, 4>;

namespace limbs {

constexpr bool geq(const Limbs& a, const Limbs& b) {
  for (int i = 3; i >= 0; --i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return true;
}

constexpr uint64_t sub_in_place(Limbs& a, const Limbs& b) {
  uint64_t borrow = 0;
  for (int i = 0; i < 4; ++i) {
    const u128 d = static_cast<u128>(a[i]) - b[i] - borrow;
    a[i] = static_cast<uint64_t>(d);
    borrow = static_cast<uint64_t>(d >> 64) & 1;
  }
  return borrow;
}

constexpr uint64_t add_in_place(Limbs& a, const Limbs& b) {
  uint64_t carry = 0;
  for (int i = 0; i < 4; ++i) {
    const u128 s = static_cast<u128>(a[i]) + b[i] + carry;
    a[i] = static_cast<uint64_t>(s);
    carry = static_cast<uint64_t>(s >> 64);
  }
  return carry;
}

constexpr Limbs shr(Limbs a, unsigned bits) {
  while (bits > 0) {
    const unsigned step = bits > 63 ? 63 : bits;
    for (int i = 0; i < 4; ++i) {
      a[i] = (a[i] >> step) | (i < 3 ? a[i + 1] << (64 - step) : 0);
    }
    bits -= step;
  }
  return a;
}

constexpr Limbs add_small(Limbs a, uint64_t v) {
  add_in_place(a, Limbs{v, 0, 0, 0});
  return a;
}

constexpr Limbs sub_small(Limbs a, uint64_t v) {
  sub_in_place(a, Limbs{v, 0, 0, 0});
  return a;
}

constexpr bool bit(const Limbs& a, unsigned i) { return (a[i / 64] >> (i % 64)) & 1; }

constexpr unsigned bit_length(const Limbs& a) {
  for (int i = 3; i >= 0; --i) {
    if (a[i] != 0) return 64 * i + 64 - static_cast<unsigned>(__builtin_clzll(a[i]));
  }
  return 0;
}

constexpr unsigned trailing_zeros(const Limbs& a) {
  for (int i = 0; i < 4; ++i) {
    if (a[i] != 0) return 64 * i + static_cast<unsigned>(__builtin_ctzll(a[i]));
  }
  return 256;
}

}  // namespace limbs

template <class Params>
class Fp {
 public:
  static constexpr Limbs kModulus = Params::kModulus;

 private:
  static constexpr uint64_t compute_inv() {
    uint64_t x = 1;
    for (int i = 0; i < 6; ++i) x *= 2 - kModulus[0] * x;
    return ~x + 1;  // -p^{-1} mod 2^64
  }
  static constexpr Limbs double_mod(Limbs a) {
    const uint64_t carry = limbs::add_in_place(a, a);
    if (carry != 0 || limbs::geq(a, kModulus)) limbs::sub_in_place(a, kModulus);
    return a;
  }
  static constexpr Limbs compute_r(unsigned doublings) {
    Limbs a{1, 0, 0, 0};
    for (unsigned i = 0; i < doublings; ++i) a = double_mod(a);
    return a;
  }

 public:
  static constexpr uint64_t kInv = compute_inv();
  static constexpr Limbs kR = compute_r(256);
  static constexpr Limbs kR2 = compute_r(512);
  static constexpr size_t kBytes = 32;

  constexpr Fp() : v_{0, 0, 0, 0} {}

  static constexpr Fp zero() { return Fp(); }
  static constexpr Fp one() { return from_raw(kR); }

  static constexpr Fp from_u64(uint64_t x) { return from_canonical(Limbs{x, 0, 0, 0}); }
  static Fp from_i64(int64_t x) { return x >= 0 ? from_u64(static_cast<uint64_t>(x)) : -from_u64(static_cast<uint64_t>(-(x + 1)) + 1); }

  // Montgomery-form limbs taken as is.
  static constexpr Fp from_raw(const Limbs& raw) {
    Fp r;
    r.v_ = raw;
    return r;
  }

  // Any 256-bit value, reduced mod p.
  static constexpr Fp from_canonical(Limbs x) {
    while (limbs::geq(x, kModulus)) limbs::sub_in_place(x, kModulus);
    Fp r;
    r.v_ = mont_mul(x, kR2);
    return r;
  }

  // Reduces 64 uniform bytes (little-endian) mod p; bias is below 2^-250.
  static Fp from_uniform_bytes(std::span<const uint8_t, 64> bytes) {
    Limbs lo{}, hi{};
    std::memcpy(lo.data(), bytes.data(), 32);
    std::memcpy(hi.data(), bytes.data() + 32, 32);
    return from_canonical(lo) + from_canonical(hi) * from_raw(kR2);
  }

  static std::optional<Fp> from_bytes(std::span<const uint8_t> bytes) {
    if (bytes.size() != kBytes) return std::nullopt;
    Limbs x{};
    std::memcpy(x.data(), bytes.data(), 32);
    if (limbs::geq(x, kModulus)) return std::nullopt;
    return from_canonical(x);
  }

  static Fp from_decimal(const std::string& s) {
    Fp r;
    const Fp ten = from_u64(10);
    for (char ch : s) r = r * ten + from_u64(static_cast<uint64_t>(ch - '0'));
    return r;
  }

  template <class Rng>
  static Fp random(Rng& rng) {
    const unsigned top = limbs::bit_length(kModulus) - 192;
    const uint64_t mask = top >= 64 ? ~0ULL : ((1ULL << top) - 1);
    for (;;) {
      Limbs x{rng(), rng(), rng(), rng() & mask};
      if (!limbs::geq(x, kModulus)) return from_canonical(x);
    }
  }

  constexpr Limbs to_canonical() const { return mont_mul(v_, Limbs{1, 0, 0, 0}); }
  constexpr const Limbs& raw() const { return v_; }

  void to_bytes(std::span<uint8_t, 32> out) const {
    const Limbs c = to_canonical();
    std::memcpy(out.data(), c.data(), 32);
  }
  std::array<uint8_t, 32> to_bytes() const {
    std::array<uint8_t, 32> out{};
    to_bytes(std::span<uint8_t, 32>(out));
    return out;
  }

  std::string to_decimal() const;

  constexpr bool is_zero() const { return (v_[0] | v_[1] | v_[2] | v_[3]) == 0; }
  constexpr bool operator==(const Fp& o) const { return v_ == o.v_; }
  constexpr bool operator!=(const Fp& o) const { return v_ != o.v_; }

  constexpr Fp operator+(const Fp& o) const {
    Fp r = *this;
    r += o;
    return r;
  }
  constexpr Fp& operator+=(const Fp& o) {
    const uint64_t carry = limbs::add_in_place(v_, o.v_);
    if (carry != 0 || limbs::geq(v_, kModulus)) limbs::sub_in_place(v_, kModulus);
    return *this;
  }
  constexpr Fp operator-(const Fp& o) const {
    Fp r = *this;
    r -= o;
    return r;
  }
  constexpr Fp& operator-=(const Fp& o) {
    if (limbs::sub_in_place(v_, o.v_) != 0) limbs::add_in_place(v_, kModulus);
    return *this;
  }
  constexpr Fp operator-() const {
    if (is_zero()) return *this;
    Fp r = from_raw(kModulus);
    limbs::sub_in_place(r.v_, v_);
    return r;
  }
  constexpr Fp operator*(const Fp& o) const { return from_raw(mont_mul(v_, o.v_)); }
  constexpr Fp& operator*=(const Fp& o) {
    v_ = mont_mul(v_, o.v_);
    return *this;
  }
  constexpr Fp square() const { return *this * *this; }
  constexpr Fp doubled() const { return *this + *this; }

  // Accumulates in raw limbs: GCC 11 at -O1+ miscompiles the equivalent loop
  // over an Fp local when the call initializes a function-local static.
  Fp pow(const Limbs& e) const {
    Limbs acc = kR;
    for (int i = static_cast<int>(limbs::bit_length(e)) - 1; i >= 0; --i) {
      acc = mont_mul(acc, acc);
      if (limbs::bit(e, static_cast<unsigned>(i))) acc = mont_mul(acc, v_);
    }
    return from_raw(acc);
  }
  Fp pow(uint64_t e) const { return pow(Limbs{e, 0, 0, 0}); }

  // Zero maps to zero.
  Fp inverse() const { return pow(limbs::sub_small(kModulus, 2)); }

  // Legendre symbol: 1, -1 (as p-1) or 0.
  Fp legendre() const { return pow(limbs::shr(limbs::sub_small(kModulus, 1), 1)); }

 private:
  static constexpr Limbs mont_mul(const Limbs& a, const Limbs& b) {
    uint64_t t[6] = {0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
      u128 c = 0;
      for (int j = 0; j < 4; ++j) {
        c = static_cast<u128>(a[j]) * b[i] + t[j] + (c >> 64);
        t[j] = static_cast<uint64_t>(c);
      }
      c = static_cast<u128>(t[4]) + (c >> 64);
      t[4] = static_cast<uint64_t>(c);
      t[5] = static_cast<uint64_t>(c >> 64);
      const uint64_t m = t[0] * kInv;
      c = static_cast<u128>(m) * kModulus[0] + t[0];
      for (int j = 1; j < 4; ++j) {
        c = static_cast<u128>(m) * kModulus[j] + t[j] + (c >> 64);
        t[j - 1] = static_cast<uint64_t>(c);
      }
      c = static_cast<u128>(t[4]) + (c >> 64);
      t[3] = static_cast<uint64_t>(c);
      t[4] = t[5] + static_cast<uint64_t>(c >> 64);
    }
    Limbs r{t[0], t[1], t[2], t[3]};
    if (t[4] != 0 || limbs::geq(r, kModulus)) limbs::sub_in_place(r, kModulus);
    return r;
  }

  Limbs v_;
};

template <class Params>
std::string Fp<Params>::to_decimal() const {
  Limbs x = to_canonical();
  std::string digits;
  while ((x[0] | x[1] | x[2] | x[3]) != 0) {
    u128 rem = 0;
    for (int i = 3; i >= 0; --i) {
      const u128 cur = (rem << 64) | x[i];
      x[i] = static_cast<uint64_t>(cur / 10);
      rem = cur % 10;
    }
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(rem)));
  }
  return digits.empty() ? "0" : digits;
}

struct FrParams {
  // 21888242871839275222246405745257275088548364400416034343698204186575808495617
  static constexpr Limbs kModulus = {0x43e1f593f0000001ULL, 0x2833e84879b97091ULL,
                                     0xb85045b68181585dULL, 0x30644e72e131a029ULL};
};

struct FqParams {
  // 21888242871839275222246405745257275088696311157297823662689037894645226208583
  static constexpr Limbs kModulus = {0x3c208c16d87cfd47ULL, 0x97816a916871ca8dULL,
                                     0xb85045b68181585dULL, 0x30644e72e131a029ULL};
};

using Fr = Fp<FrParams>;
using Fq = Fp<FqParams>;

template <>
struct MeterKindOf<Fr> {
  static constexpr ElemKind value = ElemKind::kField;
};

template <>
struct MeterKindOf<Limbs> {
  static constexpr ElemKind value = ElemKind::kField;
};

namespace field {

inline constexpr unsigned kTwoAdicity = 28;

// Multiplicative generator of Fr^*.
Fr multiplicative_generator();

// Primitive 2^log_n-th root of unity; throws UnsupportedSize if log_n > 28.
Fr root_of_unity(unsigned log_n);

// Replaces each nonzero entry with its inverse using one field inversion.
// Zero entries are left as zero.
void batch_invert(std::span<Fr> values);

Fr horner(std::span<const Fr> coeffs, const Fr& x);

}  // namespace field

}  // namespace streamzk
