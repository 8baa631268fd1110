#include "streamzk/curve.hpp"

#include <algorithm>
#include <vector>

#include "streamzk/error.hpp"
#include "streamzk/hash.hpp"

namespace streamzk {

namespace {

const Fq& curve_b() {
  static const Fq b = Fq::from_u64(3);
  return b;
}

std::optional<Fq> sqrt_fq(const Fq& a) {
  // p = 3 mod 4.
  static const Limbs kExp = limbs::shr(limbs::add_small(Fq::kModulus, 1), 2);
  const Fq root = a.pow(kExp);
  if (root.square() != a) return std::nullopt;
  return root;
}

bool is_odd(const Fq& v) { return (v.to_canonical()[0] & 1) != 0; }

}  // namespace

G1Affine G1Affine::generator() {
  return G1Affine{Fq::from_u64(1), Fq::from_u64(2), false};
}

bool G1Affine::on_curve() const {
  if (infinity) return true;
  return y.square() == x.square() * x + curve_b();
}

G1Affine G1Affine::operator-() const {
  G1Affine r = *this;
  r.y = -r.y;
  return r;
}

bool G1Affine::operator==(const G1Affine& o) const {
  if (infinity || o.infinity) return infinity == o.infinity;
  return x == o.x && y == o.y;
}

std::array<uint8_t, 32> G1Affine::compress() const {
  std::array<uint8_t, 32> out{};
  if (infinity) {
    out[31] = 0x40;
    return out;
  }
  x.to_bytes(std::span<uint8_t, 32>(out));
  if (is_odd(y)) out[31] |= 0x80;
  return out;
}

std::optional<G1Affine> G1Affine::decompress(std::span<const uint8_t> bytes) {
  if (bytes.size() != 32) return std::nullopt;
  std::array<uint8_t, 32> buf{};
  std::copy(bytes.begin(), bytes.end(), buf.begin());
  const bool odd = (buf[31] & 0x80) != 0;
  const bool inf = (buf[31] & 0x40) != 0;
  buf[31] &= 0x3f;
  if (inf) {
    if (odd || std::any_of(buf.begin(), buf.end(), [](uint8_t b) { return b != 0; })) return std::nullopt;
    return G1Affine::identity();
  }
  auto x = Fq::from_bytes(buf);
  if (!x) return std::nullopt;
  auto y = sqrt_fq(x->square() * *x + curve_b());
  if (!y) return std::nullopt;
  if (is_odd(*y) != odd) *y = -*y;
  // y == 0 has no odd representative; reject the flag rather than alias it.
  if (is_odd(*y) != odd) return std::nullopt;
  return G1Affine{*x, *y, false};
}

G1::G1(const G1Affine& p) {
  if (p.infinity) {
    *this = G1();
  } else {
    X = p.x;
    Y = p.y;
    Z = Fq::one();
  }
}

G1 G1::doubled() const {
  if (is_identity()) return *this;
  const Fq a = X.square();
  const Fq b = Y.square();
  const Fq c = b.square();
  Fq d = (X + b).square() - a - c;
  d = d + d;
  const Fq e = a + a + a;
  const Fq f = e.square();
  G1 r;
  r.X = f - d - d;
  Fq c8 = c + c;
  c8 = c8 + c8;
  c8 = c8 + c8;
  r.Y = e * (d - r.X) - c8;
  r.Z = (Y * Z).doubled();
  return r;
}

G1 G1::operator+(const G1& o) const {
  if (is_identity()) return o;
  if (o.is_identity()) return *this;
  const Fq z1z1 = Z.square();
  const Fq z2z2 = o.Z.square();
  const Fq u1 = X * z2z2;
  const Fq u2 = o.X * z1z1;
  const Fq s1 = Y * o.Z * z2z2;
  const Fq s2 = o.Y * Z * z1z1;
  const Fq h = u2 - u1;
  const Fq rr = (s2 - s1).doubled();
  if (h.is_zero()) {
    return rr.is_zero() ? doubled() : G1();
  }
  const Fq i = h.doubled().square();
  const Fq j = h * i;
  const Fq v = u1 * i;
  G1 r;
  r.X = rr.square() - j - v - v;
  r.Y = rr * (v - r.X) - (s1 * j).doubled();
  r.Z = ((Z + o.Z).square() - z1z1 - z2z2) * h;
  return r;
}

G1 G1::add_mixed(const G1Affine& o) const {
  if (o.infinity) return *this;
  if (is_identity()) return G1(o);
  const Fq z1z1 = Z.square();
  const Fq u2 = o.x * z1z1;
  const Fq s2 = o.y * Z * z1z1;
  const Fq h = u2 - X;
  const Fq rr = (s2 - Y).doubled();
  if (h.is_zero()) {
    return rr.is_zero() ? doubled() : G1();
  }
  const Fq hh = h.square();
  const Fq i = hh.doubled().doubled();
  const Fq j = h * i;
  const Fq v = X * i;
  G1 r;
  r.X = rr.square() - j - v - v;
  r.Y = rr * (v - r.X) - (Y * j).doubled();
  r.Z = (Z + h).square() - z1z1 - hh;
  return r;
}

G1 G1::operator-() const {
  G1 r = *this;
  r.Y = -r.Y;
  return r;
}

G1 G1::operator*(const Fr& k) const {
  const Limbs e = k.to_canonical();
  G1 acc;
  for (int i = static_cast<int>(limbs::bit_length(e)) - 1; i >= 0; --i) {
    acc = acc.doubled();
    if (limbs::bit(e, static_cast<unsigned>(i))) acc += *this;
  }
  return acc;
}

bool G1::operator==(const G1& o) const {
  if (is_identity() || o.is_identity()) return is_identity() == o.is_identity();
  const Fq z1z1 = Z.square();
  const Fq z2z2 = o.Z.square();
  return X * z2z2 == o.X * z1z1 && Y * o.Z * z2z2 == o.Y * Z * z1z1;
}

G1Affine G1::to_affine() const {
  if (is_identity()) return G1Affine::identity();
  const Fq zi = Z.inverse();
  const Fq zi2 = zi.square();
  return G1Affine{X * zi2, Y * zi2 * zi, false};
}

void batch_normalize(std::span<const G1> in, std::span<G1Affine> out) {
  if (in.size() != out.size()) fail(Errc::kLengthMismatch, "batch_normalize sizes");
  std::vector<Fq> prefix(in.size());
  Fq acc = Fq::one();
  for (size_t i = 0; i < in.size(); ++i) {
    prefix[i] = acc;
    if (!in[i].is_identity()) acc *= in[i].Z;
  }
  Fq inv = acc.inverse();
  for (size_t i = in.size(); i-- > 0;) {
    if (in[i].is_identity()) {
      out[i] = G1Affine::identity();
      continue;
    }
    const Fq zi = inv * prefix[i];
    inv *= in[i].Z;
    const Fq zi2 = zi.square();
    out[i] = G1Affine{in[i].X * zi2, in[i].Y * zi2 * zi, false};
  }
}

G1Affine hash_to_curve(std::string_view domain, std::span<const uint8_t> msg) {
  for (uint64_t ctr = 0;; ++ctr) {
    Sha256 h;
    h.update("streamzk/h2c").update_u64(domain.size()).update(domain).update_u64(msg.size()).update(msg).update_u64(ctr);
    const Digest d1 = h.finish();
    std::array<uint8_t, 64> wide{};
    std::copy(d1.begin(), d1.end(), wide.begin());
    const Digest d2 = Sha256::hash(d1);
    std::copy(d2.begin(), d2.end(), wide.begin() + 32);
    // Reduce 64 bytes into Fq the same way Fr does.
    Limbs lo{}, hi{};
    std::memcpy(lo.data(), wide.data(), 32);
    std::memcpy(hi.data(), wide.data() + 32, 32);
    const Fq x = Fq::from_canonical(lo) + Fq::from_canonical(hi) * Fq::from_raw(Fq::kR2);
    auto y = sqrt_fq(x.square() * x + curve_b());
    if (!y) continue;
    if (is_odd(*y)) *y = -*y;
    return G1Affine{x, *y, false};
  }
}

namespace {

constexpr size_t kStrausCutoff = 16;

unsigned msm_window(size_t n) {
  unsigned lg = 0;
  while ((size_t{1} << (lg + 1)) <= n) ++lg;
  return std::clamp<unsigned>(lg > 3 ? lg - 3 : 2, 2, 16);
}

uint32_t window_digit(const Limbs& e, unsigned start, unsigned width) {
  if (start >= 256) return 0;
  const unsigned limb = start / 64;
  const unsigned shift = start % 64;
  uint64_t v = e[limb] >> shift;
  if (shift + width > 64 && limb + 1 < 4) v |= e[limb + 1] << (64 - shift);
  return static_cast<uint32_t>(v & ((uint64_t{1} << width) - 1));
}

// Interleaved double-and-add: one shared doubling chain and mixed additions
// straight from the affine bases, so no per-base table is kept. Beats
// Pippenger on the short inputs block commitments produce.
G1 msm_straus(std::span<const Fr> scalars, std::span<const G1Affine> bases) {
  const size_t n = scalars.size();
  Metered<Limbs> exps(n);
  unsigned top = 0;
  for (size_t i = 0; i < n; ++i) {
    exps[i] = scalars[i].to_canonical();
    top = std::max(top, limbs::bit_length(exps[i]));
  }
  G1 acc;
  for (unsigned bit = top; bit-- > 0;) {
    acc = acc.doubled();
    for (size_t i = 0; i < n; ++i) {
      if (limbs::bit(exps[i], bit)) acc = acc.add_mixed(bases[i]);
    }
  }
  return acc;
}

}  // namespace

G1 msm(std::span<const Fr> scalars, std::span<const G1Affine> bases) {
  if (scalars.size() != bases.size()) fail(Errc::kLengthMismatch, "msm scalars and bases differ");
  const size_t n = scalars.size();
  if (n == 0) return G1();
  if (n < kStrausCutoff) return msm_straus(scalars, bases);
  Metered<Limbs> exps(n);
  for (size_t i = 0; i < n; ++i) exps[i] = scalars[i].to_canonical();
  const unsigned c = msm_window(n);
  const unsigned windows = (254 + c - 1) / c;
  Metered<G1> buckets((size_t{1} << c) - 1);
  G1 total;
  for (unsigned w = windows; w-- > 0;) {
    for (unsigned i = 0; i < c; ++i) total = total.doubled();
    std::fill(buckets.begin(), buckets.end(), G1());
    for (size_t i = 0; i < n; ++i) {
      const uint32_t digit = window_digit(exps[i], w * c, c);
      if (digit != 0) buckets[digit - 1] = buckets[digit - 1].add_mixed(bases[i]);
    }
    G1 running, sum;
    for (size_t j = buckets.size(); j-- > 0;) {
      running += buckets[j];
      sum += running;
    }
    total += sum;
  }
  return total;
}

FixedBaseTable::FixedBaseTable(const G1& base) {
  std::vector<G1> row(255);
  G1 window_base = base;
  for (auto& window : windows_) {
    row[0] = window_base;
    for (size_t j = 1; j < 255; ++j) row[j] = row[j - 1] + window_base;
    batch_normalize(row, window);
    window_base = row[254] + window_base;  // 256 * window_base
  }
}

G1 FixedBaseTable::mul(const Fr& k) const {
  const Limbs e = k.to_canonical();
  G1 acc;
  for (unsigned w = 0; w < 32; ++w) {
    const uint32_t digit = static_cast<uint32_t>((e[w / 8] >> (8 * (w % 8))) & 0xff);
    if (digit != 0) acc = acc.add_mixed(windows_[w][digit - 1]);
  }
  return acc;
}

}  // namespace streamzk
