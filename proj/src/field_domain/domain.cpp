#include "streamzk/domain.hpp"

#include <utility>

#include "streamzk/error.hpp"

namespace streamzk {

uint64_t next_pow2(uint64_t n) {
  uint64_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

unsigned log2_exact(uint64_t n) {
  if (n == 0 || (n & (n - 1)) != 0) fail(Errc::kUnsupportedSize, "size must be a power of two");
  return static_cast<unsigned>(__builtin_ctzll(n));
}

uint64_t bit_reverse(uint64_t x, unsigned bits) {
  if (bits == 0) return 0;
  x = ((x >> 1) & 0x5555555555555555ULL) | ((x & 0x5555555555555555ULL) << 1);
  x = ((x >> 2) & 0x3333333333333333ULL) | ((x & 0x3333333333333333ULL) << 2);
  x = ((x >> 4) & 0x0F0F0F0F0F0F0F0FULL) | ((x & 0x0F0F0F0F0F0F0F0FULL) << 4);
  x = __builtin_bswap64(x);
  return x >> (64 - bits);
}

Domain make_domain_with_offset(uint64_t n, const Fr& offset) {
  Domain d;
  d.log_size = log2_exact(n);
  d.size = n;
  d.omega = field::root_of_unity(d.log_size);
  d.omega_inv = d.omega.inverse();
  d.offset = offset;
  d.offset_inv = offset.inverse();
  d.vanishing_constant = offset.pow(n);
  d.size_inv = Fr::from_u64(n).inverse();
  d.is_coset = offset != Fr::one();
  return d;
}

Domain make_domain(uint64_t n, bool coset) {
  return make_domain_with_offset(n, coset ? field::multiplicative_generator() : Fr::one());
}

Fr Domain::element(uint64_t i) const { return offset * omega.pow(i % size); }

Fr Domain::lagrange(uint64_t i, const Fr& x) const {
  const Fr h = element(i);
  const Fr denom = Fr::from_u64(size) * vanishing_constant * (x - h);
  if (denom.is_zero()) fail(Errc::kPointInDomain, "lagrange evaluated on the domain");
  return h * vanishing(x) * denom.inverse();
}

void ntt_in_place(std::span<Fr> a, const Fr& root) {
  const uint64_t n = a.size();
  const unsigned logn = log2_exact(n);
  for (uint64_t i = 0; i < n; ++i) {
    const uint64_t j = bit_reverse(i, logn);
    if (i < j) std::swap(a[i], a[j]);
  }
  for (uint64_t len = 2; len <= n; len <<= 1) {
    const Fr step = root.pow(n / len);
    const uint64_t half = len / 2;
    Metered<Fr> tw(half);
    tw[0] = Fr::one();
    for (uint64_t j = 1; j < half; ++j) tw[j] = tw[j - 1] * step;
    for (uint64_t start = 0; start < n; start += len) {
      for (uint64_t j = 0; j < half; ++j) {
        const Fr u = a[start + j];
        const Fr v = a[start + j + half] * tw[j];
        a[start + j] = u + v;
        a[start + j + half] = u - v;
      }
    }
  }
}

void ntt(std::span<Fr> values, const Domain& domain) {
  if (values.size() != domain.size) fail(Errc::kLengthMismatch, "ntt input length");
  Fr scale = Fr::one();
  for (auto& v : values) {
    v *= scale;
    scale *= domain.offset;
  }
  ntt_in_place(values, domain.omega);
}

void intt(std::span<Fr> values, const Domain& domain) {
  if (values.size() != domain.size) fail(Errc::kLengthMismatch, "intt input length");
  ntt_in_place(values, domain.omega_inv);
  Fr scale = domain.size_inv;
  for (auto& v : values) {
    v *= scale;
    scale *= domain.offset_inv;
  }
}

}  // namespace streamzk
