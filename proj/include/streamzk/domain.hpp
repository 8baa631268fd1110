#pragma once

// Evaluation domains H = {offset * omega^i : i < N} with N a power of two, and
// in-memory radix-2 transforms over them. Z_H(X) = X^N - c with c = offset^N.

#include <cstdint>
#include <span>

#include "streamzk/field.hpp"

namespace streamzk {

struct Domain {
  uint64_t size = 0;
  unsigned log_size = 0;
  Fr omega;
  Fr omega_inv;
  Fr offset = Fr::one();
  Fr offset_inv = Fr::one();
  Fr vanishing_constant = Fr::one();
  Fr size_inv;
  bool is_coset = false;

  Fr element(uint64_t i) const;
  Fr vanishing(const Fr& x) const { return x.pow(size) - vanishing_constant; }
  bool contains(const Fr& x) const { return vanishing(x).is_zero(); }

  // L_i(x) for x outside the domain.
  Fr lagrange(uint64_t i, const Fr& x) const;

  bool operator==(const Domain& o) const {
    return size == o.size && offset == o.offset;
  }
};

// Coset domains use the field's multiplicative generator as offset.
Domain make_domain(uint64_t n, bool coset = false);
Domain make_domain_with_offset(uint64_t n, const Fr& offset);

uint64_t next_pow2(uint64_t n);
unsigned log2_exact(uint64_t n);
uint64_t bit_reverse(uint64_t x, unsigned bits);

// a_k <- sum_j a_j * root^(jk), natural order in and out.
void ntt_in_place(std::span<Fr> a, const Fr& root);

// Coefficients (length N) to evaluations over the domain, and back.
void ntt(std::span<Fr> values, const Domain& domain);
void intt(std::span<Fr> values, const Domain& domain);

}  // namespace streamzk
