#include "streamzk/quotient.hpp"

#include <vector>

#include "streamzk/blocked_ntt.hpp"
#include "streamzk/error.hpp"
#include "streamzk/meter.hpp"

namespace streamzk {

Domain quotient_coset(const Domain& h, unsigned d, const Fr& g, unsigned s) {
  const Fr eta = field::root_of_unity(log2_exact(uint64_t{d} * h.size));
  return make_domain_with_offset(h.size, g * eta.pow(s));
}

void stream_quotient(const Domain& h, unsigned d, const Fr& g, size_t b_blk, const CosetResidualFn& residual,
                     ScratchFile& out, bool check) {
  const uint64_t n = h.size;
  b_blk = std::max<size_t>(1, b_blk);
  std::vector<ScratchFile> folded(d);
  for (unsigned s = 0; s < d; ++s) {
    const Domain coset = quotient_coset(h, d, g, s);
    ScratchFile evals;
    residual(s, coset, file_sink(evals));
    if (evals.length() != n) fail(Errc::kLengthMismatch, "residual must cover the coset");
    FileSource src(evals, 0, n);
    intt_blocked(coset, src, b_blk, file_sink(folded[s]));
  }

  // root_pows[s*d+u] = zeta_d^(-su); scale[u] = g^(-uN) / d.
  const Fr zeta_d_inv = field::root_of_unity(log2_exact(d)).inverse();
  Metered<Fr> root_pows(uint64_t{d} * d);
  for (unsigned s = 0; s < d; ++s) {
    for (unsigned u = 0; u < d; ++u) root_pows[s * d + u] = zeta_d_inv.pow(uint64_t{s} * u);
  }
  Metered<Fr> scale(d);
  const Fr g_inv_n = g.pow(n).inverse();
  scale[0] = Fr::from_u64(d).inverse();
  for (unsigned u = 1; u < d; ++u) scale[u] = scale[u - 1] * g_inv_n;

  const Fr c = h.vanishing_constant;
  Metered<Fr> a(uint64_t{d} * b_blk);
  Metered<Fr> q(uint64_t{d} * b_blk);
  Metered<Fr> r(d);
  for (uint64_t j0 = 0; j0 < n; j0 += b_blk) {
    const size_t len = static_cast<size_t>(std::min<uint64_t>(b_blk, n - j0));
    for (unsigned s = 0; s < d; ++s) folded[s].read(j0, a.span().subspan(s * b_blk, len));
    for (size_t j = 0; j < len; ++j) {
      for (unsigned u = 0; u < d; ++u) {
        Fr acc;
        for (unsigned s = 0; s < d; ++s) acc += a[s * b_blk + j] * root_pows[s * d + u];
        r[u] = acc * scale[u];
      }
      Fr next;  // q_{j + uN}, zero above the top
      for (unsigned u = d - 1; u >= 1; --u) {
        next = r[u] + c * next;
        q[(u - 1) * b_blk + j] = next;
      }
      if (check && !(r[0] + c * next).is_zero()) {
        fail(Errc::kRemainderNonzero, "residual not divisible by the vanishing polynomial at coefficient " +
                                          std::to_string(j0 + j));
      }
    }
    for (unsigned u = 0; u + 1 < d; ++u) out.write(u * n + j0, q.span().subspan(u * b_blk, len));
  }
}

}  // namespace streamzk
