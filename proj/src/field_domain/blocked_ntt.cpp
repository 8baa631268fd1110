#include "streamzk/blocked_ntt.hpp"

#include <algorithm>
#include <vector>

#include "streamzk/error.hpp"

namespace streamzk {

namespace detail {

namespace {

uint64_t floor_pow2(uint64_t n) {
  uint64_t p = 1;
  while (p * 2 <= n) p *= 2;
  return p;
}

}  // namespace

void dif_transform_file(ScratchFile& file, unsigned log_n, const Fr& root, size_t budget) {
  if (log_n == 0) return;
  const uint64_t n = uint64_t{1} << log_n;
  // root^(2^e) for e < log_n; the only twiddle state kept across tiles.
  std::vector<Fr> squares(log_n);
  squares[0] = root;
  for (unsigned e = 1; e < log_n; ++e) squares[e] = squares[e - 1].square();

  const uint64_t cap = std::max<uint64_t>(4, floor_pow2(std::max<size_t>(budget, 4)));
  const unsigned cap_log = log2_exact(cap);
  const unsigned g_max = std::max(1u, (cap_log + 1) / 2);

  Metered<Fr> tile;
  for (unsigned s0 = 0; s0 < log_n; s0 += g_max) {
    const unsigned g = std::min(g_max, log_n - s0);
    const unsigned hi = log_n - 1 - s0;
    const unsigned lo = hi + 1 - g;
    const uint64_t group = uint64_t{1} << g;
    const uint64_t low_span = uint64_t{1} << lo;
    const uint64_t p_count = std::min<uint64_t>(std::max<uint64_t>(1, cap / group), low_span);
    tile.resize(group * p_count);
    const uint64_t high_count = n >> (hi + 1);

    for (uint64_t h = 0; h < high_count; ++h) {
      for (uint64_t low0 = 0; low0 < low_span; low0 += p_count) {
        const uint64_t base = (h << (hi + 1)) | low0;
        if (p_count == low_span) {
          file.read(base, tile.span());
        } else {
          for (uint64_t t = 0; t < group; ++t) {
            file.read(base + (t << lo), tile.span().subspan(t * p_count, p_count));
          }
        }
        for (unsigned s = s0; s < s0 + g; ++s) {
          const unsigned q = (log_n - 1 - s) - lo;
          const uint64_t half = uint64_t{1} << q;
          const Fr& w_s = squares[s];
          // root^(j * 2^s) with j = (tt << lo) | low.
          const Fr step = (s + lo < log_n) ? squares[s + lo] : Fr::one();
          Fr low_tw = w_s.pow(low0);
          for (uint64_t p = 0; p < p_count; ++p) {
            Fr tw = low_tw;
            for (uint64_t tt = 0; tt < half; ++tt) {
              for (uint64_t blk = 0; blk < group; blk += 2 * half) {
                Fr& a = tile[(blk + tt) * p_count + p];
                Fr& b = tile[(blk + tt + half) * p_count + p];
                const Fr u = a;
                a = u + b;
                b = (u - b) * tw;
              }
              tw *= step;
            }
            low_tw *= w_s;
          }
        }
        if (p_count == low_span) {
          file.write(base, tile.span());
        } else {
          for (uint64_t t = 0; t < group; ++t) {
            file.write(base + (t << lo), tile.span().subspan(t * p_count, p_count));
          }
        }
      }
    }
  }
}

}  // namespace detail

namespace {

size_t clamp_block(size_t b_blk, uint64_t n) {
  if (b_blk == 0) fail(Errc::kInvalidArgument, "block size must be positive");
  return static_cast<size_t>(std::min<uint64_t>(b_blk, n));
}

// Copies exactly n elements (or at most n when padding is allowed) into the
// file, multiplying entry j by scale^j.
void load_scaled(ScratchFile& file, ElementSource& src, uint64_t n, size_t b, const Fr& scale,
                 bool allow_short) {
  Metered<Fr> buf(b);
  uint64_t pos = 0;
  Fr power = Fr::one();
  for (;;) {
    const size_t got = src.read(buf.span());
    if (got == 0) break;
    if (pos + got > n) fail(Errc::kLengthMismatch, "source longer than the domain");
    for (size_t i = 0; i < got; ++i) {
      buf[i] *= power;
      power *= scale;
    }
    file.write(pos, buf.span().first(got));
    pos += got;
  }
  if (pos < n) {
    if (!allow_short) fail(Errc::kLengthMismatch, "source shorter than the domain");
    std::fill(buf.begin(), buf.end(), Fr::zero());
    while (pos < n) {
      const size_t len = static_cast<size_t>(std::min<uint64_t>(b, n - pos));
      file.write(pos, buf.span().first(len));
      pos += len;
    }
  }
}

// Emits the bit-reversed file contents in natural order, entry j multiplied
// by first * ratio^j.
void emit_natural(const ScratchFile& file, unsigned log_n, size_t b, const Fr& first, const Fr& ratio,
                  EmitOrder order, const BlockSink& sink) {
  const uint64_t n = uint64_t{1} << log_n;
  const uint64_t blocks = (n + b - 1) / b;
  Metered<Fr> out(b);
  for (uint64_t k = 0; k < blocks; ++k) {
    const uint64_t blk = order == EmitOrder::kAscending ? k : blocks - 1 - k;
    const uint64_t start = blk * b;
    const size_t len = static_cast<size_t>(std::min<uint64_t>(b, n - start));
    Fr scale = first * ratio.pow(start);
    for (size_t i = 0; i < len; ++i) {
      out[i] = file.read_one(bit_reverse(start + i, log_n)) * scale;
      scale *= ratio;
    }
    sink(start, out.span().first(len));
  }
}

}  // namespace

void intt_blocked(const Domain& domain, ElementSource& evals, size_t b_blk, const BlockSink& sink,
                  EmitOrder order) {
  const size_t b = clamp_block(b_blk, domain.size);
  ScratchFile file;
  load_scaled(file, evals, domain.size, b, Fr::one(), false);
  detail::dif_transform_file(file, domain.log_size, domain.omega_inv, b);
  emit_natural(file, domain.log_size, b, domain.size_inv, domain.offset_inv, order, sink);
}

void ntt_blocked(const Domain& domain, ElementSource& coeffs, size_t b_blk, const BlockSink& sink) {
  const size_t b = clamp_block(b_blk, domain.size);
  ScratchFile file;
  load_scaled(file, coeffs, domain.size, b, domain.offset, true);
  detail::dif_transform_file(file, domain.log_size, domain.omega, b);
  emit_natural(file, domain.log_size, b, Fr::one(), Fr::one(), EmitOrder::kAscending, sink);
}

void ntt_block(const Domain& domain, uint64_t start, std::span<const Fr> coeffs, size_t b_blk,
               const BlockSink& sink) {
  if (start > domain.size || coeffs.size() > domain.size - start) {
    fail(Errc::kLengthMismatch, "coefficient block exceeds the domain");
  }
  GeneratorSource src(start + coeffs.size(), [&](uint64_t j) { return j < start ? Fr::zero() : coeffs[j - start]; });
  ntt_blocked(domain, src, b_blk, sink);
}

}  // namespace streamzk
