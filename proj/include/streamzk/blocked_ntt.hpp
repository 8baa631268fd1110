#pragma once

// Out-of-core transforms. The working set is O(b_blk) field elements plus
// O(log N) twiddle state; the full vector lives in a scratch file and is
// processed by radix-2 DIF passes that each fuse ~log2(b_blk)/2 stages, so a
// transform costs about 2*log N / log b_blk sweeps over the scratch file.

#include <cstdint>

#include "streamzk/domain.hpp"
#include "streamzk/stream.hpp"

namespace streamzk {

enum class EmitOrder { kAscending, kDescending };

// Evaluations (exactly N, domain order) to coefficients, emitted as blocks of
// at most b_blk consecutive coefficients. Descending order emits the highest
// block first; entries inside a block stay in increasing index order.
void intt_blocked(const Domain& domain, ElementSource& evals, size_t b_blk, const BlockSink& sink,
                  EmitOrder order = EmitOrder::kAscending);

// Coefficients (at most N, zero-padded) to evaluations over the domain.
void ntt_blocked(const Domain& domain, ElementSource& coeffs, size_t b_blk, const BlockSink& sink);

// Evaluations of the polynomial sum_{j in block} coeffs[j - start] X^j.
void ntt_block(const Domain& domain, uint64_t start, std::span<const Fr> coeffs, size_t b_blk,
               const BlockSink& sink);

namespace detail {

// In-place DIF transform of the first 2^log_n entries of the file with the
// given primitive root; the result is left in bit-reversed order.
void dif_transform_file(ScratchFile& file, unsigned log_n, const Fr& root, size_t budget);

}  // namespace detail

}  // namespace streamzk
