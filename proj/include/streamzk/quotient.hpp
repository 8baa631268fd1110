#pragma once

// Streaming division R = Z_H Q with Z_H = X^N - c, without pointwise division
// on H. R is supplied as evaluations on d cosets D_s = g eta^s <omega> (eta a
// primitive dN-th root), where X^N is the constant c_s = g^N eta^(sN). An
// inverse transform over D_s yields a_s[j] = sum_u r_{j+uN} c_s^u; a size-d
// inverse DFT across s recovers the coefficients r_{j+uN}, and the backward
// recurrence q_{i-N} = r_i + c q_i produces Q.

#include <functional>

#include "streamzk/domain.hpp"
#include "streamzk/stream.hpp"

namespace streamzk {

Domain quotient_coset(const Domain& h, unsigned d, const Fr& g, unsigned s);

// Delivers R over D_s in blocks, in domain order.
using CosetResidualFn = std::function<void(unsigned s, const Domain& coset, const BlockSink& sink)>;

// Writes q_0 .. q_{(d-1)N-1} into `out` at their indices. With check set,
// throws RemainderNonzero when r_j != -c q_j for some j < N.
void stream_quotient(const Domain& h, unsigned d, const Fr& g, size_t b_blk, const CosetResidualFn& residual,
                     ScratchFile& out, bool check = true);

}  // namespace streamzk
