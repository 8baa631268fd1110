#include "streamzk/air.hpp"

#include <algorithm>
#include <cmath>

#include "streamzk/error.hpp"

namespace streamzk {

size_t AirSpec::r_reg() const {
  size_t r = 0;
  for (size_t m = 0; m < reads.size(); ++m) {
    size_t cross = 0;
    for (size_t j : reads[m]) cross += (j != m) ? 1 : 0;
    r = std::max(r, cross);
  }
  return r;
}

unsigned AirSpec::max_constraint_degree() const {
  // Boundary terms L(X) (w(X) - v) have degree 2.
  unsigned d = 2;
  for (const auto& c : transitions) d = std::max(d, c.degree + (c.uses_next ? 1u : 0u));
  if (has_permutation()) d = std::max<unsigned>(d, static_cast<unsigned>(k) + 1);
  if (has_lookup()) d = std::max(d, 2u);
  return d;
}

uint64_t BlockingParams::slice_rows(uint64_t t) const {
  const uint64_t start = slice_start(t);
  return std::min<uint64_t>(b_blk, N - start);
}

BlockingParams make_blocking(uint64_t trace_length, uint64_t b_blk) {
  if (trace_length < 1) fail(Errc::kUnsupportedSize, "empty trace");
  BlockingParams bp;
  bp.T = trace_length;
  bp.N = next_pow2(trace_length);
  if (b_blk == 0) {
    b_blk = static_cast<uint64_t>(std::sqrt(static_cast<double>(trace_length)));
    while (b_blk * b_blk > trace_length) --b_blk;
    while ((b_blk + 1) * (b_blk + 1) <= trace_length) ++b_blk;
  }
  bp.b_blk = std::max<uint64_t>(1, b_blk);
  bp.B = (trace_length + bp.b_blk - 1) / bp.b_blk;
  bp.slices = (bp.N + bp.b_blk - 1) / bp.b_blk;
  return bp;
}

std::vector<Fr> permutation_shifts(size_t k, const Domain& domain) {
  std::vector<Fr> shifts(k);
  Fr g = Fr::one();
  for (size_t c = 0; c < k; ++c) {
    shifts[c] = g;
    g *= field::multiplicative_generator();
  }
  // Cosets k_a H and k_b H must be disjoint: (k_a / k_b)^N != 1.
  for (size_t a = 0; a < k; ++a) {
    for (size_t b = a + 1; b < k; ++b) {
      if ((shifts[a] * shifts[b].inverse()).pow(domain.size) == Fr::one()) {
        fail(Errc::kUnsupportedSize, "permutation cosets overlap");
      }
    }
  }
  return shifts;
}

Fr sigma_label(const AirSpec& air, uint64_t trace_length, const Domain& domain, std::span<const Fr> shifts,
               size_t reg, uint64_t row) {
  CellRef image{reg, row};
  if (air.sigma && row < trace_length) image = air.sigma(CellRef{reg, row}, trace_length);
  return shifts[image.reg] * domain.element(image.row);
}

namespace {

void check_transitions(const AirSpec& air, std::span<const Fr> prev, std::span<const Fr> cur, uint64_t row,
                       uint64_t trace_length) {
  for (const auto& c : air.transitions) {
    if (c.uses_next) {
      if (row == 0 || row >= trace_length) continue;
      if (!c.eval(prev, cur).is_zero()) {
        fail(Errc::kConstraintUnsatisfiable, air.id + ": transition " + c.name + " fails into row " + std::to_string(row));
      }
    } else if (!c.eval(cur, cur).is_zero()) {
      fail(Errc::kConstraintUnsatisfiable, air.id + ": constraint " + c.name + " fails at row " + std::to_string(row));
    }
  }
}

BoundaryVector step_row(const AirSpec& air, std::span<const Fr> prev, uint64_t row, uint64_t trace_length,
                        uint64_t seed) {
  BoundaryVector next(air.k);
  if (row >= trace_length) {
    std::copy(prev.begin(), prev.end(), next.begin());
    return next;
  }
  const StepContext ctx{row, trace_length, seed};
  const RowReader reader(prev, nullptr);
  for (size_t m = 0; m < air.k; ++m) next[m] = air.next[m](reader, ctx);
  return next;
}

}  // namespace

BlockOutput eval_block(const AirSpec& air, const BlockingParams& bp, uint64_t t, const BoundaryVector& boundary_in,
                       const WitnessInputs& inputs) {
  if (t < 1 || t > bp.slices) fail(Errc::kInvalidNode, "block index out of range");
  if (boundary_in.size() != air.k) fail(Errc::kLengthMismatch, "boundary vector length");
  BlockOutput out;
  out.t = t;
  out.k = air.k;
  out.start_row = bp.slice_start(t);
  out.rows = static_cast<size_t>(bp.slice_rows(t));
  out.reg_vals.resize(air.k * out.rows);
  BoundaryVector row = boundary_in;
  BoundaryVector prev = boundary_in;
  for (size_t i = 0; i < out.rows; ++i) {
    const uint64_t r = out.start_row + i;
    if (r != 0) {
      row = step_row(air, prev, r, bp.T, inputs.seed);
    }
    check_transitions(air, prev, row, r, bp.T);
    for (size_t m = 0; m < air.k; ++m) out.reg_vals[m * out.rows + i] = row[m];
    prev = row;
  }
  out.boundary_out = row;
  return out;
}

void attach_local_fields(const AirSpec& air, uint64_t trace_length, const Domain& domain, std::span<const Fr> shifts, BlockOutput& block) {
  LocalFields local;
  local.id_labels.resize(block.k * block.rows);
  local.sigma_labels.resize(block.k * block.rows);
  const Fr h0 = domain.element(block.start_row);
  for (size_t m = 0; m < block.k; ++m) {
    Fr h = h0 * shifts[m];
    for (size_t i = 0; i < block.rows; ++i) {
      local.id_labels[m * block.rows + i] = h;
      h *= domain.omega;
      local.sigma_labels[m * block.rows + i] =
          sigma_label(air, trace_length, domain, shifts, m, block.start_row + i);
    }
  }
  block.local = std::move(local);
}

WitnessStream::WitnessStream(const AirSpec& air, const BlockingParams& bp, WitnessInputs inputs, bool count_passes)
    : air_(air), bp_(bp), inputs_(std::move(inputs)), count_passes_(count_passes) {
  if (bp.T < air.min_trace_length) {
    fail(Errc::kUnsupportedSize, air.id + " needs at least " + std::to_string(air.min_trace_length) + " rows");
  }
}

void WitnessStream::begin_pass() {
  t_ = 0;
  boundary_ = air_.initial_row(inputs_, bp_.T);
  if (boundary_.size() != air_.k) fail(Errc::kLengthMismatch, "initial row length");
  if (count_passes_) WorkspaceMeter::global().count_pass();
}

bool WitnessStream::next(BlockOutput& out) {
  if (t_ >= bp_.slices) return false;
  ++t_;
  out = BlockOutput{};  // release the caller's previous slice first
  if (checks_) {
    out = eval_block(air_, bp_, t_, boundary_, inputs_);
  } else {
    // Same rows as eval_block without the transition checks.
    AirSpec unchecked = air_;
    unchecked.transitions.clear();
    out = eval_block(unchecked, bp_, t_, boundary_, inputs_);
  }
  boundary_ = out.boundary_out;
  if (tamper_) {
    const auto& [cell, delta] = *tamper_;
    if (cell.row >= out.start_row && cell.row < out.start_row + out.rows) {
      out.reg_vals[cell.reg * out.rows + (cell.row - out.start_row)] += delta;
    }
  }
  return true;
}

void WitnessStream::set_tamper(size_t reg, uint64_t row, const Fr& delta) {
  if (reg >= air_.k || row >= bp_.N) fail(Errc::kInvalidArgument, "tamper cell out of range");
  tamper_ = std::make_pair(CellRef{reg, row}, delta);
  checks_ = false;
}

std::vector<NodeId> children(const AirSpec& air, const BlockingParams& bp, const NodeId& v) {
  if (v.m < 1 || v.m > air.k || v.t > bp.slices) {
    fail(Errc::kInvalidNode, "node (" + std::to_string(v.m) + ", " + std::to_string(v.t) + ")");
  }
  if (v.t == 0) return {};
  std::vector<NodeId> out{{v.m, v.t - 1}};
  for (size_t j : air.reads[v.m - 1]) {
    if (j + 1 != v.m) out.push_back(NodeId{j + 1, v.t - 1});
  }
  return out;
}

std::optional<NodeId> LayeredSchedule::next() {
  if (index_ >= k_ * slices_) return std::nullopt;
  const NodeId v{static_cast<size_t>(index_ % k_) + 1, index_ / k_ + 1};
  ++index_;
  return v;
}

}  // namespace streamzk
