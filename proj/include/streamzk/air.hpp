#pragma once

// AIR descriptions, block-respecting witness execution and the implicit
// computation graph over (register, block) nodes.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "streamzk/domain.hpp"
#include "streamzk/field.hpp"
#include "streamzk/meter.hpp"

namespace streamzk {

// Previous-row view handed to next-value generators. Every read is recorded
// in a bit mask so tests can audit the declared read sets.
class RowReader {
 public:
  RowReader(std::span<const Fr> row, uint64_t* read_mask) : row_(row), mask_(read_mask) {}
  const Fr& operator[](size_t reg) const {
    if (mask_ != nullptr) *mask_ |= uint64_t{1} << reg;
    return row_[reg];
  }
  size_t size() const { return row_.size(); }

 private:
  std::span<const Fr> row_;
  uint64_t* mask_;
};

struct WitnessInputs {
  std::vector<Fr> initial;  // per-AIR meaning; empty selects defaults
  uint64_t seed = 0;
};

struct StepContext {
  uint64_t row;           // index of the row being produced
  uint64_t trace_length;  // T
  uint64_t seed;
};

using NextValueFn = std::function<Fr(const RowReader& prev, const StepContext& ctx)>;

struct TransitionConstraint {
  std::string name;
  unsigned degree = 1;
  // Constraints that never look at the next row hold on every row of H,
  // padding included; the rest are gated by the selector on rows 0..T-2.
  bool uses_next = true;
  std::function<Fr(std::span<const Fr> cur, std::span<const Fr> next)> eval;
};

struct CellRef {
  size_t reg;
  uint64_t row;
  bool operator==(const CellRef&) const = default;
};

enum class PublicRow : uint8_t { kFirst, kLast };

struct PublicCell {
  PublicRow row;
  size_t reg;
};

struct LookupSpec {
  size_t input_reg;  // f: values being range-checked
  size_t table_reg;  // t: staircase column constrained to cover the table
};

struct AirSpec {
  std::string id;
  size_t k = 0;
  // Cross-register previous-row reads per register (own register excluded).
  std::vector<std::vector<size_t>> reads;
  std::vector<NextValueFn> next;
  std::function<std::vector<Fr>(const WitnessInputs&, uint64_t trace_length)> initial_row;
  std::vector<TransitionConstraint> transitions;
  std::vector<PublicCell> public_cells;
  // Image of a cell under the copy permutation; unset means identity.
  std::function<CellRef(const CellRef& cell, uint64_t trace_length)> sigma;
  std::optional<LookupSpec> lookup;
  uint64_t min_trace_length = 2;

  size_t r_reg() const;
  bool has_permutation() const { return static_cast<bool>(sigma); }
  bool has_lookup() const { return lookup.has_value(); }
  // Degree of the combined constraint polynomial in units of N.
  unsigned max_constraint_degree() const;
};

// Fibonacci (k=2): a' = b, b' = a + b. Publics a(0), b(0), b(T-1).
AirSpec fibonacci_air();
// Copy-constraint demo (k=3): c = a + b on every row, b' = b + 1, and the
// copy cycle (c, i) <-> (a, i+1). Publics a(0), b(0), c(T-1).
AirSpec copy_air();
// Range-check demo (k=2, columns v and s): s is a 0/1-step staircase from 0
// to R-1 with R = min(256, T); v is s shuffled inside windows of 8 rows, and
// one lookup accumulator proves v is a rearrangement of s.
AirSpec range_air();
// "fib", "copy" or "range".
AirSpec air_by_name(const std::string& name);
std::vector<std::string> builtin_air_names();

uint64_t range_air_table_size(uint64_t trace_length);

struct BlockingParams {
  uint64_t T = 0;
  uint64_t N = 0;       // next power of two >= T
  uint64_t b_blk = 0;
  uint64_t B = 0;       // trace-bearing blocks, ceil(T / b_blk)
  uint64_t slices = 0;  // blocks covering H, ceil(N / b_blk)

  uint64_t slice_start(uint64_t t) const { return (t - 1) * b_blk; }
  uint64_t slice_rows(uint64_t t) const;
};

// b_blk = 0 picks floor(sqrt(T)). Rows T..N-1 repeat row T-1; they form
// additional slices beyond block B when N > T.
BlockingParams make_blocking(uint64_t trace_length, uint64_t b_blk = 0);

using BoundaryVector = std::vector<Fr>;

// Row-local fields consumed by the permutation argument.
struct LocalFields {
  Metered<Fr> id_labels;     // k_c * h_i, register-major
  Metered<Fr> sigma_labels;  // label of sigma(c, i), register-major
};

struct BlockOutput {
  uint64_t t = 0;  // 1-based slice index
  uint64_t start_row = 0;
  size_t rows = 0;
  size_t k = 0;
  Metered<Fr> reg_vals{MeterTag::kTrace};  // register-major: reg_vals[m * rows + i]
  BoundaryVector boundary_out;
  std::optional<LocalFields> local;

  std::span<const Fr> column(size_t m) const { return reg_vals.span().subspan(m * rows, rows); }
  const Fr& value(size_t m, size_t i) const { return reg_vals[m * rows + i]; }
};

// Coset shifts k_c = g^c for the permutation labels k_c * h_i.
std::vector<Fr> permutation_shifts(size_t k, const Domain& domain);

// Label k_{c'} h_{i'} of sigma(c, i) (identity on padding rows).
Fr sigma_label(const AirSpec& air, uint64_t trace_length, const Domain& domain, std::span<const Fr> shifts,
               size_t reg, uint64_t row);

// Runs slice t. For t = 1 boundary_in is the initial row itself (row 0);
// otherwise it is the last row of slice t-1. Throws ConstraintUnsatisfiable
// when a produced row violates a transition constraint.
BlockOutput eval_block(const AirSpec& air, const BlockingParams& bp, uint64_t t, const BoundaryVector& boundary_in,
                       const WitnessInputs& inputs);

void attach_local_fields(const AirSpec& air, uint64_t trace_length, const Domain& domain, std::span<const Fr> shifts, BlockOutput& block);

// Re-executable witness source. Internal state is the O(k) boundary vector.
class WitnessStream {
 public:
  WitnessStream(const AirSpec& air, const BlockingParams& bp, WitnessInputs inputs, bool count_passes = true);

  // Rewinds; each call counts one pass on the workspace meter.
  void begin_pass();
  // Produces the next slice; false once all slices were emitted.
  bool next(BlockOutput& out);

  const AirSpec& air() const { return air_; }
  const BlockingParams& blocking() const { return bp_; }
  const WitnessInputs& inputs() const { return inputs_; }

  // Adds delta to one emitted cell, leaving the carried state untouched;
  // used to feed provers an inconsistent trace.
  void set_tamper(size_t reg, uint64_t row, const Fr& delta);
  // Skips per-block transition checks (needed when tampering).
  void set_checks(bool enabled) { checks_ = enabled; }

 private:
  const AirSpec& air_;
  BlockingParams bp_;
  WitnessInputs inputs_;
  bool count_passes_;
  bool checks_ = true;
  uint64_t t_ = 0;
  BoundaryVector boundary_;
  std::optional<std::pair<CellRef, Fr>> tamper_;
};

struct NodeId {
  size_t m;    // 1-based register
  uint64_t t;  // 0 for source nodes, 1..slices otherwise
  bool operator==(const NodeId&) const = default;
};

std::vector<NodeId> children(const AirSpec& air, const BlockingParams& bp, const NodeId& v);

// Layer-by-layer node order: all registers of slice 1, then slice 2, ...
// Retention contract: a node's AuxState may be dropped once every node of
// the next layer has been evaluated, so at most two layers (2k states) are
// ever live.
class LayeredSchedule {
 public:
  LayeredSchedule(const AirSpec& air, const BlockingParams& bp) : k_(air.k), slices_(bp.slices) {}
  std::optional<NodeId> next();
  uint64_t node_count() const { return k_ * slices_; }
  static uint64_t release_layer(const NodeId& v) { return v.t + 1; }

 private:
  size_t k_;
  uint64_t slices_;
  uint64_t index_ = 0;
};

}  // namespace streamzk
