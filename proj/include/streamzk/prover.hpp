#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "streamzk/protocol.hpp"

namespace streamzk {

struct TamperSpec {
  size_t reg = 0;
  uint64_t row = 0;
  Fr delta = Fr::one();
};

struct ProverOptions {
  uint64_t b_blk = 0;  // streaming block size; 0 selects floor(sqrt(T))
  uint64_t prover_seed = 0;
  WitnessInputs inputs;
  // Off: a broken witness still yields a (rejectable) proof.
  bool check_witness = true;
  // Treats the first n permutation challenge draws as failed.
  unsigned force_perm_retries = 0;
  std::optional<TamperSpec> tamper;
};

struct ProverStats {
  size_t peak_bytes = 0;
  size_t peak_trace_bytes = 0;
  size_t passes = 0;
  size_t max_live_aux = 0;
  double seconds = 0;
};

struct ProverResult {
  Proof proof;
  Statement statement;
  std::vector<TranscriptItem> transcript;
  Digest transcript_digest{};
  Challenges challenges;
  ProverStats stats;
};

// Statement for an honest run (publics read from the first and last rows).
Statement make_statement(const ProtocolConfig& config, const WitnessInputs& inputs);

// Linear-space prover: materializes trace, accumulators and quotient.
ProverResult prove_baseline(const ProtocolConfig& config, const ProverOptions& options = {});

// Block-streaming prover, byte-identical output to prove_baseline.
ProverResult prove_streaming(const ProtocolConfig& config, const ProverOptions& options = {});

// One node of the commitment tree for the wire phase: the running coordinate
// of register m and the auxiliary state handed to the next layer.
struct NodeOutput {
  Commitment coordinate;
  AuxState aux;
};

// Shared per-slice memo: one eval_block call serves all k register nodes.
struct SliceMemo {
  BoundaryVector boundary_in;
  BlockOutput block;
};

// com_out = (same-register child coordinate, or identity at t = 1) + com_{t,m}
// + share H. Throws BoundaryMismatch when a child's boundary disagrees with
// the memo's boundary_in.
NodeOutput commit_tree_step(const PcsParams& pp, const NodeId& v, const SliceMemo& memo,
                            const NodeOutput* same_register_child, std::span<const NodeOutput* const> cross_children,
                            const Fr& blinder_share);

}  // namespace streamzk
