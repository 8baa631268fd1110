#pragma once

// Benchmark harness: runs a prover under the workspace meter and reports one
// row per run. JSON-lines schema (one object per line):
//   {"air", "T", "b_blk", "prover", "mode", "peak_bytes", "peak_trace_bytes",
//    "wall_time_s", "passes", "proof_bytes", "transcript_digest"}

#include <cstdint>
#include <string>
#include <vector>

#include "streamzk/prover.hpp"

namespace streamzk {

enum class ProverKind { kBaseline, kStreaming };

const char* prover_name(ProverKind p);

struct BenchConfig {
  std::string air = "fib";
  uint64_t trace_length = 1 << 12;
  uint64_t b_blk = 0;  // streaming only; 0 selects floor(sqrt(T))
  ProverKind prover = ProverKind::kStreaming;
  PcsMode mode = PcsMode::kDesignatedVerifier;
  uint64_t seed = 0;
  size_t workspace_cap = 0;  // bytes, 0 = unlimited
};

struct BenchRow {
  std::string air;
  uint64_t trace_length = 0;
  uint64_t b_blk = 0;
  ProverKind prover = ProverKind::kStreaming;
  PcsMode mode = PcsMode::kDesignatedVerifier;
  size_t peak_bytes = 0;
  size_t peak_trace_bytes = 0;
  double wall_time_s = 0;
  size_t passes = 0;
  size_t proof_bytes = 0;
  std::string transcript_digest;
};

// Throws WorkspaceExceeded when the cap is breached.
BenchRow measure(const BenchConfig& config);

std::string to_json_line(const BenchRow& row);
std::string format_table(const std::vector<BenchRow>& rows);

}  // namespace streamzk
