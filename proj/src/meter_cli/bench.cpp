#include "streamzk/bench.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "streamzk/hash.hpp"

namespace streamzk {

const char* prover_name(ProverKind p) { return p == ProverKind::kBaseline ? "baseline" : "streaming"; }

BenchRow measure(const BenchConfig& config) {
  ProtocolConfig pc;
  pc.air_id = config.air;
  pc.trace_length = config.trace_length;
  pc.mode = config.mode;
  ProverOptions opt;
  opt.b_blk = config.b_blk;
  opt.prover_seed = config.seed;
  opt.inputs.seed = config.seed;
  // SRS and fixed columns are setup artifacts; build them outside the run.
  fixed_commitments(make_layout(pc), *setup(make_layout(pc).setup_options()));

  auto& meter = WorkspaceMeter::global();
  const size_t old_cap = meter.cap();
  meter.set_cap(config.workspace_cap);
  ProverResult res;
  try {
    res = config.prover == ProverKind::kBaseline ? prove_baseline(pc, opt) : prove_streaming(pc, opt);
  } catch (...) {
    meter.set_cap(old_cap);
    throw;
  }
  meter.set_cap(old_cap);

  BenchRow row;
  row.air = config.air;
  row.trace_length = config.trace_length;
  row.b_blk = config.prover == ProverKind::kStreaming ? make_blocking(config.trace_length, config.b_blk).b_blk : 0;
  row.prover = config.prover;
  row.mode = config.mode;
  row.peak_bytes = res.stats.peak_bytes;
  row.peak_trace_bytes = res.stats.peak_trace_bytes;
  row.wall_time_s = res.stats.seconds;
  row.passes = res.stats.passes;
  row.proof_bytes = res.proof.serialize().size();
  row.transcript_digest = to_hex(res.transcript_digest);
  return row;
}

std::string to_json_line(const BenchRow& row) {
  nlohmann::ordered_json j;
  j["air"] = row.air;
  j["T"] = row.trace_length;
  j["b_blk"] = row.b_blk;
  j["prover"] = prover_name(row.prover);
  j["mode"] = mode_name(row.mode);
  j["peak_bytes"] = row.peak_bytes;
  j["peak_trace_bytes"] = row.peak_trace_bytes;
  j["wall_time_s"] = row.wall_time_s;
  j["passes"] = row.passes;
  j["proof_bytes"] = row.proof_bytes;
  j["transcript_digest"] = row.transcript_digest;
  return j.dump();
}

std::string format_table(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-6s %9s %6s %-10s %12s %12s %9s %6s %16s\n", "air", "T", "b_blk", "prover",
                "peak_bytes", "trace_bytes", "time_s", "passes", "digest");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-6s %9llu %6llu %-10s %12zu %12zu %9.3f %6zu %16s\n", r.air.c_str(),
                  static_cast<unsigned long long>(r.trace_length), static_cast<unsigned long long>(r.b_blk),
                  prover_name(r.prover), r.peak_bytes, r.peak_trace_bytes, r.wall_time_s, r.passes,
                  r.transcript_digest.substr(0, 16).c_str());
    out << line;
  }
  return out.str();
}

}  // namespace streamzk
