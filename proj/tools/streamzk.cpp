// streamzk: prove, verify, benchmark and self-check from the command line.
//
// Exit codes: 0 success/accept, 1 reject or failed check, 2 usage error or
// malformed input.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <json.hpp>
#include <random>

#include "streamzk/barycentric.hpp"
#include "streamzk/bench.hpp"
#include "streamzk/blocked_ntt.hpp"
#include "streamzk/error.hpp"
#include "streamzk/prover.hpp"
#include "streamzk/verifier.hpp"

namespace {

using namespace streamzk;

constexpr int kExitReject = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PcsMode mode_or_throw(const std::string& name) {
  const auto m = parse_mode(name);
  if (!m) throw UsageError("unknown pcs mode '" + name + "'");
  return *m;
}

ProverKind prover_or_throw(const std::string& name) {
  if (name == "streaming") return ProverKind::kStreaming;
  if (name == "baseline") return ProverKind::kBaseline;
  throw UsageError("unknown prover '" + name + "' (streaming or baseline)");
}

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw UsageError("cannot write " + path);
}

void write_text(const std::string& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const uint8_t*>(text.data()), text.size()));
}

struct ProveArgs {
  std::string air = "fib";
  uint64_t t = 1024;
  std::string prover = "streaming";
  uint64_t b_blk = 0;
  std::string pcs_mode = "designated_verifier";
  uint64_t seed = 0;
  std::string out = "proof.bin";
  std::string statement_out;
  std::string meta_out;
};

int run_prove(const ProveArgs& a) {
  ProtocolConfig cfg;
  cfg.air_id = a.air;
  cfg.trace_length = a.t;
  cfg.mode = mode_or_throw(a.pcs_mode);
  ProverOptions opt;
  opt.b_blk = a.b_blk;
  opt.prover_seed = a.seed;
  opt.inputs.seed = a.seed;
  const ProverKind kind = prover_or_throw(a.prover);
  const ProverResult res = kind == ProverKind::kStreaming ? prove_streaming(cfg, opt) : prove_baseline(cfg, opt);

  const auto bytes = res.proof.serialize();
  write_file(a.out, bytes);
  const std::string st_path = a.statement_out.empty() ? a.out + ".statement.json" : a.statement_out;
  write_text(st_path, statement_to_json(res.statement) + "\n");

  nlohmann::ordered_json meta;
  meta["air"] = a.air;
  meta["T"] = a.t;
  meta["prover"] = prover_name(kind);
  meta["b_blk"] = kind == ProverKind::kStreaming ? make_blocking(a.t, a.b_blk).b_blk : 0;
  meta["mode"] = mode_name(cfg.mode);
  meta["proof_bytes"] = bytes.size();
  meta["peak_bytes"] = res.stats.peak_bytes;
  meta["peak_trace_bytes"] = res.stats.peak_trace_bytes;
  meta["passes"] = res.stats.passes;
  meta["wall_time_s"] = res.stats.seconds;
  meta["transcript_digest"] = to_hex(res.transcript_digest);
  meta["statement"] = st_path;
  const std::string meta_path = a.meta_out.empty() ? a.out + ".meta.json" : a.meta_out;
  write_text(meta_path, meta.dump(2) + "\n");
  std::cout << meta.dump() << "\n";
  return 0;
}

int run_verify(const std::string& statement_path, const std::string& proof_path) {
  const auto st_bytes = read_file(statement_path);
  Statement st;
  try {
    st = statement_from_json(std::string(st_bytes.begin(), st_bytes.end()));
  } catch (const Error& e) {
    std::cerr << "malformed statement: " << e.what() << "\n";
    return kExitUsage;
  }
  const auto proof = read_file(proof_path);
  const VerifyResult v = verify_bytes(make_verifier_key(st.config), st, proof);
  if (v.accepted) {
    std::cout << "accept\n";
    return 0;
  }
  std::cout << "reject: " << reason_name(v.reason) << (v.detail.empty() ? "" : " (" + v.detail + ")") << "\n";
  return v.reason == RejectReason::kMalformed ? kExitUsage : kExitReject;
}

struct BenchArgs {
  std::vector<std::string> airs{"fib"};
  std::vector<uint64_t> ts{1 << 10, 1 << 12};
  std::vector<std::string> provers{"streaming", "baseline"};
  uint64_t b_blk = 0;
  std::string pcs_mode = "designated_verifier";
  uint64_t seed = 0;
  std::string json_out;
};

int run_bench(const BenchArgs& a) {
  std::vector<BenchRow> rows;
  std::ofstream json_file;
  if (!a.json_out.empty()) {
    json_file.open(a.json_out);
    if (!json_file) throw UsageError("cannot write " + a.json_out);
  }
  std::ostream& json = a.json_out.empty() ? std::cout : json_file;
  for (const auto& air : a.airs) {
    for (uint64_t t : a.ts) {
      for (const auto& p : a.provers) {
        BenchConfig c;
        c.air = air;
        c.trace_length = t;
        c.b_blk = a.b_blk;
        c.prover = prover_or_throw(p);
        c.mode = mode_or_throw(a.pcs_mode);
        c.seed = a.seed;
        rows.push_back(measure(c));
        json << to_json_line(rows.back()) << "\n" << std::flush;
      }
    }
  }
  std::cout << format_table(rows);
  return 0;
}

int run_diff(const std::string& air, uint64_t t, uint64_t b_blk, const std::string& pcs_mode) {
  ProtocolConfig cfg;
  cfg.air_id = air;
  cfg.trace_length = t;
  cfg.mode = mode_or_throw(pcs_mode);
  ProverOptions opt;
  opt.b_blk = b_blk;
  const auto base = prove_baseline(cfg, opt);
  const auto str = prove_streaming(cfg, opt);
  const long at = first_divergence(base.transcript, str.transcript);
  const bool same_bytes = base.proof.serialize() == str.proof.serialize();
  if (at < 0 && same_bytes) {
    std::cout << "identical (" << base.transcript.size() << " items, digest " << to_hex(base.transcript_digest)
              << ")\n";
    return 0;
  }
  if (at < 0) {
    std::cout << "transcripts identical but proof bytes differ\n";
    return kExitReject;
  }
  const auto idx = static_cast<size_t>(at);
  const auto label = [](const std::vector<TranscriptItem>& log, size_t i) {
    return i < log.size() ? log[i].label : std::string("<end>");
  };
  std::cout << "diverged at item " << at << ": baseline '" << label(base.transcript, idx) << "' vs streaming '"
            << label(str.transcript, idx) << "'\n";
  return kExitReject;
}

// Small self-contained oracle checks; the exhaustive versions live in the
// test suites.
int run_selftest() {
  std::mt19937_64 rng(2024);
  int failures = 0;
  const auto report = [&](const char* name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };
  const auto rand_vec = [&](size_t n) {
    std::vector<Fr> v(n);
    for (auto& x : v) x = Fr::random(rng);
    return v;
  };
  const auto horner = [](const std::vector<Fr>& c, const Fr& x) {
    Fr acc;
    for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  };

  {
    // INTT against direct evaluation: evaluating the recovered coefficients
    // by Horner must give back the inputs.
    const Domain d = make_domain(64, true);
    const auto evals = rand_vec(64);
    std::vector<Fr> coeffs;
    SpanSource src(evals);
    intt_blocked(d, src, 8, [&](uint64_t, std::span<const Fr> blk) { coeffs.insert(coeffs.end(), blk.begin(), blk.end()); });
    bool ok = coeffs.size() == 64;
    for (uint64_t i = 0; ok && i < 64; ++i) ok = horner(coeffs, d.element(i)) == evals[i];
    report("blocked INTT matches Horner evaluation", ok);

    const Fr zeta = Fr::random(rng);
    SpanSource again(evals);
    report("barycentric evaluation matches Horner", barycentric_eval(d, again, zeta, 5) == horner(coeffs, zeta));
  }
  {
    SetupOptions so;
    so.max_len = 64;
    so.domain_size = 64;
    const auto pp = setup(so);
    const auto v = rand_vec(64);
    Commitment sum;
    for (uint64_t s = 0; s < 64; s += 13) {
      sum += commit(*pp, Basis::kEvaluation, std::span(v).subspan(s, std::min<uint64_t>(13, 64 - s)), s);
    }
    report("block commitments aggregate to the monolithic commitment", sum == commit(*pp, Basis::kEvaluation, v));
  }
  for (const auto& air : builtin_air_names()) {
    ProtocolConfig cfg;
    cfg.air_id = air;
    cfg.trace_length = 128;
    ProverOptions opt;
    opt.b_blk = 8;
    const auto base = prove_baseline(cfg, opt);
    const auto str = prove_streaming(cfg, opt);
    const bool same = base.proof.serialize() == str.proof.serialize();
    const bool ok = verify(make_verifier_key(cfg), str.statement, str.proof).accepted;
    report(("streaming and baseline proofs identical and accepted: " + air).c_str(), same && ok);
  }
  std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? 0 : kExitReject;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streamzk: streaming and baseline provers for AIR statements"};
  app.require_subcommand(1);

  ProveArgs pa;
  auto* prove = app.add_subcommand("prove", "Prove a built-in AIR statement");
  prove->add_option("--air", pa.air, "fib, copy or range")->check(CLI::IsMember(builtin_air_names()));
  prove->add_option("--t", pa.t, "Trace length T")->check(CLI::PositiveNumber);
  prove->add_option("--mode", pa.prover, "Prover: streaming or baseline")
      ->check(CLI::IsMember({"streaming", "baseline"}));
  prove->add_option("--b-blk", pa.b_blk, "Block size (0 = floor(sqrt T))");
  prove->add_option("--pcs-mode", pa.pcs_mode, "designated_verifier, hiding or non_hiding");
  prove->add_option("--seed", pa.seed, "Prover blinding and witness seed");
  prove->add_option("--out", pa.out, "Proof output path");
  prove->add_option("--statement-out", pa.statement_out, "Statement JSON path (default <out>.statement.json)");
  prove->add_option("--meta-out", pa.meta_out, "Metadata JSON path (default <out>.meta.json)");

  std::string st_path, proof_path;
  auto* verify_cmd = app.add_subcommand("verify", "Verify a proof against a statement");
  verify_cmd->add_option("--statement", st_path, "Statement JSON")->required();
  verify_cmd->add_option("--proof", proof_path, "Proof binary")->required();

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench-mem", "Measure workspace peaks; JSON lines then a table");
  bench->add_option("--air", ba.airs, "AIR names")->check(CLI::IsMember(builtin_air_names()));
  bench->add_option("--t", ba.ts, "Trace lengths")->check(CLI::PositiveNumber);
  bench->add_option("--prover", ba.provers, "streaming and/or baseline");
  bench->add_option("--b-blk", ba.b_blk, "Block size (0 = floor(sqrt T))");
  bench->add_option("--pcs-mode", ba.pcs_mode, "PCS mode");
  bench->add_option("--seed", ba.seed, "Seed");
  bench->add_option("--json", ba.json_out, "Write JSON lines here instead of stdout");

  std::string d_air = "fib", d_mode = "designated_verifier";
  uint64_t d_t = 1024, d_b = 0;
  auto* diff = app.add_subcommand("diff-transcript", "Run both provers and compare transcripts");
  diff->add_option("--air", d_air, "AIR name")->check(CLI::IsMember(builtin_air_names()));
  diff->add_option("--t", d_t, "Trace length")->check(CLI::PositiveNumber);
  diff->add_option("--b-blk", d_b, "Block size (0 = floor(sqrt T))");
  diff->add_option("--pcs-mode", d_mode, "PCS mode");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*prove) return run_prove(pa);
    if (*verify_cmd) return run_verify(st_path, proof_path);
    if (*bench) return run_bench(ba);
    if (*diff) return run_diff(d_air, d_t, d_b, d_mode);
    if (*selftest) return run_selftest();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error [" << errc_name(e.code()) << "]: " << e.what() << "\n";
    const bool bad_input = e.code() == Errc::kUnsupportedSize || e.code() == Errc::kInvalidArgument ||
                           e.code() == Errc::kMalformed;
    return bad_input ? kExitUsage : kExitReject;
  }
  return kExitUsage;
}
