#include <gtest/gtest.h>

#include <json.hpp>
#include <random>

#include "streamzk/bench.hpp"
#include "streamzk/error.hpp"
#include "streamzk/prover.hpp"
#include "streamzk/transcript.hpp"
#include "streamzk/verifier.hpp"

namespace streamzk {
namespace {

ProverResult honest(const std::string& air, uint64_t t, PcsMode mode = PcsMode::kDesignatedVerifier) {
  ProtocolConfig c;
  c.air_id = air;
  c.trace_length = t;
  c.mode = mode;
  ProverOptions o;
  o.b_blk = 8;
  return prove_streaming(c, o);
}

TEST(Transcript, DeterministicAndLabelSensitive) {
  const std::vector<uint8_t> msg{1, 2, 3};
  Transcript a, b, c;
  a.absorb("x", msg);
  b.absorb("x", msg);
  c.absorb("y", msg);
  const Fr ca = a.challenge("ch");
  EXPECT_EQ(ca, b.challenge("ch"));
  EXPECT_NE(ca, c.challenge("ch"));
  // Consecutive draws differ because each challenge is absorbed back.
  EXPECT_NE(a.challenge("ch"), ca);
  EXPECT_EQ(a.log().size(), 3u);
  EXPECT_TRUE(a.log()[1].challenge);
}

TEST(Transcript, LengthPrefixPreventsAmbiguity) {
  Transcript a, b;
  const std::vector<uint8_t> ab{'a', 'b'}, empty{};
  a.absorb("a", ab);
  b.absorb("ab", empty);
  EXPECT_NE(a.state(), b.state());
}

TEST(Transcript, FirstDivergence) {
  Transcript a, b;
  a.absorb_u64("n", 1);
  b.absorb_u64("n", 1);
  EXPECT_EQ(first_divergence(a.log(), b.log()), -1);
  a.absorb_u64("m", 2);
  EXPECT_EQ(first_divergence(a.log(), b.log()), 1);
  b.absorb_u64("m", 3);
  EXPECT_EQ(first_divergence(a.log(), b.log()), 1);
}

TEST(Protocol, StatementJsonRoundTrip) {
  const auto res = honest("copy", 40);
  const std::string text = statement_to_json(res.statement);
  const Statement back = statement_from_json(text);
  EXPECT_EQ(back.config, res.statement.config);
  EXPECT_EQ(back.publics, res.statement.publics);
  for (const std::string bad : {"", "{}", "[1,2]", R"({"air":"fib"})"}) {
    EXPECT_THROW(statement_from_json(bad), Error) << bad;
  }
  auto j = nlohmann::json::parse(text);
  j["publics"][0] = "12a";
  EXPECT_THROW(statement_from_json(j.dump()), Error);
}

TEST(Protocol, ProofRoundTripAndStrictParse) {
  for (PcsMode mode : {PcsMode::kDesignatedVerifier, PcsMode::kHiding}) {
    const auto res = honest("range", 32, mode);
    const auto bytes = res.proof.serialize();
    EXPECT_EQ(parse_proof(bytes).serialize(), bytes);
    // Every strict prefix and any trailing byte is malformed.
    for (size_t n = 0; n < bytes.size(); n += 7) {
      EXPECT_THROW(parse_proof(std::span(bytes).first(n)), Error) << n;
    }
    auto longer = bytes;
    longer.push_back(0);
    EXPECT_THROW(parse_proof(longer), Error);
  }
}

TEST(Protocol, LayoutBasics) {
  for (const auto& air : builtin_air_names()) {
    ProtocolConfig c;
    c.air_id = air;
    c.trace_length = 100;
    const auto layout = make_layout(c);
    EXPECT_EQ(layout.N, 128u);
    EXPECT_EQ(layout.q_len, (layout.d - 1) * layout.N);
    EXPECT_GE(layout.d, layout.air.max_constraint_degree());
    EXPECT_EQ(layout.d & (layout.d - 1), 0u);
  }
}

TEST(Verifier, HonestProofsAccept) {
  for (const auto& air : builtin_air_names()) {
    for (PcsMode mode : {PcsMode::kDesignatedVerifier, PcsMode::kHiding}) {
      const auto res = honest(air, 50, mode);
      const auto v = verify_bytes(make_verifier_key(res.statement.config), res.statement, res.proof.serialize());
      EXPECT_TRUE(v.accepted) << air << " " << v.detail;
    }
  }
}

TEST(Verifier, EveryFlippedByteRejects) {
  const auto res = honest("copy", 16);
  const auto vk = make_verifier_key(res.statement.config);
  const auto bytes = res.proof.serialize();
  for (size_t i = 0; i < bytes.size(); ++i) {
    auto bad = bytes;
    bad[i] ^= 0x01;
    const auto v = verify_bytes(vk, res.statement, bad);
    EXPECT_FALSE(v.accepted) << "byte " << i;
  }
}

TEST(Verifier, RandomBytesReject) {
  const auto res = honest("fib", 16);
  const auto vk = make_verifier_key(res.statement.config);
  std::mt19937_64 rng(7);
  const auto bytes = res.proof.serialize();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<uint8_t> junk(rng() % (2 * bytes.size()));
    for (auto& x : junk) x = static_cast<uint8_t>(rng());
    if (trial % 2 == 0 && junk.size() > 8) std::copy(bytes.begin(), bytes.begin() + 8, junk.begin());
    EXPECT_FALSE(verify_bytes(vk, res.statement, junk).accepted);
  }
}

TEST(Verifier, HeaderMustMatchStatement) {
  const auto res = honest("fib", 32);
  Statement other = res.statement;
  other.config.trace_length = 31;
  const auto v = verify(make_verifier_key(res.statement.config), other, res.proof);
  EXPECT_FALSE(v.accepted);
  EXPECT_EQ(v.reason, RejectReason::kHeaderMismatch);
}

TEST(Verifier, SwappedEvaluationsReject) {
  const auto res = honest("copy", 32);
  Proof p = res.proof;
  std::swap(p.evals[0], p.evals[1]);
  EXPECT_FALSE(verify(make_verifier_key(res.statement.config), res.statement, p).accepted);
  p = res.proof;
  p.open_zeta = p.open_zeta_omega;
  EXPECT_FALSE(verify(make_verifier_key(res.statement.config), res.statement, p).accepted);
}

TEST(Bench, RowAndJson) {
  BenchConfig c;
  c.air = "fib";
  c.trace_length = 64;
  c.b_blk = 8;
  const BenchRow s = measure(c);
  c.prover = ProverKind::kBaseline;
  const BenchRow b = measure(c);
  EXPECT_EQ(s.transcript_digest, b.transcript_digest);
  EXPECT_EQ(s.proof_bytes, b.proof_bytes);
  EXPECT_LT(s.peak_bytes, b.peak_bytes);
  EXPECT_EQ(s.passes, 3u);
  const auto j = nlohmann::json::parse(to_json_line(s));
  for (const char* key : {"air", "T", "b_blk", "prover", "mode", "peak_bytes", "peak_trace_bytes", "wall_time_s",
                          "passes", "proof_bytes", "transcript_digest"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_NE(format_table({s, b}).find("streaming"), std::string::npos);
  c.workspace_cap = 1024;
  EXPECT_THROW(measure(c), Error);
  EXPECT_EQ(WorkspaceMeter::global().cap(), 0u);
}

}  // namespace
}  // namespace streamzk
