#include <gtest/gtest.h>

#include <random>

#include "streamzk/error.hpp"
#include "streamzk/prover.hpp"
#include "streamzk/quotient.hpp"
#include "streamzk/verifier.hpp"
#include "test_util.hpp"

namespace streamzk {
namespace {

ProtocolConfig config_for(const std::string& air, uint64_t t, PcsMode mode = PcsMode::kDesignatedVerifier) {
  ProtocolConfig c;
  c.air_id = air;
  c.trace_length = t;
  c.mode = mode;
  return c;
}

ProverOptions with_block(uint64_t b, uint64_t seed = 0) {
  ProverOptions o;
  o.b_blk = b;
  o.prover_seed = seed;
  o.inputs.seed = seed;
  return o;
}

VerifyResult check(const ProverResult& r) {
  return verify(make_verifier_key(r.statement.config), r.statement, r.proof);
}

TEST(Prover, BaselineFibAccepts) {
  const auto res = prove_baseline(config_for("fib", 16));
  const auto v = check(res);
  EXPECT_TRUE(v.accepted) << reason_name(v.reason) << " " << v.detail;
  EXPECT_EQ(res.statement.publics, (std::vector<Fr>{Fr::one(), Fr::one(), Fr::from_u64(1597)}));
}

TEST(Prover, StreamingMatchesBaselineAcrossBlockSizes) {
  for (const std::string air : {"fib", "copy", "range"}) {
    for (uint64_t t : {64u, 100u}) {
      const auto cfg = config_for(air, t);
      const auto base = prove_baseline(cfg, with_block(0, 5));
      EXPECT_TRUE(check(base).accepted) << air;
      for (uint64_t b : {1u, 4u, 8u, 16u, 37u, 128u}) {
        const auto str = prove_streaming(cfg, with_block(b, 5));
        EXPECT_EQ(first_divergence(str.transcript, base.transcript), -1) << air << " b=" << b;
        EXPECT_EQ(str.proof.serialize(), base.proof.serialize()) << air << " b=" << b;
        EXPECT_EQ(str.challenges.zeta, base.challenges.zeta);
      }
    }
  }
}

TEST(Prover, SingleBlockMatchesBaseline) {
  const auto cfg = config_for("copy", 256);
  const auto base = prove_baseline(cfg);
  const auto str = prove_streaming(cfg, with_block(256));
  EXPECT_EQ(str.proof.serialize(), base.proof.serialize());
}

TEST(Prover, VariantsMatchAndVerify) {
  for (const std::string air : {"fib", "copy", "range"}) {
    for (PcsMode mode : {PcsMode::kDesignatedVerifier, PcsMode::kHiding}) {
      for (Basis qb : {Basis::kCoefficient, Basis::kEvaluation}) {
        for (bool coset : {false, true}) {
          auto cfg = config_for(air, 32, mode);
          cfg.quotient_basis = qb;
          cfg.coset = coset;
          const auto base = prove_baseline(cfg, with_block(0, 9));
          const auto str = prove_streaming(cfg, with_block(6, 9));
          EXPECT_EQ(str.proof.serialize(), base.proof.serialize()) << air << mode_name(mode) << int(qb) << coset;
          const auto v = check(str);
          EXPECT_TRUE(v.accepted) << air << " " << reason_name(v.reason) << " " << v.detail;
        }
      }
    }
  }
}

TEST(Prover, HidingCommitmentsDependOnSeed) {
  const auto cfg = config_for("copy", 64, PcsMode::kHiding);
  const auto a = prove_streaming(cfg, with_block(8, 1));
  const auto b = prove_streaming(cfg, with_block(8, 2));
  for (size_t m = 0; m < a.proof.wire_coms.size(); ++m) EXPECT_NE(a.proof.wire_coms[m], b.proof.wire_coms[m]);
  EXPECT_TRUE(check(a).accepted);
  EXPECT_TRUE(check(b).accepted);
}

TEST(Prover, ForcedPermRetriesStayIdentical) {
  for (const std::string air : {"fib", "copy"}) {
    const auto cfg = config_for(air, 32);
    ProverOptions o = with_block(4);
    o.force_perm_retries = 2;
    const auto base = prove_baseline(cfg, o);
    const auto str = prove_streaming(cfg, o);
    EXPECT_EQ(base.proof.perm_retries, 2);
    EXPECT_EQ(str.proof.serialize(), base.proof.serialize());
    EXPECT_TRUE(check(str).accepted);
    EXPECT_NE(base.challenges.beta, prove_baseline(cfg).challenges.beta);
  }
}

TEST(Prover, TamperedWitnessIsRejected) {
  std::mt19937_64 rng(41);
  for (const std::string air : {"fib", "copy", "range"}) {
    const auto cfg = config_for(air, 64);
    for (int trial = 0; trial < 4; ++trial) {
      ProverOptions o = with_block(8);
      o.check_witness = false;
      o.tamper = TamperSpec{rng() % air_by_name(air).k, rng() % 64, Fr::one()};
      const auto base = prove_baseline(cfg, o);
      const auto str = prove_streaming(cfg, o);
      EXPECT_EQ(str.proof.serialize(), base.proof.serialize());
      EXPECT_FALSE(check(str).accepted) << air << " row " << o.tamper->row;
    }
  }
}

TEST(Prover, InvalidWitnessIsReported) {
  ProverOptions o = with_block(8);
  o.tamper = TamperSpec{0, 5, Fr::one()};
  for (auto prove : {prove_baseline, prove_streaming}) {
    try {
      prove(config_for("fib", 64), o);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kInvalidWitness);
    }
  }
}

TEST(Prover, WrongPublicsAreRejected) {
  const auto res = prove_streaming(config_for("fib", 64), with_block(8));
  Statement st = res.statement;
  st.publics.back() += Fr::one();
  EXPECT_FALSE(verify(make_verifier_key(st.config), st, res.proof).accepted);
}

TEST(Prover, PassCountAndLiveAux) {
  for (const std::string air : {"fib", "copy", "range"}) {
    const auto res = prove_streaming(config_for(air, 256), with_block(16));
    const AirSpec spec = air_by_name(air);
    EXPECT_EQ(res.stats.passes, spec.has_permutation() || spec.has_lookup() ? 4u : 3u) << air;
    EXPECT_LE(res.stats.max_live_aux, 2 * spec.k + spec.r_reg());
  }
}

TEST(Prover, MeterConservation) {
  auto& meter = WorkspaceMeter::global();
  const size_t before = meter.live_bytes();
  prove_streaming(config_for("copy", 128), with_block(8));
  prove_baseline(config_for("copy", 128));
  EXPECT_EQ(meter.live_bytes(), before);
}

TEST(Prover, WorkspaceCapIsEnforced) {
  auto& meter = WorkspaceMeter::global();
  meter.set_cap(4096);
  try {
    prove_baseline(config_for("fib", 1024));
    meter.set_cap(0);
    FAIL();
  } catch (const Error& e) {
    meter.set_cap(0);
    EXPECT_EQ(e.code(), Errc::kWorkspaceExceeded);
  }
}

TEST(Prover, NonHidingTransparentModeCannotOpen) {
  const auto res = prove_streaming(config_for("fib", 32, PcsMode::kNonHiding), with_block(4));
  EXPECT_EQ(res.proof.serialize(), prove_baseline(config_for("fib", 32, PcsMode::kNonHiding)).proof.serialize());
  const auto v = check(res);
  EXPECT_FALSE(v.accepted);
  EXPECT_EQ(v.reason, RejectReason::kModeUnsupported);
}

TEST(TreeStep, FirstBlockAndAggregation) {
  const auto cfg = config_for("copy", 64);
  const ProtocolLayout layout = make_layout(cfg);
  const auto pp = setup(layout.setup_options());
  const BlockingParams bp = make_blocking(64, 8);
  WitnessStream ws(layout.air, bp, {}, false);
  ws.begin_pass();
  std::vector<NodeOutput> prev;
  BoundaryVector boundary = layout.air.initial_row({}, 64);
  SliceMemo memo;
  std::vector<std::vector<Fr>> columns(layout.air.k);
  while (ws.next(memo.block)) {
    memo.boundary_in = boundary;
    std::vector<NodeOutput> cur;
    for (size_t m = 1; m <= layout.air.k; ++m) {
      const NodeOutput* same = prev.empty() ? nullptr : &prev[m - 1];
      cur.push_back(commit_tree_step(*pp, {m, memo.block.t}, memo, same, {}, Fr::zero()));
      if (memo.block.t == 1) {
        EXPECT_EQ(cur.back().coordinate,
                  commit(*pp, Basis::kEvaluation, memo.block.column(m - 1), 0));
      }
      const auto col = memo.block.column(m - 1);
      columns[m - 1].insert(columns[m - 1].end(), col.begin(), col.end());
    }
    boundary = memo.block.boundary_out;
    prev = std::move(cur);
  }
  for (size_t m = 0; m < layout.air.k; ++m) EXPECT_EQ(prev[m].coordinate, commit(*pp, Basis::kEvaluation, columns[m]));

  // A child carrying a different boundary is caught.
  NodeOutput bad = prev[0];
  bad.aux.boundary[0] += Fr::one();
  memo.boundary_in = prev[0].aux.boundary;
  try {
    commit_tree_step(*pp, {1, memo.block.t}, memo, &bad, {}, Fr::zero());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kBoundaryMismatch);
  }
}

TEST(TreeStep, ZeroColumnStaysIdentity) {
  const auto cfg = config_for("copy", 16);
  const auto pp = setup(make_layout(cfg).setup_options());
  WitnessInputs zero{{Fr::zero(), Fr::zero()}, 0};
  const BlockingParams bp = make_blocking(16, 4);
  // Register a stays zero only in the first block (a = 0, 0, 1, 3, ...);
  // use the first block of the zero-start counter AIR.
  SliceMemo memo{copy_air().initial_row(zero, 16), eval_block(copy_air(), bp, 1, copy_air().initial_row(zero, 16), zero)};
  memo.block.reg_vals[0] = memo.block.reg_vals[1] = memo.block.reg_vals[2] = memo.block.reg_vals[3] = Fr::zero();
  const auto out = commit_tree_step(*pp, {1, 1}, memo, nullptr, {}, Fr::zero());
  EXPECT_EQ(out.coordinate, Commitment::identity());
}

TEST(Quotient, VanishingPolynomialGivesOne) {
  for (bool coset : {false, true}) {
    const Domain h = make_domain(64, coset);
    for (unsigned d : {2u, 4u}) {
      const Fr g = Fr::from_u64(2);
      ScratchFile out;
      stream_quotient(h, d, g, 8, [&](unsigned, const Domain& cs, const BlockSink& sink) {
        std::vector<Fr> vals(cs.size);
        for (uint64_t i = 0; i < cs.size; ++i) vals[i] = h.vanishing(cs.element(i));
        sink(0, vals);
      }, out);
      std::vector<Fr> q((d - 1) * 64);
      out.read(0, q);
      EXPECT_EQ(q[0], Fr::one());
      for (size_t i = 1; i < q.size(); ++i) EXPECT_TRUE(q[i].is_zero());
    }
  }
}

TEST(Quotient, MatchesLongDivision) {
  std::mt19937_64 rng(42);
  const Domain h = make_domain(32, true);
  const unsigned d = 4;
  const Fr g = Fr::from_u64(3);
  // R = Z_H * Q for random Q of degree < 3N; the recovered Q must match.
  const auto q = testing::random_vector(rng, 96);
  std::vector<Fr> zh(33);
  zh[0] = -h.vanishing_constant;
  zh[32] = Fr::one();
  std::vector<Fr> r(128);
  for (size_t i = 0; i < q.size(); ++i) {
    for (size_t j = 0; j < zh.size(); ++j) r[i + j] += q[i] * zh[j];
  }
  ASSERT_EQ(testing::long_divide(r, zh).first, std::vector<Fr>(q.begin(), q.end()));
  ScratchFile out;
  stream_quotient(h, d, g, 5, [&](unsigned, const Domain& cs, const BlockSink& sink) {
    std::vector<Fr> vals(cs.size);
    for (uint64_t i = 0; i < cs.size; ++i) vals[i] = testing::eval_poly(r, cs.element(i));
    sink(0, vals);
  }, out);
  std::vector<Fr> got(96);
  out.read(0, got);
  EXPECT_EQ(got, q);

  // A nonzero remainder is detected.
  r[3] += Fr::one();
  ScratchFile out2;
  try {
    stream_quotient(h, d, g, 5, [&](unsigned, const Domain& cs, const BlockSink& sink) {
      std::vector<Fr> vals(cs.size);
      for (uint64_t i = 0; i < cs.size; ++i) vals[i] = testing::eval_poly(r, cs.element(i));
      sink(0, vals);
    }, out2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kRemainderNonzero);
  }
}

}  // namespace
}  // namespace streamzk
