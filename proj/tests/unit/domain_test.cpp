#include <gtest/gtest.h>

#include <random>

#include "streamzk/barycentric.hpp"
#include "streamzk/blocked_ntt.hpp"
#include "streamzk/error.hpp"
#include "test_util.hpp"

namespace streamzk {
namespace {

using testing::naive_evaluate;
using testing::naive_interpolate;
using testing::random_vector;

std::vector<Fr> collect_intt(const Domain& d, const std::vector<Fr>& evals, size_t b,
                             EmitOrder order = EmitOrder::kAscending) {
  std::vector<Fr> out(d.size);
  std::vector<uint64_t> starts;
  SpanSource src(evals);
  intt_blocked(d, src, b, [&](uint64_t start, std::span<const Fr> blk) {
    starts.push_back(start);
    EXPECT_LE(blk.size(), b);
    std::copy(blk.begin(), blk.end(), out.begin() + static_cast<ptrdiff_t>(start));
  }, order);
  for (size_t i = 1; i < starts.size(); ++i) {
    if (order == EmitOrder::kAscending) {
      EXPECT_LT(starts[i - 1], starts[i]);
    } else {
      EXPECT_GT(starts[i - 1], starts[i]);
    }
  }
  return out;
}

std::vector<Fr> collect_ntt(const Domain& d, const std::vector<Fr>& coeffs, size_t b) {
  std::vector<Fr> out(d.size);
  SpanSource src(coeffs);
  ntt_blocked(d, src, b, [&](uint64_t start, std::span<const Fr> blk) {
    std::copy(blk.begin(), blk.end(), out.begin() + static_cast<ptrdiff_t>(start));
  });
  return out;
}

TEST(Domain, DegenerateSizeOne) {
  const Domain d = make_domain(1, false);
  EXPECT_EQ(d.omega, Fr::one());
  EXPECT_EQ(d.vanishing_constant, Fr::one());
}

TEST(Domain, SizeFourHasExactOrder) {
  const Domain d = make_domain(4, false);
  EXPECT_EQ(d.omega.pow(4), Fr::one());
  EXPECT_NE(d.omega.pow(2), Fr::one());
}

TEST(Domain, CosetVanishingConstant) {
  const Domain d = make_domain(256, true);
  EXPECT_TRUE(d.is_coset);
  EXPECT_EQ(d.offset.pow(256), d.vanishing_constant);
  EXPECT_NE(d.vanishing_constant, Fr::one());
}

TEST(Domain, PointsAreDistinctRootsOfVanishing) {
  for (bool coset : {false, true}) {
    const Domain d = make_domain(64, coset);
    std::vector<Fr> pts;
    for (uint64_t i = 0; i < d.size; ++i) {
      const Fr h = d.element(i);
      EXPECT_TRUE(d.vanishing(h).is_zero());
      for (const auto& p : pts) EXPECT_NE(p, h);
      pts.push_back(h);
    }
  }
}

TEST(Domain, UnsupportedSizes) {
  EXPECT_THROW(make_domain(3, false), Error);
  EXPECT_THROW(make_domain(uint64_t{1} << 29, false), Error);
}

TEST(Ntt, InMemoryMatchesNaive) {
  std::mt19937_64 rng(10);
  for (bool coset : {false, true}) {
    for (uint64_t n : {1u, 2u, 8u, 64u}) {
      const Domain d = make_domain(n, coset);
      auto coeffs = random_vector(rng, n);
      auto evals = coeffs;
      ntt(evals, d);
      EXPECT_EQ(evals, naive_evaluate(coeffs, d));
      intt(evals, d);
      EXPECT_EQ(evals, coeffs);
    }
  }
}

TEST(BlockedIntt, ConstantAndMonomial) {
  const Domain d = make_domain(16, false);
  const Fr a = Fr::from_u64(7);
  auto c = collect_intt(d, std::vector<Fr>(16, a), 4);
  EXPECT_EQ(c[0], a);
  for (size_t i = 1; i < 16; ++i) EXPECT_TRUE(c[i].is_zero());
  std::vector<Fr> xs(16);
  for (uint64_t i = 0; i < 16; ++i) xs[i] = d.element(i);
  c = collect_intt(d, xs, 4);
  for (size_t i = 0; i < 16; ++i) EXPECT_EQ(c[i], i == 1 ? Fr::one() : Fr::zero());
}

TEST(BlockedIntt, MatchesTextbookInterpolation) {
  std::mt19937_64 rng(11);
  for (bool coset : {false, true}) {
    const Domain d = make_domain(64, coset);
    const auto evals = random_vector(rng, 64);
    const auto expect = naive_interpolate(evals, d);
    EXPECT_EQ(collect_intt(d, evals, 8), expect);
  }
}

TEST(BlockedIntt, IndependentOfBlockSize) {
  std::mt19937_64 rng(12);
  for (uint64_t n : {2u, 32u, 256u, 1024u}) {
    for (bool coset : {false, true}) {
      const Domain d = make_domain(n, coset);
      const auto evals = random_vector(rng, n);
      auto mono = evals;
      intt(mono, d);
      for (size_t b : {size_t{1}, size_t{2}, size_t{3}, static_cast<size_t>(n / 4), static_cast<size_t>(n)}) {
        if (b == 0) continue;
        EXPECT_EQ(collect_intt(d, evals, b), mono) << n << " " << b;
        EXPECT_EQ(collect_intt(d, evals, b, EmitOrder::kDescending), mono) << n << " " << b;
      }
    }
  }
}

TEST(BlockedIntt, LengthMismatch) {
  const Domain d = make_domain(16, false);
  std::vector<Fr> short_evals(15), long_evals(17);
  SpanSource a(short_evals), b(long_evals);
  auto sink = [](uint64_t, std::span<const Fr>) {};
  EXPECT_THROW(intt_blocked(d, a, 4, sink), Error);
  EXPECT_THROW(intt_blocked(d, b, 4, sink), Error);
}

TEST(BlockedIntt, WorkspaceStaysWithinBlockBudget) {
  std::mt19937_64 rng(13);
  const uint64_t n = 4096;
  const Domain d = make_domain(n, true);
  const auto evals = random_vector(rng, n);
  for (size_t b : {size_t{16}, size_t{64}, size_t{256}}) {
    auto& meter = WorkspaceMeter::global();
    meter.reset_peak();
    const size_t before = meter.live_bytes();
    SpanSource src(evals);
    intt_blocked(d, src, b, [](uint64_t, std::span<const Fr>) {});
    const size_t peak_fields = (meter.peak_bytes() - before) / meter.width(ElemKind::kField);
    // Documented bound: tile (<= b) + load or emit buffer (b) + batch
    // inversion scratch; no twiddle table beyond log N entries.
    EXPECT_LE(peak_fields, 3 * b + 2 * d.log_size) << b;
  }
}

TEST(BlockedNtt, RoundTripAndNaive) {
  std::mt19937_64 rng(14);
  for (bool coset : {false, true}) {
    const Domain d = make_domain(64, coset);
    const auto coeffs = random_vector(rng, 64);
    const auto evals = collect_ntt(d, coeffs, 8);
    EXPECT_EQ(evals, naive_evaluate(coeffs, d));
    EXPECT_EQ(collect_intt(d, evals, 8), coeffs);
  }
}

TEST(NttBlock, ConstantAndLinear) {
  const Domain d = make_domain(4, false);
  const Fr a = Fr::from_u64(9);
  std::vector<Fr> out(4);
  auto sink = [&](uint64_t start, std::span<const Fr> blk) {
    std::copy(blk.begin(), blk.end(), out.begin() + static_cast<ptrdiff_t>(start));
  };
  const std::vector<Fr> c0{a};
  ntt_block(d, 0, c0, 2, sink);
  for (const auto& v : out) EXPECT_EQ(v, a);
  const std::vector<Fr> c1{Fr::one(), Fr::one()};
  ntt_block(d, 0, c1, 2, sink);
  const Fr i = d.omega;  // primitive 4th root
  EXPECT_EQ(out[0], Fr::from_u64(2));
  EXPECT_EQ(out[1], Fr::one() + i);
  EXPECT_TRUE(out[2].is_zero());
  EXPECT_EQ(out[3], Fr::one() - i);
  EXPECT_THROW(ntt_block(d, 3, c1, 2, sink), Error);
}

TEST(NttBlock, BlockContributionsSumToFullTransform) {
  std::mt19937_64 rng(15);
  const Domain d = make_domain(64, true);
  const auto coeffs = random_vector(rng, 64);
  std::vector<Fr> sum(64);
  for (uint64_t start = 0; start < 64; start += 16) {
    std::vector<Fr> block(coeffs.begin() + start, coeffs.begin() + start + 16);
    ntt_block(d, start, block, 8, [&](uint64_t s, std::span<const Fr> blk) {
      for (size_t i = 0; i < blk.size(); ++i) sum[s + i] += blk[i];
    });
  }
  EXPECT_EQ(sum, naive_evaluate(coeffs, d));
}

TEST(Barycentric, ConstantLinearAndHorner) {
  std::mt19937_64 rng(16);
  for (bool coset : {false, true}) {
    const Domain d = make_domain(64, coset);
    const Fr z = Fr::random(rng);
    std::vector<Fr> constant(64, Fr::from_u64(5));
    SpanSource s1(constant);
    EXPECT_EQ(barycentric_eval(d, s1, z), Fr::from_u64(5));
    std::vector<Fr> xs(64);
    for (uint64_t i = 0; i < 64; ++i) xs[i] = d.element(i);
    SpanSource s2(xs);
    EXPECT_EQ(barycentric_eval(d, s2, z), z);
    const auto coeffs = random_vector(rng, 64);
    const auto evals = naive_evaluate(coeffs, d);
    for (size_t batch : {size_t{1}, size_t{7}, size_t{64}}) {
      SpanSource s3(evals);
      EXPECT_EQ(barycentric_eval(d, s3, z, batch), testing::eval_poly(coeffs, z));
    }
  }
}

TEST(Barycentric, PointInDomainRejected) {
  const Domain d = make_domain(16, true);
  std::vector<Fr> v(16);
  SpanSource s(v);
  EXPECT_THROW(barycentric_eval(d, s, d.element(5)), Error);
}

TEST(Barycentric, AgreesWithBlockedInttThenHorner) {
  std::mt19937_64 rng(17);
  const Domain d = make_domain(4096, false);
  for (int trial = 0; trial < 10; ++trial) {
    const auto evals = random_vector(rng, d.size);
    const Fr z = Fr::random(rng);
    const auto coeffs = collect_intt(d, evals, 64);
    SpanSource s(evals);
    EXPECT_EQ(barycentric_eval(d, s, z), field::horner(coeffs, z));
  }
}

}  // namespace
}  // namespace streamzk
