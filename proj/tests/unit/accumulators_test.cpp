#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "streamzk/accumulators.hpp"
#include "streamzk/error.hpp"
#include "test_util.hpp"

namespace streamzk {
namespace {

using testing::monolithic_trace;

std::vector<BlockOutput> blocks_of(const AirSpec& air, uint64_t trace_length, uint64_t b, const Domain& domain,
                                   const WitnessInputs& in = {}) {
  const BlockingParams bp = make_blocking(trace_length, b);
  const auto shifts = permutation_shifts(air.k, domain);
  WitnessStream ws(air, bp, in, false);
  ws.begin_pass();
  std::vector<BlockOutput> out;
  BlockOutput blk;
  while (ws.next(blk)) {
    attach_local_fields(air, trace_length, domain, shifts, blk);
    out.push_back(std::move(blk));
  }
  return out;
}

Challenges random_challenges(std::mt19937_64& rng) {
  return {Fr::random(rng), Fr::random(rng), Fr::random(rng), Fr::random(rng), Fr::random(rng)};
}

// Row-by-row Z column computed from the copy cycles directly: labels are
// 5^c * offset * omega^i, one field inversion per row.
std::vector<Fr> oracle_z(const AirSpec& air, uint64_t trace_length, const Domain& d, const Challenges& ch,
                         const WitnessInputs& in = {}) {
  const auto rows = monolithic_trace(air, trace_length, in);
  const auto label = [&](size_t reg, uint64_t row) {
    return Fr::from_u64(5).pow(reg) * d.offset * d.omega.pow(row);
  };
  std::vector<Fr> z{Fr::one()};
  for (uint64_t i = 0; i < d.size; ++i) {
    Fr num = Fr::one(), den = Fr::one();
    for (size_t c = 0; c < air.k; ++c) {
      CellRef img{c, i};
      if (air.sigma && i < trace_length) img = air.sigma({c, i}, trace_length);
      num *= rows[i][c] + ch.beta * label(c, i) + ch.gamma;
      den *= rows[i][c] + ch.beta * label(img.reg, img.row) + ch.gamma;
    }
    z.push_back(z.back() * num * den.inverse());
  }
  return z;  // N + 1 entries, the last is the wraparound value
}

TEST(Accumulators, IdentitySigmaGivesUnitFactors) {
  std::mt19937_64 rng(21);
  const AirSpec air = fibonacci_air();
  const Domain d = make_domain(64);
  for (const auto& blk : blocks_of(air, 64, 8, d)) {
    const Challenges ch = random_challenges(rng);
    EXPECT_EQ(perm_block_factor(blk, ch), Fr::one());
    const auto col = z_column_block(blk, ch, Fr::from_u64(7));
    for (const Fr& z : col.z_vals) EXPECT_EQ(z, Fr::from_u64(7));
  }
}

TEST(Accumulators, ZeroBetaGivesUnitFactors) {
  std::mt19937_64 rng(22);
  const Domain d = make_domain(64);
  for (const auto& blk : blocks_of(copy_air(), 64, 8, d)) {
    Challenges ch = random_challenges(rng);
    ch.beta = Fr::zero();
    EXPECT_EQ(perm_block_factor(blk, ch), Fr::one());
  }
}

TEST(Accumulators, BlockedZMatchesRowByRow) {
  std::mt19937_64 rng(23);
  for (bool coset : {false, true}) {
    const Domain d = make_domain(64, coset);
    const Challenges ch = random_challenges(rng);
    const auto oracle = oracle_z(copy_air(), 64, d, ch);
    Fr z = Fr::one();
    Fr product = Fr::one();
    std::vector<Fr> column;
    for (const auto& blk : blocks_of(copy_air(), 64, 8, d)) {
      product *= perm_block_factor(blk, ch);
      const auto col = z_column_block(blk, ch, z);
      EXPECT_EQ(col.z_end, z * perm_block_factor(blk, ch));
      column.insert(column.end(), col.z_vals.begin(), col.z_vals.end());
      z = col.z_end;
    }
    EXPECT_EQ(column, std::vector<Fr>(oracle.begin(), oracle.end() - 1));
    EXPECT_EQ(product, oracle.back());
    // A valid witness closes the cycle.
    EXPECT_EQ(z, Fr::one());
  }
}

TEST(Accumulators, PaddedTraceClosesCycle) {
  std::mt19937_64 rng(24);
  const Domain d = make_domain(128);
  const Challenges ch = random_challenges(rng);
  WitnessInputs in{{Fr::random(rng), Fr::random(rng)}, 0};
  const auto oracle = oracle_z(copy_air(), 100, d, ch, in);
  EXPECT_EQ(oracle.back(), Fr::one());
  Fr z = Fr::one();
  for (const auto& blk : blocks_of(copy_air(), 100, 9, d, in)) z = z_column_block(blk, ch, z).z_end;
  EXPECT_EQ(z, Fr::one());
}

TEST(Accumulators, BrokenCopyDoesNotClose) {
  std::mt19937_64 rng(25);
  const AirSpec air = copy_air();
  const Domain d = make_domain(64);
  const BlockingParams bp = make_blocking(64, 8);
  const auto shifts = permutation_shifts(air.k, d);
  WitnessStream ws(air, bp, {}, false);
  ws.set_tamper(0, 20, Fr::one());
  ws.begin_pass();
  const Challenges ch = random_challenges(rng);
  Fr z = Fr::one();
  BlockOutput blk;
  while (ws.next(blk)) {
    attach_local_fields(air, 64, d, shifts, blk);
    z = z_column_block(blk, ch, z).z_end;
  }
  EXPECT_NE(z, Fr::one());
}

TEST(Accumulators, PartitionIndependence) {
  std::mt19937_64 rng(26);
  const Domain d = make_domain(128);
  for (int trial = 0; trial < 5; ++trial) {
    const Challenges ch = random_challenges(rng);
    WitnessInputs in{{Fr::random(rng), Fr::random(rng)}, 0};
    Fr first;
    for (uint64_t b : {1u, 5u, 11u, 128u}) {
      Fr product = Fr::one();
      // Broken copy values make the product nontrivial.
      for (auto& blk : blocks_of(copy_air(), 128, b, d, in)) {
        for (size_t i = 0; i < blk.rows; ++i) blk.reg_vals[i] += Fr::from_u64(blk.start_row + i);
        product *= perm_block_factor(blk, ch);
      }
      if (b == 1) first = product;
      EXPECT_EQ(product, first);
    }
  }
}

TEST(Accumulators, ShuffledOrderKeepsProductButBreaksColumn) {
  std::mt19937_64 rng(27);
  const Domain d = make_domain(64);
  const Challenges ch = random_challenges(rng);
  auto blocks = blocks_of(copy_air(), 64, 8, d);
  for (auto& blk : blocks) blk.reg_vals[0] += Fr::from_u64(blk.t);
  const auto run = [&](const std::vector<size_t>& order) {
    Fr z = Fr::one();
    std::vector<Fr> column(64);
    for (size_t idx : order) {
      const auto col = z_column_block(blocks[idx], ch, z);
      std::copy(col.z_vals.begin(), col.z_vals.end(), column.begin() + blocks[idx].start_row);
      z = col.z_end;
    }
    return std::make_pair(z, column);
  };
  std::vector<size_t> order(blocks.size());
  std::iota(order.begin(), order.end(), 0);
  const auto sorted = run(order);
  std::reverse(order.begin(), order.end());
  const auto shuffled = run(order);
  EXPECT_EQ(sorted.first, shuffled.first);
  EXPECT_NE(sorted.second, shuffled.second);
}

TEST(Accumulators, SingleRowBlock) {
  std::mt19937_64 rng(28);
  const Domain d = make_domain(16);
  const Challenges ch = random_challenges(rng);
  const auto blocks = blocks_of(copy_air(), 16, 1, d);
  const auto oracle = oracle_z(copy_air(), 16, d, ch);
  const Fr start = Fr::from_u64(3);
  const auto col = z_column_block(blocks[4], ch, start);
  ASSERT_EQ(col.z_vals.size(), 1u);
  EXPECT_EQ(col.z_vals[0], start);
  EXPECT_EQ(col.z_end, start * oracle[5] * oracle[4].inverse());
}

TEST(Accumulators, ZeroDenominator) {
  const Domain d = make_domain(16);
  auto blocks = blocks_of(copy_air(), 16, 4, d);
  Challenges ch{};
  ch.beta = Fr::zero();
  ch.gamma = -blocks[0].value(1, 2);
  try {
    perm_block_factor(blocks[0], ch);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kZeroDenominator);
  }
}

TEST(Accumulators, LookupTrivialAndSingleRow) {
  std::mt19937_64 rng(29);
  const Domain d = make_domain(64);
  const Challenges ch = random_challenges(rng);
  // Input column equal to table column: every factor is 1.
  const LookupSpec same{1, 1};
  for (const auto& blk : blocks_of(range_air(), 64, 8, d)) {
    EXPECT_EQ(lookup_block_factor(blk, same, ch, Fr::from_u64(9)).z_end, Fr::from_u64(9));
  }
  const auto blocks = blocks_of(range_air(), 64, 1, d);
  const auto& blk = blocks[10];
  const Fr phi = (ch.gamma_lookup + blk.value(0, 0)) * (ch.gamma_lookup + blk.value(1, 0)).inverse();
  EXPECT_EQ(lookup_block_factor(blk, *range_air().lookup, ch, Fr::from_u64(2)).z_end, Fr::from_u64(2) * phi);
}

TEST(Accumulators, LookupBlockedMatchesRowByRow) {
  std::mt19937_64 rng(30);
  for (uint64_t t : {64u, 200u}) {
    const Domain d = make_domain(next_pow2(t));
    const Challenges ch = random_challenges(rng);
    const WitnessInputs in{{}, rng()};
    const auto rows = monolithic_trace(range_air(), t, in);
    std::vector<Fr> oracle{Fr::one()};
    for (const auto& r : rows) oracle.push_back(oracle.back() * (ch.gamma_lookup + r[0]) * (ch.gamma_lookup + r[1]).inverse());
    Fr z = Fr::one();
    std::vector<Fr> column;
    for (const auto& blk : blocks_of(range_air(), t, 8, d, in)) {
      const auto col = lookup_block_factor(blk, *range_air().lookup, ch, z);
      column.insert(column.end(), col.z_vals.begin(), col.z_vals.end());
      z = col.z_end;
    }
    EXPECT_EQ(column, std::vector<Fr>(oracle.begin(), oracle.end() - 1));
    EXPECT_EQ(z, oracle.back());
    EXPECT_EQ(z, Fr::one());
  }
}

}  // namespace
}  // namespace streamzk
