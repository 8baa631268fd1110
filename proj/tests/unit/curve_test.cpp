#include <gtest/gtest.h>

#include <random>

#include "streamzk/curve.hpp"
#include "test_util.hpp"

namespace streamzk {
namespace {

TEST(Curve, GeneratorOnCurveWithOrderR) {
  EXPECT_TRUE(G1Affine::generator().on_curve());
  const G1 g = G1::generator();
  EXPECT_TRUE((g * -Fr::one() + g).is_identity());
  EXPECT_FALSE((g * Fr::from_u64(12345)).is_identity());
}

TEST(Curve, GroupLaws) {
  std::mt19937_64 rng(20);
  const G1 g = G1::generator();
  for (int i = 0; i < 20; ++i) {
    const Fr a = Fr::random(rng), b = Fr::random(rng);
    const G1 pa = g * a, pb = g * b;
    EXPECT_EQ(pa + pb, g * (a + b));
    EXPECT_EQ(pa + pb, pb + pa);
    EXPECT_EQ(pa.doubled(), pa + pa);
    EXPECT_EQ(pa.add_mixed(pb.to_affine()), pa + pb);
    EXPECT_EQ(pa.add_mixed(pa.to_affine()), pa.doubled());
    EXPECT_TRUE((pa - pa).is_identity());
    EXPECT_TRUE(pa.to_affine().on_curve());
    EXPECT_EQ(pa * b, pb * a);
  }
}

TEST(Curve, SmallMultiplesByRepeatedAddition) {
  const G1 g = G1::generator();
  G1 acc;
  for (uint64_t k = 0; k < 40; ++k) {
    EXPECT_EQ(g * Fr::from_u64(k), acc);
    acc = acc.add_mixed(G1Affine::generator());
  }
}

TEST(Curve, CompressionRoundTrip) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 30; ++i) {
    const G1Affine p = (G1::generator() * Fr::random(rng)).to_affine();
    const auto bytes = p.compress();
    const auto q = G1Affine::decompress(bytes);
    ASSERT_TRUE(q.has_value());
    EXPECT_EQ(*q, p);
  }
  const auto inf = G1Affine::identity().compress();
  EXPECT_TRUE(G1Affine::decompress(inf)->infinity);
  auto bad = inf;
  bad[0] = 1;
  EXPECT_FALSE(G1Affine::decompress(bad).has_value());
}

TEST(Curve, DecompressRejectsNonCanonicalX) {
  std::array<uint8_t, 32> bytes{};
  std::memcpy(bytes.data(), Fq::kModulus.data(), 32);  // x = p
  EXPECT_FALSE(G1Affine::decompress(bytes).has_value());
}

TEST(Curve, BatchNormalizeMatchesSingle) {
  std::mt19937_64 rng(22);
  std::vector<G1> pts;
  for (int i = 0; i < 10; ++i) pts.push_back(G1::generator() * Fr::random(rng));
  pts.push_back(G1());
  std::vector<G1Affine> out(pts.size());
  batch_normalize(pts, out);
  for (size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(out[i], pts[i].to_affine());
}

TEST(Curve, MsmMatchesNaiveSum) {
  std::mt19937_64 rng(23);
  for (size_t n : {0u, 1u, 7u, 8u, 33u, 300u}) {
    std::vector<G1Affine> bases(n);
    for (auto& b : bases) b = (G1::generator() * Fr::random(rng)).to_affine();
    auto scalars = testing::random_vector(rng, n);
    if (n > 3) {
      scalars[1] = Fr::zero();
      scalars[2] = -Fr::one();
      bases[3] = bases[0];
    }
    EXPECT_EQ(msm(scalars, bases), testing::naive_msm(scalars, bases)) << n;
  }
}

TEST(Curve, FixedBaseTableMatchesScalarMul) {
  std::mt19937_64 rng(24);
  const G1 base = G1::generator() * Fr::from_u64(77);
  const FixedBaseTable table(base);
  for (int i = 0; i < 20; ++i) {
    const Fr k = Fr::random(rng);
    EXPECT_EQ(table.mul(k), base * k);
  }
  EXPECT_TRUE(table.mul(Fr::zero()).is_identity());
}

TEST(Curve, HashToCurveIsDeterministicAndOnCurve) {
  const uint8_t msg[3] = {1, 2, 3};
  const G1Affine a = hash_to_curve("t", msg);
  EXPECT_TRUE(a.on_curve());
  EXPECT_FALSE(a.infinity);
  EXPECT_EQ(a, hash_to_curve("t", msg));
  EXPECT_FALSE(a == hash_to_curve("u", msg));
}

}  // namespace
}  // namespace streamzk
