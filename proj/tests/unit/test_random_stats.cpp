#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "provchain/random.hpp"
#include "provchain/stats.hpp"

using namespace provchain;

TEST(Rng, SameSeedSameSequence) {
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, SubstreamsAreIndependentOfDrawOrder) {
  Rng s3 = substream(42, 3);
  const double first = s3.uniform();
  Rng s0 = substream(42, 0);
  for (int i = 0; i < 1000; ++i) s0.uniform();
  EXPECT_EQ(substream(42, 3).uniform(), first);
  EXPECT_NE(substream(42, 4).uniform(), first);
}

TEST(Rng, UniformInUnitInterval) {
  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, BernoulliExtremesAreExact) {
  Rng r(3);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_TRUE(r.bernoulli(1.0));
    ASSERT_FALSE(r.bernoulli(0.0));
  }
}

TEST(LatencyDist, ConstantAlwaysReturnsMedian) {
  Rng r(1);
  auto d = LatencyDist::constant(265.0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(d.sample(r), 265.0);
  EXPECT_EQ(d.mean(), 265.0);
}

TEST(LatencyDist, LognormalSampleMeanMatchesClosedForm) {
  Rng r(11);
  auto d = LatencyDist::lognormal(50.0, 0.25);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += d.sample(r);
  EXPECT_NEAR(sum / n, 50.0 * std::exp(0.25 * 0.25 / 2.0), 0.2);
}

// Oracle: sort and index directly.
TEST(Percentile, NearestRankMatchesSortedIndex) {
  Rng r(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + r.next() % 200;
    std::vector<double> xs(n);
    for (auto& x : xs) x = r.uniform();
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    for (double q : {0.5, 0.95, 1.0}) {
      std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
      rank = std::max<std::size_t>(rank, 1);
      EXPECT_EQ(percentile_nearest_rank(xs, q), sorted[rank - 1]);
    }
  }
}

TEST(Percentile, SmallCases) {
  std::vector<double> xs = {3, 1, 2, 4};
  EXPECT_EQ(percentile_nearest_rank(xs, 0.5), 2);
  EXPECT_EQ(percentile_nearest_rank(xs, 0.95), 4);
  EXPECT_EQ(percentile_nearest_rank({}, 0.5), 0.0);
}

TEST(Summary, Fields) {
  std::vector<double> xs = {1, 2, 3, 4, 10};
  Summary s = summarize(xs);
  EXPECT_EQ(s.n, 5u);
  EXPECT_EQ(s.p50, 3);
  EXPECT_EQ(s.p95, 10);
  EXPECT_DOUBLE_EQ(s.mean, 4.0);
  EXPECT_EQ(s.max, 10);
}

TEST(BinomialSigma, MatchesFormula) {
  EXPECT_NEAR(binomial_sigma(0.208, 100000), 0.00128, 0.00001);
  EXPECT_EQ(binomial_sigma(1.0, 100), 0.0);
}
