#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "robolog/metrics.hpp"

using namespace robolog;

TEST(Confusion, Examples) {
  EXPECT_EQ(confusion(std::vector{1, 0}, std::vector{1, 0}), (ConfusionCounts{1, 0, 1, 0}));
  EXPECT_EQ(confusion(std::vector{1, 1, 0, 0}, std::vector{0, 0, 1, 1}), (ConfusionCounts{0, 2, 0, 2}));
  EXPECT_EQ(confusion(std::vector{1, 1, 0, 0}, std::vector{1, 0, 0, 0}), (ConfusionCounts{1, 0, 2, 1}));
  EXPECT_THROW(confusion(std::vector{1}, std::vector{1, 0}), Error);
  EXPECT_THROW(confusion(std::vector<int>{}, std::vector<int>{}), Error);
}

TEST(Metrics, Perfect) {
  auto m = metrics(confusion(std::vector{1, 0, 1, 0, 0}, std::vector{1, 0, 1, 0, 0}));
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_EQ(m.f1, 1.0);
}

TEST(Metrics, HandEnumerated) {
  auto m = metrics(confusion(std::vector{1, 1, 0, 0}, std::vector{1, 0, 0, 0}));
  EXPECT_DOUBLE_EQ(m.accuracy, 0.75);
  EXPECT_NEAR(m.precision, 5.0 / 6.0, 1e-12);
  EXPECT_DOUBLE_EQ(m.recall, 0.75);
  // class 1: p=1, r=0.5, f1=2/3; class 0: p=2/3, r=1, f1=0.8
  EXPECT_NEAR(m.f1, (2.0 / 3.0 + 0.8) / 2.0, 1e-12);
  EXPECT_NEAR(m.f1, 0.7333, 1e-4);
  EXPECT_DOUBLE_EQ(m.binary_precision, 1.0);
  EXPECT_DOUBLE_EQ(m.binary_recall, 0.5);
}

TEST(Metrics, WeightedRecallIsAccuracy) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 2 + rng() % 199;
    std::vector<int> y(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng() & 1;
      p[i] = rng() & 1;
    }
    auto m = metrics(confusion(y, p));
    ASSERT_EQ(m.recall, m.accuracy);
  }
}

TEST(Roc, PerfectStaircase) {
  auto c = roc_curve(std::vector{0.9, 0.8, 0.2, 0.1}, std::vector{1, 1, 0, 0});
  const std::vector<RocPoint> want{{0, 0}, {0, 0.5}, {0, 1}, {0.5, 1}, {1, 1}};
  EXPECT_EQ(c, want);
  EXPECT_EQ(auc(c), 1.0);
}

TEST(Roc, AllTied) {
  auto c = roc_curve(std::vector{0.3, 0.3, 0.3, 0.3}, std::vector{1, 0, 0, 1});
  EXPECT_EQ(c, (std::vector<RocPoint>{{0, 0}, {1, 1}}));
  EXPECT_EQ(auc(c), 0.5);
}

TEST(Roc, ThreeOfFourPairs) {
  EXPECT_DOUBLE_EQ(roc_auc(std::vector{0.9, 0.4, 0.6, 0.1}, std::vector{1, 1, 0, 0}), 0.75);
}

TEST(Roc, Errors) {
  EXPECT_THROW(roc_curve(std::vector{0.1, 0.2}, std::vector{1, 1}), Error);
  EXPECT_THROW(roc_curve(std::vector{0.1}, std::vector{1, 0}), Error);
  EXPECT_THROW(auc(std::vector<RocPoint>{{0, 0}, {0.5, 0.7}}), Error);
  EXPECT_THROW(auc(std::vector<RocPoint>{{0, 0}, {0.6, 0.5}, {0.5, 0.8}, {1, 1}}), Error);
}

TEST(Roc, RandomSetsMonotoneAndMatchMannWhitney) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 50;
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = trial % 3 == 0 ? static_cast<double>(rng() % 4) : std::ldexp(static_cast<double>(rng() >> 11), -53);
      y[i] = static_cast<int>(i % 2);
    }
    auto c = roc_curve(s, y);
    for (std::size_t i = 1; i < c.size(); ++i) {
      ASSERT_GE(c[i].fpr, c[i - 1].fpr);
      ASSERT_GE(c[i].tpr, c[i - 1].tpr);
    }
    EXPECT_NEAR(auc(c), oracle::mann_whitney_auc(s, y), 1e-9);
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) e[i] = std::exp(s[i]);
    EXPECT_NEAR(roc_auc(e, y), auc(c), 1e-12);
  }
}
