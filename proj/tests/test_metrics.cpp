#include <gtest/gtest.h>

#include <random>

#include "gls/metrics.hpp"

using namespace gls;

namespace {

std::vector<BinaryLabel> labels(std::initializer_list<int> v) {
  std::vector<BinaryLabel> out;
  for (int x : v) out.emplace_back(x);
  return out;
}

// Pairwise definition: P(score_pos > score_neg) + 0.5 P(tie).
double brute_force_auc(const std::vector<double>& s, const std::vector<BinaryLabel>& y) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i].value() != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j].value() != 0) continue;
      pairs += 1.0;
      wins += s[i] > s[j] ? 1.0 : s[i] == s[j] ? 0.5 : 0.0;
    }
  }
  return wins / pairs;
}

}  // namespace

TEST(Auc, Examples) {
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.8, 0.4, 0.6, 0.3}, labels({1, 0, 1, 0})), 1.0);
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.1, 0.9}, labels({1, 0})), 0.0);
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.5, 0.5, 0.5}, labels({1, 0, 1})), 0.5);
  // positives {0.3, 0.1}, negatives {0.2, 0.4}: one winning pair of four
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{0.3, 0.2, 0.4, 0.1}, labels({1, 0, 0, 1})), 0.25);
}

TEST(Auc, RejectsDegenerateInput) {
  EXPECT_THROW(auc(std::vector<double>{0.1, 0.2}, labels({1, 1})), DomainError);
  EXPECT_THROW(auc(std::vector<double>{0.1}, labels({1, 0})), DomainError);
  EXPECT_THROW(auc(std::vector<double>{0.1, std::nan("")}, labels({1, 0})), DomainError);
  EXPECT_THROW(auc(std::vector<double>{}, labels({})), DomainError);
}

TEST(Auc, MatchesBruteForceWithTies) {
  std::mt19937_64 gen(123);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + gen() % 60;
    std::vector<double> s(n);
    std::vector<BinaryLabel> y;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(gen() % 10);  // coarse values force ties
      y.emplace_back(static_cast<int>(gen() % 2));
    }
    y[0] = BinaryLabel(0);
    y[1] = BinaryLabel(1);
    EXPECT_NEAR(auc(s, y), brute_force_auc(s, y), 1e-12);
  }
}

TEST(Auc, InvariantUnderMonotoneTransform) {
  std::vector<double> s = {0.1, 0.7, 0.3, 0.9, 0.5};
  const auto y = labels({0, 1, 0, 1, 1});
  std::vector<double> t;
  for (double v : s) t.push_back(std::exp(3.0 * v) - 7.0);
  EXPECT_DOUBLE_EQ(auc(s, y), auc(t, y));
}

TEST(MeanGroupAuc, AveragesPerGroupAndSkipsSingleClassGroups) {
  const std::vector<double> s = {0.9, 0.1, 0.2, 0.8, 0.5, 0.6};
  const auto y = labels({1, 0, 1, 0, 1, 1});
  const std::vector<int> g = {0, 0, 1, 1, 2, 2};
  // group 0 -> 1.0, group 1 -> 0.0, group 2 has only positives.
  EXPECT_DOUBLE_EQ(mean_group_auc(s, y, g), 0.5);
}
