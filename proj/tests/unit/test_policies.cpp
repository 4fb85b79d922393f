#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "peak/confseq.hpp"
#include "peak/policies.hpp"

using namespace peak;

namespace {

ArmStats stats_with(const std::vector<double>& means, const std::vector<std::size_t>& pulls) {
  ArmStats s(means.size());
  for (std::size_t a = 0; a < means.size(); ++a) {
    s.pulls[a] = pulls[a];
    s.sums[a] = means[a] * static_cast<double>(pulls[a]);
    s.t += pulls[a];
  }
  return s;
}

std::vector<std::size_t> all_arms(std::size_t w) {
  std::vector<std::size_t> v(w);
  for (std::size_t a = 0; a < w; ++a) v[a] = a;
  return v;
}

}  // namespace

TEST(ArmStats, Record) {
  ArmStats s(2);
  s.record(1, 0.5);
  s.record(1, 1.0);
  EXPECT_EQ(s.t, 2u);
  EXPECT_DOUBLE_EQ(s.mean(1), 0.75);
  EXPECT_EQ(s.mean(0), 0.0);
}

TEST(Hdoc, UnpulledFirst) {
  auto s = stats_with({0.9, 0.1, 0.5}, {10, 0, 0});
  EXPECT_EQ(hdoc_select(s, all_arms(3)), 1u);
  const std::vector<std::size_t> active{0, 2};
  EXPECT_EQ(hdoc_select(s, active), 2u);
}

TEST(Hdoc, TiesGoToLowestIndex) {
  auto s = stats_with({0.5, 0.5, 0.5}, {10, 10, 10});
  EXPECT_EQ(hdoc_select(s, all_arms(3)), 0u);
}

TEST(Hdoc, EqualBonusesPickHigherMean) {
  auto s = stats_with({0.5, 0.6}, {100, 100});
  EXPECT_EQ(s.t, 200u);
  EXPECT_EQ(hdoc_select(s, all_arms(2)), 1u);
}

TEST(Hdoc, BonusCanOverrideMean) {
  auto s = stats_with({0.6, 0.55}, {1000, 5});
  const double b0 = 0.6 + std::sqrt(std::log(1005.0) / 2000.0);
  const double b1 = 0.55 + std::sqrt(std::log(1005.0) / 10.0);
  ASSERT_GT(b1, b0);
  EXPECT_EQ(hdoc_select(s, all_arms(2)), 1u);
}

TEST(Lucb, TwoArms) {
  auto s = stats_with({0.3, 0.7}, {5, 5});
  const auto [leader, challenger] = lucb_select(s, 0.05);
  EXPECT_EQ(leader, 1u);
  EXPECT_EQ(challenger, 0u);
}

TEST(Lucb, NeedsInitialization) {
  auto s = stats_with({0.3, 0.7, 0.1}, {5, 0, 5});
  EXPECT_THROW((void)lucb_select(s, 0.05), DomainError);
  EXPECT_EQ(first_unpulled(s, all_arms(3)), 1u);
  ArmStats one(1);
  one.record(0, 0.2);
  EXPECT_THROW((void)lucb_select(one, 0.05), DomainError);
}

TEST(Lucb, FourArmFormula) {
  const std::vector<double> mu{0.3, 0.62, 0.55, 0.4};
  const std::vector<std::size_t> n{40, 60, 10, 30};
  auto s = stats_with(mu, n);
  std::size_t challenger = 0;
  double best = -1.0;
  for (std::size_t a = 0; a < 4; ++a) {
    if (a == 1) continue;
    const double ucb = mu[a] + lucb_radius(s.t, n[a], 0.05, 4);
    if (ucb > best) {
      best = ucb;
      challenger = a;
    }
  }
  const auto [l, c] = lucb_select(s, 0.05);
  EXPECT_EQ(l, 1u);
  EXPECT_EQ(c, challenger);
}

TEST(EpsilonGreedy, SingleArm) {
  ArmStats s(1);
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(epsilon_greedy_select(s, rng, 0.5), 0u);
    s.record(0, 0.3);
  }
}

TEST(EpsilonGreedy, GreedyAfterInit) {
  auto s = stats_with({0.2, 0.8, 0.8}, {3, 3, 3});
  Rng rng(2);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(epsilon_greedy_select(s, rng, 0.0), 1u);
}

// Chi-square goodness of fit with 3 degrees of freedom; the 0.999 quantile is 16.27.
TEST(EpsilonGreedy, FullExplorationIsUniform) {
  auto s = stats_with({0.2, 0.9, 0.4, 0.5}, {3, 3, 3, 3});
  Rng rng(3);
  std::vector<double> counts(4, 0.0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) counts[epsilon_greedy_select(s, rng, 1.0)] += 1.0;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - n / 4.0) * (c - n / 4.0) / (n / 4.0);
  EXPECT_LT(chi2, 16.27);
}

TEST(Seeds, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}
