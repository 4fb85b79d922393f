#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "peak/confseq.hpp"
#include "peak/distributions.hpp"

using namespace peak;

TEST(PeakInterval, EarlyTimes) {
  const StreamConfig cfg;
  StreamState s;
  auto iv = peak_interval(s, cfg, 0.05);
  EXPECT_EQ(iv.lo, 0.0);
  EXPECT_EQ(iv.hi, 1.0);
  s.observe(0.8);
  iv = peak_interval(s, cfg, 0.05);
  EXPECT_EQ(iv.lo, 0.0);
  EXPECT_EQ(iv.hi, 1.0);
}

// Endpoints against inversion of the running max on a 1e-4 grid.
TEST(PeakInterval, MatchesGridInversion) {
  std::mt19937_64 rng(200);
  std::bernoulli_distribution d(0.5);
  StreamState s;
  for (int i = 0; i < 200; ++i) s.observe(d(rng) ? 1.0 : 0.0);
  const StreamConfig cfg;
  const double thr = std::log(20.0);
  double lo = 2.0;
  double hi = -1.0;
  for (int k = 0; k <= 10000; ++k) {
    const double m = k * 1e-4;
    double run = 0.0;
    double acc = 0.0;
    const auto recs = s.records();
    for (const auto& r : recs) {
      acc += std::log(detail::factor(r, cfg.c, m));
      run = std::max(run, acc);
    }
    if (run < thr) {
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
  }
  const auto iv = peak_interval(s, cfg, 0.05);
  ASSERT_FALSE(iv.empty);
  EXPECT_NEAR(iv.lo, lo, 1e-3);
  EXPECT_NEAR(iv.hi, hi, 1e-3);
}

TEST(PeakInterval, IncrementalEqualsOneShot) {
  std::mt19937_64 rng(201);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const StreamConfig cfg;
  PeakInterval inc(cfg, 0.1);
  StreamState s;
  for (int i = 0; i < 150; ++i) {
    s.observe(u(rng) * 0.8);
    if (i % 3 == 0) inc.update(s);
  }
  inc.update(s);
  const auto one = peak_interval(s, cfg, 0.1);
  EXPECT_NEAR(inc.current().lo, one.lo, 1e-12);
  EXPECT_NEAR(inc.current().hi, one.hi, 1e-12);
}

TEST(PeakLevelSet, ContainsRunningInterval) {
  std::mt19937_64 rng(202);
  std::bernoulli_distribution d(0.3);
  StreamState s;
  for (int i = 0; i < 300; ++i) s.observe(d(rng) ? 1.0 : 0.0);
  const StreamConfig cfg;
  const auto run = peak_interval(s, cfg, 0.05);
  const auto now = peak_level_set(s, cfg, 0.05);
  EXPECT_LE(now.lo, run.lo + 1e-6);
  EXPECT_GE(now.hi, run.hi - 1e-6);
}

TEST(PrPlH, FirstBet) {
  EXPECT_EQ(PrPlH::bet(1, 0.05), 1.0);
  EXPECT_NEAR(PrPlH::bet(100, 0.05), std::sqrt(8.0 * std::log(40.0) / (100.0 * std::log(101.0))), 1e-15);
}

TEST(PrPlH, SymmetricCenter) {
  PrPlH ci(0.05);
  ci.update(0.5);
  const auto& iv = ci.update(0.5);
  EXPECT_NEAR(0.5 * (iv.lo + iv.hi), 0.5, 1e-12);
}

TEST(PrPlH, FromScratchRecomputation) {
  std::mt19937_64 rng(203);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(100);
  for (auto& x : xs) x = u(rng);
  PrPlH ci(0.05);
  double lo = 0.0;
  double hi = 1.0;
  for (std::size_t t = 1; t <= xs.size(); ++t) {
    ci.update(xs[t - 1]);
    double sl = 0.0;
    double slx = 0.0;
    double sl2 = 0.0;
    for (std::size_t i = 1; i <= t; ++i) {
      const double l = std::min(std::sqrt(8.0 * std::log(40.0) / (i * std::log(i + 1.0))), 1.0);
      sl += l;
      slx += l * xs[i - 1];
      sl2 += l * l;
    }
    const double r = (std::log(40.0) + sl2 / 8.0) / sl;
    lo = std::max(lo, std::clamp(slx / sl - r, 0.0, 1.0));
    hi = std::min(hi, std::clamp(slx / sl + r, 0.0, 1.0));
  }
  EXPECT_NEAR(ci.current().lo, lo, 1e-12);
  EXPECT_NEAR(ci.current().hi, hi, 1e-12);
}

TEST(EmpBern, FromScratchRecomputation) {
  Rng rng(204);
  const ArmDistribution beta{BetaDist{2.0, 3.0}};
  std::vector<double> xs(50);
  for (auto& x : xs) x = sample(beta, rng);
  EmpBern ci(0.05);
  for (double x : xs) ci.update(x);

  // Independent transcription of the recursions.
  double lo = 0.0;
  double hi = 1.0;
  double mu = 0.5;
  double sig = 0.25;
  double sum_x = 0.0;
  double sum_sq = 0.0;
  double sl = 0.0;
  double slx = 0.0;
  double svp = 0.0;
  for (std::size_t i = 1; i <= xs.size(); ++i) {
    const double n = static_cast<double>(i);
    const double l = std::min(std::sqrt(2.0 * std::log(40.0) / (sig * n * std::log(n + 1.0))), 0.5);
    const double v = 4.0 * (xs[i - 1] - mu) * (xs[i - 1] - mu);
    sum_x += xs[i - 1];
    mu = (0.5 + sum_x) / (n + 1.0);
    sum_sq += (xs[i - 1] - mu) * (xs[i - 1] - mu);
    sig = (0.25 + sum_sq) / (n + 1.0);
    sl += l;
    slx += l * xs[i - 1];
    svp += v * (-std::log(1.0 - l) - l) / 4.0;
    const double r = (std::log(40.0) + svp) / sl;
    lo = std::max(lo, std::clamp(slx / sl - r, 0.0, 1.0));
    hi = std::min(hi, std::clamp(slx / sl + r, 0.0, 1.0));
  }
  EXPECT_NEAR(ci.current().lo, lo, 1e-12);
  EXPECT_NEAR(ci.current().hi, hi, 1e-12);
}

TEST(Hedged, EmptyHistoryIsMember) {
  const std::vector<double> none;
  for (double m : {0.0, 0.3, 1.0}) EXPECT_TRUE(hedged_membership(none, m, 0.5, 0.05));
}

TEST(Hedged, ExtremeHypothesisRejected) {
  std::vector<double> ones(200, 1.0);
  EXPECT_FALSE(hedged_membership(ones, 0.1, 0.5, 0.05));
  EXPECT_TRUE(hedged_membership(ones, 1.0, 0.5, 0.05));
}

TEST(Hedged, GridMatchesPerPointEvaluation) {
  std::mt19937_64 rng(205);
  std::bernoulli_distribution d(0.4);
  std::vector<double> xs(100);
  for (auto& x : xs) x = d(rng) ? 1.0 : 0.0;
  HedgedGrid g(101, 0.05);
  for (double x : xs) g.update(x);
  const auto& pts = g.grid();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(g.member(i), hedged_membership(xs, pts[i], 0.5, 0.05)) << "m=" << pts[i];
  }
}

TEST(Hedged, GridShape) {
  const auto g = unit_grid(5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_DOUBLE_EQ(g[1], 0.25);
  EXPECT_THROW(HedgedGrid(0, 0.05), DomainError);
}

TEST(Agrapa, Cases) {
  EXPECT_EQ(agrapa_lambda(0.5, 0.1, 0.5), 0.0);
  EXPECT_NEAR(agrapa_lambda(0.8, 0.1, 0.5, 1.0), 0.3 / 0.19, 1e-12);
  EXPECT_NEAR(agrapa_lambda(0.8, 0.1, 0.5, 0.5), 1.0, 1e-12);
  // untruncated value above l/m clips
  EXPECT_NEAR(agrapa_lambda(0.9, 0.001, 0.2, 0.1), 0.5, 1e-12);
  EXPECT_NEAR(agrapa_lambda(0.0, 0.001, 0.8, 0.1), -0.5, 1e-12);
  EXPECT_THROW((void)agrapa_lambda(0.5, 0.1, 0.0), DomainError);
}

TEST(BaseBounds, Thr) {
  const auto none = base_bound_thr(0, 0.3, 0.05, 4);
  EXPECT_EQ(none.lo, 0.0);
  EXPECT_EQ(none.hi, 1.0);
  const auto iv = base_bound_thr(100, 0.5, 0.05, 4);
  const double r = std::sqrt(std::log(4.0 * 4.0 * 1e4 / 0.05) / 200.0);
  EXPECT_NEAR(iv.lo, 0.5 - r, 1e-14);
  EXPECT_NEAR(iv.hi, 0.5 + r, 1e-14);
}

TEST(BaseBounds, Bai) {
  const auto none = base_bound_bai(10, 0, 0.3, 0.05, 4);
  EXPECT_EQ(none.lo, 0.0);
  EXPECT_EQ(none.hi, 1.0);
  const double big = 405.5 * 4.0 * std::pow(100.0, 1.1) / 0.05;
  const double r = std::sqrt(std::log(big * std::log(big)) / 50.0);
  const auto iv = base_bound_bai(100, 25, 0.6, 0.05, 4);
  EXPECT_NEAR(iv.lo, std::max(0.0, 0.6 - r), 1e-14);
  EXPECT_NEAR(iv.hi, std::min(1.0, 0.6 + r), 1e-14);
  EXPECT_NEAR(lucb_radius(100, 25, 0.05, 4), r, 1e-14);
}

TEST(Interval, RunningIntersection) {
  Interval iv;
  iv.intersect(0.2, 0.9);
  iv.intersect(-1.0, 0.5);
  EXPECT_EQ(iv.lo, 0.2);
  EXPECT_EQ(iv.hi, 0.5);
  iv.intersect(0.6, 0.7);
  EXPECT_TRUE(iv.empty);
  EXPECT_FALSE(iv.contains(0.3));
}
