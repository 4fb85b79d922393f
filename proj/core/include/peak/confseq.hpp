#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "peak/capital.hpp"

namespace peak {

namespace detail {

/// Product kept as p * 1e-150^e so long runs of small factors never underflow.
struct ScaledProduct {
  double p = 1.0;
  int e = 0;

  void multiply(double f) noexcept {
    p *= f;
    if (p < 1e-150) {
      p *= 1e150;
      ++e;
    } else if (e > 0 && p >= 1e150) {
      p *= 1e-150;
      --e;
    }
  }
  [[nodiscard]] bool at_least(double v) const noexcept { return e == 0 && p >= v; }
};

}  // namespace detail

/// Closed interval [lo, hi] inside [0,1]; `empty` once every m is excluded.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool empty = false;

  [[nodiscard]] double width() const noexcept { return empty ? 0.0 : hi - lo; }
  [[nodiscard]] bool contains(double m) const noexcept { return !empty && lo <= m && m <= hi; }
  /// Running intersection with another interval.
  void intersect(double other_lo, double other_hi) noexcept;
};

/// Endpoint bisection tolerance for the PEAK interval.
inline constexpr double kIntervalTolerance = 1e-6;

/// Incremental PEAK confidence sequence {m : max_{i<=t} K_i(m) < 1/alpha}.
///
/// Each update checks the current endpoints against the new capital; by
/// convexity the interval is untouched while both stay below 1/alpha, so a
/// full bisection only happens when an endpoint is crossed.
class PeakInterval {
 public:
  PeakInterval(StreamConfig cfg, double alpha);

  /// Folds in every record of `state` not yet seen. `state` must be the same
  /// stream, grown by appends only.
  const Interval& update(const StreamState& state);
  [[nodiscard]] const Interval& current() const noexcept { return interval_; }

 private:
  void refresh(const StreamState& state);

  StreamConfig cfg_;
  double log_threshold_;
  Interval interval_;
  std::size_t seen_ = 0;
  double log_k_lo_ = 0.0;
  double log_k_hi_ = 0.0;
  double hint_ = 0.5;
};

/// One-shot PEAK interval for a full stream (replays it step by step).
[[nodiscard]] Interval peak_interval(const StreamState& state, const StreamConfig& cfg,
                                     double alpha);

/// Unrejected set at the current time only: {m : K_t(m) < 1/alpha}.
[[nodiscard]] Interval peak_level_set(const StreamState& state, const StreamConfig& cfg,
                                      double alpha);

/// Predictable plug-in Hoeffding confidence sequence.
class PrPlH {
 public:
  explicit PrPlH(double alpha);
  const Interval& update(double x);
  [[nodiscard]] const Interval& current() const noexcept { return interval_; }
  [[nodiscard]] std::size_t time() const noexcept { return t_; }
  /// lambda_t = min(sqrt(8 log(2/alpha) / (t log(t+1))), 1).
  [[nodiscard]] static double bet(std::size_t t, double alpha);

 private:
  double alpha_;
  std::size_t t_ = 0;
  double sum_lambda_ = 0.0;
  double sum_lambda_x_ = 0.0;
  double sum_lambda_sq_ = 0.0;
  Interval interval_;
};

/// Running Emp-Bern mean and variance estimates with priors 1/2 and 1/4.
struct EmpBernEstimates {
  std::size_t t = 0;
  double sum_x = 0.0;
  double sum_sq = 0.0;
  double mu_hat = 0.5;
  double sigma2 = 0.25;

  /// Bet for the next observation: min(sqrt(2 log(2/alpha) / (sigma2 * t log(t+1))), cap).
  [[nodiscard]] double next_bet(double alpha, double cap = 0.5) const;
  void observe(double x);
};

/// psi_E(lambda) = (-log(1 - lambda) - lambda) / 4.
[[nodiscard]] double psi_e(double lambda);

/// Predictable plug-in empirical Bernstein confidence sequence.
class EmpBern {
 public:
  explicit EmpBern(double alpha);
  const Interval& update(double x);
  [[nodiscard]] const Interval& current() const noexcept { return interval_; }
  [[nodiscard]] const EmpBernEstimates& estimates() const noexcept { return est_; }

 private:
  double alpha_;
  EmpBernEstimates est_;
  double sum_lambda_ = 0.0;
  double sum_lambda_x_ = 0.0;
  double sum_v_psi_ = 0.0;
  Interval interval_;
};

/// Bets lambda_1..lambda_n of the empirical Bernstein plug-in rule for a history.
[[nodiscard]] std::vector<double> hedged_bets(std::span<const double> history, double alpha);

/// True iff max_{i<=t} max(theta k+_i(m), (1-theta) k-_i(m)) < 1/alpha.
[[nodiscard]] bool hedged_membership(std::span<const double> history, double m, double theta,
                                     double alpha);
/// Same, with bets precomputed by hedged_bets.
[[nodiscard]] bool hedged_membership(std::span<const double> history, std::span<const double> bets,
                                     double m, double theta, double alpha);

/// Evenly spaced grid of n points covering [0,1].
[[nodiscard]] std::vector<double> unit_grid(std::size_t n);

/// Hedged capital confidence set on a grid, updated one observation at a time.
/// The reported interval is the hull of the unrejected grid points.
class HedgedGrid {
 public:
  HedgedGrid(std::size_t grid_size, double alpha, double theta = 0.5);
  const Interval& update(double x);
  [[nodiscard]] const Interval& current() const noexcept { return interval_; }
  [[nodiscard]] const std::vector<double>& grid() const noexcept { return grid_; }
  [[nodiscard]] bool member(std::size_t i) const { return !rejected_.at(i); }

 private:
  double alpha_;
  double theta_;
  EmpBernEstimates est_;
  std::vector<double> grid_;
  std::vector<detail::ScaledProduct> plus_;
  std::vector<detail::ScaledProduct> minus_;
  std::vector<char> rejected_;
  Interval interval_;
};

/// AGRAPA bet max(-l/(1-m), min(l/m, (mu - m) / (sigma2 + (mu - m)^2))).
[[nodiscard]] double agrapa_lambda(double mu_hat, double sigma2, double m, double l = 1.0);
/// Same, with mu_hat and sigma2 from the Emp-Bern recursion over `state`.
[[nodiscard]] double agrapa_lambda(const StreamState& state, double m, double l = 1.0);

/// mu_hat +- sqrt(log(4 W n^2 / alpha) / (2n)), clipped; [0,1] when n = 0.
[[nodiscard]] Interval base_bound_thr(std::size_t n, double mu_hat, double alpha, std::size_t arms);

/// mu_hat +- sqrt(log(L log L) / (2n)) with L = 405.5 W t^1.1 / alpha; [0,1] when n = 0.
[[nodiscard]] Interval base_bound_bai(std::size_t t, std::size_t n, double mu_hat, double alpha,
                                      std::size_t arms);

/// sqrt(log(L log L) / (2n)) with L = 405.5 W t^1.1 / alpha.
[[nodiscard]] double lucb_radius(std::size_t t, std::size_t n, double alpha, std::size_t arms);

}  // namespace peak
