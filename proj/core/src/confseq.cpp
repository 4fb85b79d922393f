#include "peak/confseq.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace peak {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
}

double log_factor(const Observation& r, const StreamConfig& cfg, double m) {
  const double f = detail::factor(r, cfg.c, m);
  return f <= cfg.gamma_floor ? kNegInf : std::log(f);
}

// Shrinks [inside, outside] until it is shorter than the tolerance and returns
// the side still below the threshold.
template <class Inside>
double bisect(double inside, double outside, Inside is_inside) {
  while (std::abs(outside - inside) > kIntervalTolerance) {
    const double mid = 0.5 * (inside + outside);
    if (is_inside(mid)) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return inside;
}

}  // namespace

void Interval::intersect(double other_lo, double other_hi) noexcept {
  if (empty) return;
  lo = std::max(lo, std::clamp(other_lo, 0.0, 1.0));
  hi = std::min(hi, std::clamp(other_hi, 0.0, 1.0));
  if (lo > hi) empty = true;
}

// ---------------------------------------------------------------------------

PeakInterval::PeakInterval(StreamConfig cfg, double alpha)
    : cfg_(cfg), log_threshold_(-std::log(alpha)) {
  cfg_.validate();
  check_alpha(alpha);
}

const Interval& PeakInterval::update(const StreamState& state) {
  const auto records = state.records();
  if (records.size() < seen_) throw DomainError("stream shrank between interval updates");
  while (seen_ < records.size()) {
    const auto& r = records[seen_++];
    if (interval_.empty) continue;
    log_k_lo_ += log_factor(r, cfg_, interval_.lo);
    log_k_hi_ += log_factor(r, cfg_, interval_.hi);
    if (log_k_lo_ >= log_threshold_ || log_k_hi_ >= log_threshold_) {
      StreamState prefix;
      for (std::size_t i = 0; i < seen_; ++i) prefix.observe(records[i].x);
      refresh(prefix);
    }
  }
  return interval_;
}

void PeakInterval::refresh(const StreamState& state) {
  const double m_star = minimizer(state, cfg_, hint_);
  hint_ = m_star;
  const double anchor = std::clamp(m_star, interval_.lo, interval_.hi);
  auto inside = [&](double m) { return log_capital(state, cfg_, m) < log_threshold_; };
  if (!inside(anchor)) {
    interval_.empty = true;
    return;
  }
  if (log_k_lo_ >= log_threshold_) {
    interval_.lo = bisect(anchor, interval_.lo, inside);
    log_k_lo_ = log_capital(state, cfg_, interval_.lo);
  }
  if (log_k_hi_ >= log_threshold_) {
    interval_.hi = bisect(anchor, interval_.hi, inside);
    log_k_hi_ = log_capital(state, cfg_, interval_.hi);
  }
}

Interval peak_interval(const StreamState& state, const StreamConfig& cfg, double alpha) {
  PeakInterval ci(cfg, alpha);
  return ci.update(state);
}

Interval peak_level_set(const StreamState& state, const StreamConfig& cfg, double alpha) {
  check_alpha(alpha);
  const double thr = -std::log(alpha);
  auto inside = [&](double m) { return log_capital(state, cfg, m) < thr; };
  const double m_star = minimizer(state, cfg);
  Interval out;
  if (!inside(m_star)) {
    out.empty = true;
    return out;
  }
  out.lo = inside(0.0) ? 0.0 : bisect(m_star, 0.0, inside);
  out.hi = inside(1.0) ? 1.0 : bisect(m_star, 1.0, inside);
  return out;
}

// ---------------------------------------------------------------------------

PrPlH::PrPlH(double alpha) : alpha_(alpha) { check_alpha(alpha); }

double PrPlH::bet(std::size_t t, double alpha) {
  const double td = static_cast<double>(t);
  return std::min(std::sqrt(8.0 * std::log(2.0 / alpha) / (td * std::log(td + 1.0))), 1.0);
}

const Interval& PrPlH::update(double x) {
  detail::check_unit_interval(x, "observation");
  ++t_;
  const double lambda = bet(t_, alpha_);
  sum_lambda_ += lambda;
  sum_lambda_x_ += lambda * x;
  sum_lambda_sq_ += lambda * lambda;
  const double center = sum_lambda_x_ / sum_lambda_;
  const double radius = (std::log(2.0 / alpha_) + sum_lambda_sq_ / 8.0) / sum_lambda_;
  interval_.intersect(center - radius, center + radius);
  return interval_;
}

double EmpBernEstimates::next_bet(double alpha, double cap) const {
  const double n = static_cast<double>(t + 1);
  return std::min(std::sqrt(2.0 * std::log(2.0 / alpha) / (sigma2 * n * std::log(n + 1.0))), cap);
}

void EmpBernEstimates::observe(double x) {
  ++t;
  sum_x += x;
  const double td = static_cast<double>(t);
  mu_hat = (0.5 + sum_x) / (td + 1.0);
  sum_sq += (x - mu_hat) * (x - mu_hat);
  sigma2 = (0.25 + sum_sq) / (td + 1.0);
}

double psi_e(double lambda) { return (-std::log1p(-lambda) - lambda) / 4.0; }

EmpBern::EmpBern(double alpha) : alpha_(alpha) { check_alpha(alpha); }

const Interval& EmpBern::update(double x) {
  detail::check_unit_interval(x, "observation");
  const double lambda = est_.next_bet(alpha_);
  const double v = 4.0 * (x - est_.mu_hat) * (x - est_.mu_hat);
  est_.observe(x);
  sum_lambda_ += lambda;
  sum_lambda_x_ += lambda * x;
  sum_v_psi_ += v * psi_e(lambda);
  const double center = sum_lambda_x_ / sum_lambda_;
  const double radius = (std::log(2.0 / alpha_) + sum_v_psi_) / sum_lambda_;
  interval_.intersect(center - radius, center + radius);
  return interval_;
}

// ---------------------------------------------------------------------------

std::vector<double> hedged_bets(std::span<const double> history, double alpha) {
  check_alpha(alpha);
  std::vector<double> bets;
  bets.reserve(history.size());
  EmpBernEstimates est;
  for (double x : history) {
    bets.push_back(est.next_bet(alpha));
    est.observe(x);
  }
  return bets;
}

bool hedged_membership(std::span<const double> history, double m, double theta, double alpha) {
  const auto bets = hedged_bets(history, alpha);
  return hedged_membership(history, bets, m, theta, alpha);
}

bool hedged_membership(std::span<const double> history, std::span<const double> bets, double m,
                       double theta, double alpha) {
  detail::check_unit_interval(m, "hypothesis");
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0,1)");
  check_alpha(alpha);
  if (bets.size() != history.size()) throw DomainError("one bet per observation required");
  const double thr_plus = 1.0 / (alpha * theta);
  const double thr_minus = 1.0 / (alpha * (1.0 - theta));
  detail::ScaledProduct plus;
  detail::ScaledProduct minus;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double d = history[i] - m;
    const double fp = 1.0 + bets[i] * d;
    const double fm = 1.0 - bets[i] * d;
    assert(fp > 0.0 && fm > 0.0);
    plus.multiply(fp);
    minus.multiply(fm);
    if (plus.at_least(thr_plus) || minus.at_least(thr_minus)) return false;
  }
  return true;
}

std::vector<double> unit_grid(std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {0.5};
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

HedgedGrid::HedgedGrid(std::size_t grid_size, double alpha, double theta)
    : alpha_(alpha), theta_(theta), grid_(unit_grid(grid_size)) {
  check_alpha(alpha);
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in (0,1)");
  if (grid_size == 0) throw DomainError("hedged grid needs at least one point");
  plus_.assign(grid_.size(), {});
  minus_.assign(grid_.size(), {});
  rejected_.assign(grid_.size(), 0);
  interval_.lo = grid_.front();
  interval_.hi = grid_.back();
}

const Interval& HedgedGrid::update(double x) {
  detail::check_unit_interval(x, "observation");
  const double lambda = est_.next_bet(alpha_);
  est_.observe(x);
  if (interval_.empty) return interval_;
  const double thr_plus = 1.0 / (alpha_ * theta_);
  const double thr_minus = 1.0 / (alpha_ * (1.0 - theta_));
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (rejected_[i]) continue;
    const double d = x - grid_[i];
    plus_[i].multiply(1.0 + lambda * d);
    minus_[i].multiply(1.0 - lambda * d);
    if (plus_[i].at_least(thr_plus) || minus_[i].at_least(thr_minus)) rejected_[i] = 1;
  }
  std::size_t first = grid_.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (rejected_[i]) continue;
    first = std::min(first, i);
    last = i;
  }
  if (first == grid_.size()) {
    interval_.empty = true;
  } else {
    interval_.intersect(grid_[first], grid_[last]);
  }
  return interval_;
}

// ---------------------------------------------------------------------------

double agrapa_lambda(double mu_hat, double sigma2, double m, double l) {
  if (!(m > 0.0 && m < 1.0)) throw DomainError("AGRAPA needs m strictly inside (0,1)");
  if (!(l > 0.0 && l <= 1.0)) throw DomainError("AGRAPA truncation l must lie in (0,1]");
  const double d = mu_hat - m;
  const double raw = d / (sigma2 + d * d);
  return std::max(-l / (1.0 - m), std::min(l / m, raw));
}

double agrapa_lambda(const StreamState& state, double m, double l) {
  EmpBernEstimates est;
  for (const auto& r : state.records()) est.observe(r.x);
  return agrapa_lambda(est.mu_hat, est.sigma2, m, l);
}

Interval base_bound_thr(std::size_t n, double mu_hat, double alpha, std::size_t arms) {
  check_alpha(alpha);
  Interval out;
  if (n == 0) return out;
  const double nd = static_cast<double>(n);
  const double r =
      std::sqrt(std::log(4.0 * static_cast<double>(arms) * nd * nd / alpha) / (2.0 * nd));
  out.intersect(mu_hat - r, mu_hat + r);
  return out;
}

double lucb_radius(std::size_t t, std::size_t n, double alpha, std::size_t arms) {
  if (n == 0) return std::numeric_limits<double>::infinity();
  const double td = static_cast<double>(std::max<std::size_t>(t, 1));
  const double big = 405.5 * static_cast<double>(arms) * std::pow(td, 1.1) / alpha;
  return std::sqrt(std::log(big * std::log(big)) / (2.0 * static_cast<double>(n)));
}

Interval base_bound_bai(std::size_t t, std::size_t n, double mu_hat, double alpha,
                        std::size_t arms) {
  check_alpha(alpha);
  Interval out;
  if (n == 0) return out;
  const double r = lucb_radius(t, n, alpha, arms);
  out.intersect(mu_hat - r, mu_hat + r);
  return out;
}

}  // namespace peak
