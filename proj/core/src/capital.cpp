#include "peak/capital.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace peak {

namespace detail {

void check_unit_interval(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream os;
    os << what << " must lie in [0,1], got " << v;
    throw DomainError(os.str());
  }
}

void LogProduct::multiply(double factor) noexcept {
  if (factor < 1e-100) {
    log_ += std::log(factor);
    return;
  }
  product_ *= factor;
  if (product_ < 1e-100 || product_ > 1e100) {
    log_ += std::log(product_);
    product_ = 1.0;
  }
}

double LogProduct::value() const noexcept { return log_ + std::log(product_); }

double log_capital_range(std::span<const Observation> records, double c, double floor,
                         double m) noexcept {
  LogProduct acc;
  for (const auto& r : records) {
    const double f = factor(r, c, m);
    if (f <= floor) return -std::numeric_limits<double>::infinity();
    acc.multiply(f);
  }
  return acc.value();
}

}  // namespace detail

void StreamConfig::validate() const {
  if (!(c >= 0.25)) {
    std::ostringstream os;
    os << "bet scaling c must be >= 1/4, got " << c;
    throw DomainError(os.str());
  }
  if (!(gamma_floor > 0.0 && gamma_floor < 1e-12)) {
    std::ostringstream os;
    os << "gamma_floor must lie in (0, 1e-12), got " << gamma_floor;
    throw DomainError(os.str());
  }
}

void StreamState::observe(double x) {
  detail::check_unit_interval(x, "observation");
  const double prev = records_.empty() ? kNoPriorMean : sum_ / static_cast<double>(records_.size());
  records_.push_back({prev, x});
  sum_ += x;
}

double StreamState::mean() const noexcept {
  return records_.empty() ? 0.5 : sum_ / static_cast<double>(records_.size());
}

double log_capital(const StreamState& state, const StreamConfig& cfg, double m) {
  cfg.validate();
  detail::check_unit_interval(m, "hypothesis");
  return detail::log_capital_range(state.records(), cfg.c, cfg.gamma_floor, m);
}

double capital(const StreamState& state, const StreamConfig& cfg, double m) {
  return std::exp(log_capital(state, cfg, m));
}

double dlog_capital(const StreamState& state, const StreamConfig& cfg, double m) {
  cfg.validate();
  detail::check_unit_interval(m, "hypothesis");
  double sum = 0.0;
  for (const auto& r : state.records()) {
    if (r.is_first()) continue;
    const double q = cfg.c + (r.mu_prev - m) * (r.x - m);
    if (!(q > 0.0)) {
      std::ostringstream os;
      os << "capital factor vanishes at m = " << m;
      throw DegenerateCapital(os.str());
    }
    sum += (2.0 * m - r.mu_prev - r.x) / q;
  }
  return sum;
}

CapitalTerms capital_terms(const StreamState& state, const StreamConfig& cfg, double m) {
  CapitalTerms out;
  detail::LogProduct acc;
  const double c = cfg.c;
  for (const auto& r : state.records()) {
    if (r.is_first()) continue;
    const double q = c + (r.mu_prev - m) * (r.x - m);
    if (q <= cfg.gamma_floor * c) {
      out.degenerate = true;
      out.log_capital = -std::numeric_limits<double>::infinity();
      return out;
    }
    const double s = 2.0 * m - r.mu_prev - r.x;
    const double inv = 1.0 / q;
    acc.multiply(q / c);
    out.d1 += s * inv;
    out.d2 += (2.0 * q - s * s) * inv * inv;
  }
  out.log_capital = acc.value();
  return out;
}

std::span<const double> StreamState::scan(const StreamConfig& cfg) const {
  auto& sc = scan_;
  if (sc.acc.size() != kScanPoints || sc.c != cfg.c || sc.floor != cfg.gamma_floor) {
    sc = Scan{};
    sc.c = cfg.c;
    sc.floor = cfg.gamma_floor;
    sc.acc.resize(kScanPoints);
    sc.dead.assign(kScanPoints, 0);
    sc.logs.assign(kScanPoints, 0.0);
  }
  if (sc.seen == records_.size()) return sc.logs;
  constexpr double step = 1.0 / static_cast<double>(kScanPoints - 1);
  for (; sc.seen < records_.size(); ++sc.seen) {
    const auto& r = records_[sc.seen];
    if (r.is_first()) continue;
    for (std::size_t i = 0; i < kScanPoints; ++i) {
      const double f = detail::factor(r, sc.c, static_cast<double>(i) * step);
      if (f <= sc.floor) sc.dead[i] = 1;
      else sc.acc[i].multiply(f);
    }
  }
  for (std::size_t i = 0; i < kScanPoints; ++i) {
    sc.logs[i] = sc.dead[i] ? -std::numeric_limits<double>::infinity() : sc.acc[i].value();
  }
  // strict descents followed by a rise; plateaus count once
  sc.basins = 0;
  bool falling = true;
  for (std::size_t i = 1; i < kScanPoints; ++i) {
    if (sc.logs[i] < sc.logs[i - 1]) {
      falling = true;
    } else if (sc.logs[i] > sc.logs[i - 1] && falling) {
      ++sc.basins;
      falling = false;
    }
  }
  if (falling) ++sc.basins;
  return sc.logs;
}

std::size_t StreamState::scan_basins(const StreamConfig& cfg) const {
  (void)scan(cfg);
  return scan_.basins;
}

double minimizer(const StreamState& state, const StreamConfig& cfg) {
  return minimizer(state, cfg, -1.0);
}

double minimizer(const StreamState& state, const StreamConfig& cfg, double hint) {
  if (state.size() <= 1) {
    cfg.validate();
    return 0.5;
  }
  return minimizer_on(state, cfg, 0.0, 1.0, hint);
}

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Root of d log K on [a, b] given the signs at the ends.
double polish(const StreamState& state, const StreamConfig& cfg, double a, double b, double hint) {
  auto eval = [&](double m, double& f, double& df) {
    const auto t = capital_terms(state, cfg, m);
    if (t.degenerate) return false;  // K(m) = 0 is a global minimum
    f = t.d1;
    df = t.d2;
    return true;
  };
  return detail::safeguarded_root(eval, a, b, hint, kMinimizerTolerance, kMinimizerMaxIterations);
}

}  // namespace

double minimizer_on(const StreamState& state, const StreamConfig& cfg, double lo, double hi,
                    double hint) {
  cfg.validate();
  detail::check_unit_interval(lo, "lower bound");
  detail::check_unit_interval(hi, "upper bound");
  if (lo > hi) throw DomainError("empty minimization range");
  if (lo == hi || state.size() <= 1) return lo == hi ? lo : std::clamp(0.5, lo, hi);

  const auto table = state.scan(cfg);
  constexpr double spacing = 1.0 / static_cast<double>(kScanPoints - 1);

  // Nodes: lo, the grid points strictly inside, hi. Grid values come from the
  // table; off-grid ends are evaluated.
  std::vector<double> at;
  std::vector<double> val;
  auto add = [&](double m) {
    const double k = m / spacing;
    const double r = std::round(k);
    if (std::abs(k - r) < 1e-9) {
      at.push_back(r * spacing);
      val.push_back(table[static_cast<std::size_t>(r)]);
    } else {
      at.push_back(m);
      val.push_back(capital_terms(state, cfg, m).log_capital);
    }
  };
  add(lo);
  for (std::size_t i = static_cast<std::size_t>(std::floor(lo / spacing)) + 1; i < kScanPoints; ++i) {
    const double g = static_cast<double>(i) * spacing;
    if (g >= hi) break;
    if (g > lo) add(g);
  }
  add(hi);
  at.front() = lo;
  at.back() = hi;

  auto slope = [&](double m, bool& dead) {
    const auto t = capital_terms(state, cfg, m);
    dead = t.degenerate;
    return t.d1;
  };

  // Each node that is no higher than its neighbours owns a basin; the sign of
  // the slope there says which neighbouring cell holds the bottom.
  std::vector<double> found;
  const std::size_t n = at.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (j > 0 && val[j] > val[j - 1]) continue;
    if (j + 1 < n && val[j] > val[j + 1]) continue;
    bool dead = false;
    const double d = slope(at[j], dead);
    if (dead || d == 0.0) {
      found.push_back(at[j]);
    } else if (d < 0.0) {
      found.push_back(j + 1 < n ? polish(state, cfg, at[j], at[j + 1], hint) : at[j]);
    } else {
      found.push_back(j > 0 ? polish(state, cfg, at[j - 1], at[j], hint) : at[j]);
    }
  }
  if (found.size() == 1) return found.front();

  double best_m = found.front();
  double best = kInfinity;
  for (double m : found) {
    const double v = capital_terms(state, cfg, m).log_capital;
    if (v < best || (v == best && m < best_m)) {
      best = v;
      best_m = m;
    }
  }
  return best_m;
}

}  // namespace peak
