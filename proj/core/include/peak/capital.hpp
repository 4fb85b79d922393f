#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "peak/errors.hpp"

namespace peak {

/// Bet scaling for the single-stream capital process.
///
/// The per-step factor is 1 + (mu_prev - m)(x - m) / c. Nonnegativity of every
/// factor on [0,1] needs c >= 1/4; c = 1/4 exactly admits factors that hit
/// zero, after which the hypothesis can never be rejected.
struct StreamConfig {
  double c = 0.26;
  /// Factors at or below this are treated as zero (log-capital = -inf).
  double gamma_floor = 1e-300;

  /// Throws DomainError when c < 1/4 or gamma_floor is outside (0, 1e-12).
  void validate() const;
};

/// One observation and the running sample mean of everything before it.
/// The first record of a stream has no prior mean; `mu_prev` is NaN there and
/// the evaluation uses the hypothesis itself, which makes its factor exactly 1.
struct Observation {
  double mu_prev;
  double x;

  [[nodiscard]] bool is_first() const noexcept { return mu_prev != mu_prev; }
};

inline constexpr double kNoPriorMean = std::numeric_limits<double>::quiet_NaN();

namespace detail {

/// Multiplies factors in linear space and folds into a log accumulator
/// before the product leaves [1e-100, 1e100].
class LogProduct {
 public:
  void multiply(double factor) noexcept;
  [[nodiscard]] double value() const noexcept;

 private:
  double product_ = 1.0;
  double log_ = 0.0;
};

}  // namespace detail

/// Number of points in the coarse log-capital table kept by every stream
/// (spacing 1/256). K is not convex in general, so the minimizers use this
/// table to find every basin before polishing.
inline constexpr std::size_t kScanPoints = 257;

/// Observation history of one stream. Prefix means are frozen at observe()
/// time so every capital evaluation is a pure function of (records, m).
class StreamState {
 public:
  StreamState() = default;

  /// Appends x. Throws DomainError when x is outside [0,1].
  void observe(double x);

  [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }
  [[nodiscard]] bool empty() const noexcept { return records_.empty(); }
  [[nodiscard]] double sum() const noexcept { return sum_; }
  /// Sample mean; 0.5 for an empty stream.
  [[nodiscard]] double mean() const noexcept;
  [[nodiscard]] std::span<const Observation> records() const noexcept { return records_; }

  /// log K at i / (kScanPoints - 1), caught up lazily on the records added
  /// since the last call. Not safe to call concurrently on the same stream.
  [[nodiscard]] std::span<const double> scan(const StreamConfig& cfg) const;
  /// Number of local minima in the scan table; 1 for a single basin.
  [[nodiscard]] std::size_t scan_basins(const StreamConfig& cfg) const;

 private:
  struct Scan {
    double c = 0.0;
    double floor = 0.0;
    std::size_t seen = 0;
    std::vector<detail::LogProduct> acc;
    std::vector<char> dead;
    std::vector<double> logs;
    std::size_t basins = 1;
  };

  std::vector<Observation> records_;
  double sum_ = 0.0;
  mutable Scan scan_;
};

/// Log-capital together with the first two derivatives of log K in m.
struct CapitalTerms {
  double log_capital = 0.0;
  double d1 = 0.0;  ///< d/dm log K
  double d2 = 0.0;  ///< d^2/dm^2 log K
  bool degenerate = false;  ///< some factor <= gamma_floor; log_capital = -inf
};

/// K_t(m) = prod_i (1 + (mu_{i-1} - m)(x_i - m)/c), evaluated as exp(log K).
[[nodiscard]] double capital(const StreamState& state, const StreamConfig& cfg, double m);

/// sum_i log(1 + (mu_{i-1} - m)(x_i - m)/c); -inf once any factor falls to gamma_floor.
[[nodiscard]] double log_capital(const StreamState& state, const StreamConfig& cfg, double m);

/// Stationarity sum  sum_i (2m - mu_{i-1} - x_i) / (c + (mu_{i-1} - m)(x_i - m)).
/// Its sign is the sign of dK/dm. Throws DegenerateCapital on a nonpositive denominator.
[[nodiscard]] double dlog_capital(const StreamState& state, const StreamConfig& cfg, double m);

/// One pass computing log K, d log K and d^2 log K at m.
[[nodiscard]] CapitalTerms capital_terms(const StreamState& state, const StreamConfig& cfg, double m);

/// Global minimizer of K_t over [0,1]. Streams with at most one observation
/// have a flat capital and return 0.5. Ties go to the smaller m.
[[nodiscard]] double minimizer(const StreamState& state, const StreamConfig& cfg);

/// Same as minimizer(); `hint` is the Newton start when it falls inside the
/// winning cell, e.g. the previous step's minimizer.
[[nodiscard]] double minimizer(const StreamState& state, const StreamConfig& cfg, double hint);

/// Minimizer of K_t over [lo, hi] with 0 <= lo <= hi <= 1. Every local minimum
/// of the scan table inside the range, and each endpoint, is a candidate;
/// candidates are polished by safeguarded Newton and the lowest wins.
[[nodiscard]] double minimizer_on(const StreamState& state, const StreamConfig& cfg, double lo,
                                  double hi, double hint = -1.0);

/// Minimizer tolerances: bracket width and iteration cap.
inline constexpr double kMinimizerTolerance = 1e-10;
inline constexpr int kMinimizerMaxIterations = 200;

namespace detail {

/// log K over records[begin, end) without argument checks.
[[nodiscard]] double log_capital_range(std::span<const Observation> records, double c,
                                       double floor, double m) noexcept;

/// Per-step factor of one record at hypothesis m.
[[nodiscard]] inline double factor(const Observation& r, double c, double m) noexcept {
  if (r.is_first()) return 1.0;
  return 1.0 + (r.mu_prev - m) * (r.x - m) / c;
}

void check_unit_interval(double v, const char* what);

/// Root of an increasing-through-zero f on [lo, hi] with f(lo) < 0 < f(hi).
/// `eval(x, f, df)` returns false to stop at x (e.g. a degenerate capital).
/// Newton steps are taken while they stay in the bracket and shrink fast
/// enough; bisection otherwise.
template <class Eval>
double safeguarded_root(Eval eval, double lo, double hi, double start, double tol, int max_it) {
  double x = (start > lo && start < hi) ? start : 0.5 * (lo + hi);
  double step = hi - lo;
  double step_before = step;
  for (int it = 0; it < max_it; ++it) {
    double f = 0.0;
    double df = 0.0;
    if (!eval(x, f, df) || f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const bool newton_ok = df > 0.0 && ((x - hi) * df - f) * ((x - lo) * df - f) < 0.0 &&
                           std::abs(2.0 * f) <= std::abs(step_before * df);
    step_before = step;
    if (newton_ok) {
      step = f / df;
      x -= step;
    } else {
      step = 0.5 * (hi - lo);
      x = lo + step;
    }
    if (std::abs(step) < tol || hi - lo < tol) break;
  }
  return x;
}

}  // namespace detail

}  // namespace peak
