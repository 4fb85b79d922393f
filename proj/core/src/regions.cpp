#include "peak/regions.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "peak/errors.hpp"

namespace peak {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLevelTolerance = 1e-12;
constexpr int kMaxIterations = 200;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double value_with(const GlobalMinimum& gm, std::size_t arm, double arm_log) {
  std::vector<double> logs = gm.log_capital;
  logs[arm] = arm_log;
  return log_mean_exp(logs);
}

// Summed derivative of the tied per-arm capitals at level q, scaled by a
// common positive factor exp(-shift) so that the ratio residual/slope is exact.
struct TiedSlope {
  double residual = 0.0;
  double slope = 0.0;
  double magnitude = 0.0;
};

TiedSlope tied_slope(const JointState& joint, const std::vector<char>& tied, double q) {
  const auto& cfg = joint.config();
  struct Term {
    double log_k, d1, d2;
  };
  std::vector<Term> terms;
  terms.reserve(joint.arms());
  double shift = -kInf;
  for (std::size_t b = 0; b < joint.arms(); ++b) {
    if (!tied[b]) continue;
    const auto t = capital_terms(joint.stream(b), cfg, q);
    if (t.degenerate) continue;
    terms.push_back({t.log_capital, t.d1, t.d2});
    shift = std::max(shift, t.log_capital);
  }
  TiedSlope out;
  for (const auto& t : terms) {
    const double k = std::exp(t.log_k - shift);
    out.residual += k * t.d1;
    out.magnitude += k * std::abs(t.d1);
    out.slope += k * (t.d2 + t.d1 * t.d1);
  }
  return out;
}

// Target plus every arm whose free minimizer lies above q.
std::vector<char> tied_above(std::size_t target, std::span<const double> free_min, double q) {
  std::vector<char> tied(free_min.size(), 0);
  for (std::size_t b = 0; b < free_min.size(); ++b) tied[b] = b == target || free_min[b] > q;
  return tied;
}

// Root of the tied residual on [lo, hi], whose ends have opposite signs.
double tied_root(const JointState& joint, const std::vector<char>& tied, double lo, double hi,
                 double start) {
  auto eval = [&](double q, double& f, double& df) {
    const auto s = tied_slope(joint, tied, q);
    f = s.residual;
    df = s.slope;
    return true;
  };
  return detail::safeguarded_root(eval, lo, hi, start, kLevelTolerance, kMaxIterations);
}

// BAI point at level q: the target sits at q, every other arm at its
// minimizer over [0, q].
RegionMinimum bai_at_level(const JointState& joint, std::size_t target, const GlobalMinimum& gm,
                           double q) {
  RegionMinimum out;
  out.point.resize(joint.arms());
  std::vector<double> logs(joint.arms());
  for (std::size_t b = 0; b < joint.arms(); ++b) {
    if (b != target && gm.point[b] <= q) {
      out.point[b] = gm.point[b];
      logs[b] = gm.log_capital[b];
      continue;
    }
    out.point[b] = b == target ? q : minimizer_on(joint.stream(b), joint.config(), 0.0, q, q);
    logs[b] = log_capital(joint.stream(b), joint.config(), out.point[b]);
  }
  out.log_value = log_mean_exp(logs);
  return out;
}

// Grid search of the level over the scan tables, then a Newton polish with
// the tied set read off the grid. Handles capitals with several basins.
RegionMinimum bai_from_scan(const JointState& joint, std::size_t target, const GlobalMinimum& gm) {
  const std::size_t w = joint.arms();
  const auto& cfg = joint.config();
  std::vector<std::span<const double>> tables(w);
  for (std::size_t b = 0; b < w; ++b) tables[b] = joint.stream(b).scan(cfg);
  std::vector<double> prefix(w, kInf);
  std::vector<std::size_t> prefix_at(w, 0);
  std::vector<double> logs(w);
  double best = kInf;
  std::size_t best_k = 0;
  std::vector<char> tied(w, 0);
  for (std::size_t k = 0; k < kScanPoints; ++k) {
    for (std::size_t b = 0; b < w; ++b) {
      if (tables[b][k] <= prefix[b]) {
        prefix[b] = tables[b][k];
        prefix_at[b] = k;
      }
      logs[b] = b == target ? tables[b][k] : prefix[b];
    }
    const double v = log_mean_exp(logs);
    if (v < best) {
      best = v;
      best_k = k;
      for (std::size_t b = 0; b < w; ++b) tied[b] = b == target || prefix_at[b] == k;
    }
  }
  constexpr double spacing = 1.0 / static_cast<double>(kScanPoints - 1);
  const double mid = static_cast<double>(best_k) * spacing;
  const double lo = best_k == 0 ? 0.0 : mid - spacing;
  const double hi = best_k + 1 == kScanPoints ? 1.0 : mid + spacing;
  const double r_mid = tied_slope(joint, tied, mid).residual;
  double q = mid;
  if (r_mid < 0.0 && hi > mid && tied_slope(joint, tied, hi).residual > 0.0) {
    q = tied_root(joint, tied, mid, hi, mid);
  } else if (r_mid > 0.0 && lo < mid && tied_slope(joint, tied, lo).residual < 0.0) {
    q = tied_root(joint, tied, lo, mid, mid);
  }
  auto out = bai_at_level(joint, target, gm, q);
  if (q != mid) {
    auto on_grid = bai_at_level(joint, target, gm, mid);
    if (on_grid.log_value < out.log_value) out = std::move(on_grid);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Log-barrier interior point for min f(z) s.t. C z <= d.

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Objective {
  virtual ~Objective() = default;
  // Returns false when f is not finite at z.
  virtual bool eval(const VectorXd& z, double& f, VectorXd& g, MatrixXd& h) const = 0;
  // Rescale so that f is O(1) near z; returns the factor the old f was multiplied by.
  virtual double rescale(const VectorXd& /*z*/) { return 1.0; }
};

bool slacks(const MatrixXd& c, const VectorXd& d, const VectorXd& z, VectorXd& out) {
  out = d - c * z;
  return (out.array() > 0.0).all();
}

double barrier_value(const Objective& obj, const MatrixXd& c, const VectorXd& d, double tau,
                     const VectorXd& z) {
  VectorXd s;
  if (!slacks(c, d, z, s)) return kInf;
  double f = 0.0;
  VectorXd g(z.size());
  MatrixXd h(z.size(), z.size());
  if (!obj.eval(z, f, g, h)) return kInf;
  return tau * f - s.array().log().sum();
}

// Centers at the given tau by damped Newton; z must be strictly feasible.
void center(const Objective& obj, const MatrixXd& c, const VectorXd& d, double tau, VectorXd& z) {
  const Eigen::Index n = z.size();
  VectorXd g(n);
  MatrixXd h(n, n);
  VectorXd s;
  for (int it = 0; it < 100; ++it) {
    double f = 0.0;
    slacks(c, d, z, s);
    if (!obj.eval(z, f, g, h)) return;
    const VectorXd inv = s.cwiseInverse();
    const VectorXd grad = tau * g + c.transpose() * inv;
    const MatrixXd hess = tau * h + c.transpose() * inv.cwiseAbs2().asDiagonal() * c;
    const VectorXd step = hess.ldlt().solve(-grad);
    const double decrement = -grad.dot(step);
    if (!(decrement > 1e-14)) return;

    const double phi0 = tau * f - s.array().log().sum();
    double t = 1.0;
    VectorXd trial;
    bool moved = false;
    for (int ls = 0; ls < 80; ++ls, t *= 0.5) {
      trial = z + t * step;
      const double phi = barrier_value(obj, c, d, tau, trial);
      if (phi <= phi0 - 0.25 * t * decrement) {
        moved = true;
        break;
      }
    }
    if (!moved) return;
    z = trial;
    if (decrement < 1e-12) return;
  }
}

// Runs the barrier path until constraints / tau < gap; `stop` may end early.
template <class Stop>
void barrier_path(Objective& obj, const MatrixXd& c, const VectorXd& d, VectorXd& z, double gap,
                  Stop stop) {
  const double n_c = static_cast<double>(c.rows());
  double tau = 1.0;
  for (int outer = 0; outer < 60; ++outer) {
    tau /= obj.rescale(z);
    center(obj, c, d, tau, z);
    if (stop(z)) return;
    if (n_c / tau < gap) return;
    tau *= 10.0;
  }
}

struct LinearObjective : Objective {
  Eigen::Index index;
  explicit LinearObjective(Eigen::Index i) : index(i) {}
  bool eval(const VectorXd& z, double& f, VectorXd& g, MatrixXd& h) const override {
    f = z[index];
    g.setZero();
    g[index] = 1.0;
    h.setZero();
    return true;
  }
};

struct JointObjective : Objective {
  const JointState& joint;
  double shift = 0.0;
  explicit JointObjective(const JointState& j) : joint(j) {}

  double log_value(const VectorXd& z) const {
    std::vector<double> logs(joint.arms());
    for (std::size_t a = 0; a < joint.arms(); ++a) {
      logs[a] = capital_terms(joint.stream(a), joint.config(), z[static_cast<Eigen::Index>(a)])
                    .log_capital;
    }
    return log_mean_exp(logs);
  }

  bool eval(const VectorXd& z, double& f, VectorXd& g, MatrixXd& h) const override {
    const double w = static_cast<double>(joint.arms());
    f = 0.0;
    h.setZero();
    for (std::size_t a = 0; a < joint.arms(); ++a) {
      const auto i = static_cast<Eigen::Index>(a);
      if (!(z[i] >= 0.0 && z[i] <= 1.0)) return false;
      const auto t = capital_terms(joint.stream(a), joint.config(), z[i]);
      if (t.degenerate) {
        g[i] = 0.0;
        continue;
      }
      const double k = std::exp(t.log_capital - shift) / w;
      f += k;
      g[i] = k * t.d1;
      h(i, i) = k * (t.d2 + t.d1 * t.d1);
    }
    return std::isfinite(f) && g.allFinite();
  }

  double rescale(const VectorXd& z) override {
    const double next = log_value(z);
    if (!std::isfinite(next)) return 1.0;
    const double factor = std::exp(shift - next);
    shift = next;
    return factor;
  }
};

}  // namespace

double RegionMinimum::value() const { return std::exp(log_value); }

GlobalMinimum global_minimum(const JointState& joint) {
  GlobalMinimum gm;
  gm.point.resize(joint.arms());
  gm.log_capital.resize(joint.arms());
  for (std::size_t a = 0; a < joint.arms(); ++a) {
    gm.point[a] = minimizer(joint.stream(a), joint.config());
    gm.log_capital[a] = log_capital(joint.stream(a), joint.config(), gm.point[a]);
  }
  return gm;
}

std::vector<double> global_minimizer(const JointState& joint) {
  return global_minimum(joint).point;
}

const GlobalMinimum& MinimumCache::update(const JointState& joint) {
  const std::size_t w = joint.arms();
  if (gm_.point.size() != w) {
    gm_.point.assign(w, 0.5);
    gm_.log_capital.assign(w, 0.0);
    seen_.assign(w, 0);
  }
  for (std::size_t a = 0; a < w; ++a) {
    const auto& s = joint.stream(a);
    if (s.size() == seen_[a]) continue;
    gm_.point[a] = minimizer(s, joint.config(), gm_.point[a]);
    gm_.log_capital[a] = log_capital(s, joint.config(), gm_.point[a]);
    seen_[a] = s.size();
  }
  return gm_;
}

std::vector<double> project_threshold(std::span<const double> m_star, const ThresholdBelow& r) {
  std::vector<double> out(m_star.begin(), m_star.end());
  out.at(r.arm) = std::min(out[r.arm], r.xi);
  return out;
}

std::vector<double> project_threshold(std::span<const double> m_star, const ThresholdAbove& r) {
  std::vector<double> out(m_star.begin(), m_star.end());
  out.at(r.arm) = std::max(out[r.arm], r.xi);
  return out;
}

RegionMinimum minimize_bai(const JointState& joint, std::size_t target) {
  return minimize_bai(joint, target, global_minimum(joint));
}

RegionMinimum minimize_bai(const JointState& joint, std::size_t target, const GlobalMinimum& gm,
                           double hint) {
  validate(BestArm{target}, joint.arms());
  const auto& free_min = gm.point;
  const double top = *std::max_element(free_min.begin(), free_min.end());
  if (free_min[target] >= top) return {free_min, log_mean_exp(gm.log_capital)};

  // Tied-level solve: the arms above the common level q sit at q with the
  // target. When every capital is convex the residual is nondecreasing in q,
  // nonpositive at the target's own minimizer and nonnegative at the largest.
  const double lo = free_min[target];
  const double hi = top;
  auto eval = [&](double q, double& f, double& df) {
    const auto s = tied_slope(joint, tied_above(target, free_min, q), q);
    f = s.residual;
    df = s.slope;
    return true;
  };
  const double q = detail::safeguarded_root(eval, lo, hi, hint, kLevelTolerance, kMaxIterations);

  RegionMinimum out;
  out.point.resize(joint.arms());
  std::vector<double> logs(joint.arms());
  for (std::size_t b = 0; b < joint.arms(); ++b) {
    if (b == target || free_min[b] > q) {
      out.point[b] = q;
      logs[b] = log_capital(joint.stream(b), joint.config(), q);
    } else {
      out.point[b] = free_min[b];
      logs[b] = gm.log_capital[b];
    }
  }
  out.log_value = log_mean_exp(logs);

  // Capitals with more than one basin can defeat the tied solve.
  bool single = true;
  for (std::size_t b = 0; b < joint.arms() && single; ++b) {
    single = joint.stream(b).scan_basins(joint.config()) == 1;
  }
  if (single) return out;
  auto scanned = bai_from_scan(joint, target, gm);
  if (scanned.log_value < out.log_value) return scanned;
  return out;
}

BaiDiagnostics bai_diagnostics(const JointState& joint, std::size_t target,
                               const RegionMinimum& solution) {
  const auto gm = global_minimum(joint);
  BaiDiagnostics d;
  d.level = solution.point.at(target);
  const double top = *std::max_element(gm.point.begin(), gm.point.end());
  if (gm.point[target] >= top) return d;
  for (std::size_t b = 0; b < joint.arms(); ++b) {
    if (b == target || gm.point[b] > d.level) ++d.tied;
  }
  const auto s = tied_slope(joint, tied_above(target, gm.point, d.level), d.level);
  d.normalized_residual = s.magnitude > 0.0 ? s.residual / s.magnitude : 0.0;
  return d;
}

RegionMinimum minimize_polytope(const JointState& joint, const Polytope& region) {
  validate(region, joint.arms());
  const auto w = static_cast<Eigen::Index>(joint.arms());
  const auto rows = static_cast<Eigen::Index>(region.constraints.size()) + 2 * w;

  MatrixXd g = MatrixXd::Zero(rows, w);
  VectorXd h(rows);
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(region.constraints.size()); ++j) {
    const auto& c = region.constraints[static_cast<std::size_t>(j)];
    for (Eigen::Index a = 0; a < w; ++a) g(j, a) = c.coeffs[static_cast<std::size_t>(a)];
    h[j] = c.bound;
  }
  const auto box = static_cast<Eigen::Index>(region.constraints.size());
  for (Eigen::Index a = 0; a < w; ++a) {
    g(box + a, a) = -1.0;  // -m_a <= 0
    h[box + a] = 0.0;
    g(box + w + a, a) = 1.0;  // m_a <= 1
    h[box + w + a] = 1.0;
  }

  // Unconstrained optimum already feasible: KKT holds with zero multipliers.
  const auto gm = global_minimum(joint);
  if (contains(region, gm.point, 0.0)) return {gm.point, log_mean_exp(gm.log_capital)};

  // Phase I: minimize s subject to G x - s <= h, s >= -1.
  MatrixXd c1 = MatrixXd::Zero(rows + 1, w + 1);
  c1.topLeftCorner(rows, w) = g;
  c1.block(0, w, rows, 1).setConstant(-1.0);
  c1(rows, w) = -1.0;
  VectorXd d1(rows + 1);
  d1.head(rows) = h;
  d1[rows] = 1.0;
  VectorXd z = VectorXd::Constant(w + 1, 0.5);
  z[w] = std::max(0.0, (g * z.head(w) - h).maxCoeff()) + 1.0;
  LinearObjective phase1(w);
  barrier_path(phase1, c1, d1, z, 1e-12, [&](const VectorXd& zz) { return zz[w] < -1e-3; });
  const double margin = z[w];
  if (margin > 1e-9) {
    throw InfeasibleRegion("polytope " + describe(region) + " has no point in [0,1]^W");
  }
  if (margin > -1e-12) h.array() += std::max(margin, 0.0) + 1e-10;  // nearly flat region

  VectorXd x = z.head(w);
  JointObjective phase2(joint);
  barrier_path(phase2, g, h, x, 1e-11, [](const VectorXd&) { return false; });

  RegionMinimum out;
  out.point.assign(x.data(), x.data() + x.size());
  for (double& v : out.point) v = std::clamp(v, 0.0, 1.0);
  std::vector<double> logs(joint.arms());
  for (std::size_t a = 0; a < joint.arms(); ++a) {
    logs[a] = log_capital(joint.stream(a), joint.config(), out.point[a]);
  }
  out.log_value = log_mean_exp(logs);
  return out;
}

namespace {

// Threshold regions constrain one coordinate to [lo, hi]. A clamped global
// minimizer is the answer for a single basin; otherwise the constrained
// one-dimensional minimizer decides.
RegionMinimum threshold_minimum(const JointState& joint, const GlobalMinimum& gm,
                                std::vector<double> p, std::size_t arm, double lo, double hi) {
  if (p[arm] == gm.point[arm]) return {std::move(p), log_mean_exp(gm.log_capital)};
  p[arm] = minimizer_on(joint.stream(arm), joint.config(), lo, hi, p[arm]);
  const double arm_log = log_capital(joint.stream(arm), joint.config(), p[arm]);
  return {std::move(p), value_with(gm, arm, arm_log)};
}

}  // namespace

RegionMinimum minimize_region(const JointState& joint, const Region& region) {
  if (std::holds_alternative<PointRegion>(region) || std::holds_alternative<Polytope>(region)) {
    return minimize_region(joint, region, GlobalMinimum{});
  }
  return minimize_region(joint, region, global_minimum(joint));
}

RegionMinimum minimize_region(const JointState& joint, const Region& region,
                              const GlobalMinimum& gm) {
  validate(region, joint.arms());
  return std::visit(
      overloaded{
          [&](const PointRegion& r) {
            return RegionMinimum{r.m, log_joint_capital(joint, r.m)};
          },
          [&](const ThresholdBelow& r) {
            return threshold_minimum(joint, gm, project_threshold(gm.point, r), r.arm, 0.0, r.xi);
          },
          [&](const ThresholdAbove& r) {
            return threshold_minimum(joint, gm, project_threshold(gm.point, r), r.arm, r.xi, 1.0);
          },
          [&](const BestArm& r) { return minimize_bai(joint, r.arm, gm); },
          [&](const Polytope& r) { return minimize_polytope(joint, r); },
      },
      region);
}

Decision step_region_test(TestTracker& tracker, const JointState& joint) {
  if (is_point(tracker.region)) return step_point_test(tracker, joint);
  if (tracker.decided_at) return Decision::Rejected;
  return tracker.record(minimize_region(joint, tracker.region).value(), joint.time());
}

Decision step_region_test(TestTracker& tracker, const JointState& joint, const GlobalMinimum& gm) {
  if (is_point(tracker.region)) return step_point_test(tracker, joint);
  if (tracker.decided_at) return Decision::Rejected;
  return tracker.record(minimize_region(joint, tracker.region, gm).value(), joint.time());
}

}  // namespace peak
