#include "peak/joint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace peak {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double step_log_factor(const Observation& r, const StreamConfig& cfg, double m) {
  const double f = detail::factor(r, cfg.c, m);
  return f <= cfg.gamma_floor ? kNegInf : std::log(f);
}

}  // namespace

JointState::JointState(std::size_t arms, StreamConfig cfg) : cfg_(cfg), streams_(arms) {
  if (arms == 0) throw DomainError("a joint state needs at least one arm");
  cfg_.validate();
}

void JointState::observe(std::size_t arm, double x) {
  if (arm >= streams_.size()) {
    throw std::out_of_range("arm " + std::to_string(arm) + " out of range for " +
                            std::to_string(streams_.size()) + " arms");
  }
  streams_[arm].observe(x);
  actions_.push_back(static_cast<std::uint32_t>(arm));
}

double log_mean_exp(std::span<const double> values) noexcept {
  double peak = kNegInf;
  for (double v : values) peak = std::max(peak, v);
  if (peak == kNegInf) return kNegInf;
  if (peak == std::numeric_limits<double>::infinity()) return peak;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - peak);
  return peak + std::log(acc / static_cast<double>(values.size()));
}

double log_joint_capital(const JointState& joint, std::span<const double> m) {
  if (m.size() != joint.arms()) {
    throw DomainError("hypothesis has " + std::to_string(m.size()) + " coordinates, expected " +
                      std::to_string(joint.arms()));
  }
  std::vector<double> logs(joint.arms());
  for (std::size_t a = 0; a < joint.arms(); ++a) {
    logs[a] = log_capital(joint.stream(a), joint.config(), m[a]);
  }
  return log_mean_exp(logs);
}

double joint_capital(const JointState& joint, std::span<const double> m) {
  return std::exp(log_joint_capital(joint, m));
}

double empirical_e_power(const JointState& joint, std::span<const double> m) {
  if (joint.time() == 0) throw DomainError("e-power needs at least one observation");
  return log_joint_capital(joint, m) / static_cast<double>(joint.time());
}

TestTracker::TestTracker(Region r, double a) : region(std::move(r)), alpha(a) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
}

Decision TestTracker::record(double value, std::size_t t) {
  if (value > running_extreme) running_extreme = value;
  if (!decided_at && running_extreme >= threshold()) decided_at = t;
  return decided_at ? Decision::Rejected : Decision::Undecided;
}

Decision step_point_test(TestTracker& tracker, const JointState& joint) {
  const auto* point = std::get_if<PointRegion>(&tracker.region);
  if (point == nullptr) throw DomainError("step_point_test needs a point hypothesis");
  const std::size_t w = joint.arms();
  if (tracker.arm_log_capital.empty()) {
    validate(tracker.region, w);
    tracker.arm_log_capital.assign(w, 0.0);
    tracker.arm_consumed.assign(w, 0);
  }
  const auto actions = joint.actions();
  const auto& cfg = joint.config();
  while (tracker.cursor < actions.size()) {
    const std::size_t arm = actions[tracker.cursor];
    const auto& rec = joint.stream(arm).records()[tracker.arm_consumed[arm]++];
    tracker.arm_log_capital[arm] += step_log_factor(rec, cfg, point->m[arm]);
    ++tracker.cursor;
    if (!tracker.decided_at) {
      const double e = std::exp(log_mean_exp(tracker.arm_log_capital));
      tracker.record(e, tracker.cursor);
    }
  }
  return tracker.decided_at ? Decision::Rejected : Decision::Undecided;
}

UnionTracker::UnionTracker(std::vector<double> hyp, double a) : m(std::move(hyp)), alpha(a) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0,1)");
  arm_max_log.assign(m.size(), 0.0);
  arm_crossed_at.assign(m.size(), std::nullopt);
  arm_log_capital.assign(m.size(), 0.0);
  arm_consumed.assign(m.size(), 0);
}

Decision union_test(UnionTracker& tracker, const JointState& joint) {
  const std::size_t w = joint.arms();
  if (tracker.m.size() != w) throw DomainError("union tracker dimension mismatch");
  validate(PointRegion{tracker.m}, w);
  const double threshold = static_cast<double>(w) / tracker.alpha;
  const auto actions = joint.actions();
  const auto& cfg = joint.config();
  while (tracker.cursor < actions.size()) {
    const std::size_t arm = actions[tracker.cursor];
    const auto& rec = joint.stream(arm).records()[tracker.arm_consumed[arm]++];
    tracker.arm_log_capital[arm] += step_log_factor(rec, cfg, tracker.m[arm]);
    ++tracker.cursor;
    tracker.arm_max_log[arm] = std::max(tracker.arm_max_log[arm], tracker.arm_log_capital[arm]);
    if (!tracker.arm_crossed_at[arm] && std::exp(tracker.arm_max_log[arm]) >= threshold) {
      tracker.arm_crossed_at[arm] = tracker.cursor;
    }
    if (!tracker.decided_at &&
        std::all_of(tracker.arm_crossed_at.begin(), tracker.arm_crossed_at.end(),
                    [](const auto& v) { return v.has_value(); })) {
      tracker.decided_at = tracker.cursor;
    }
  }
  return tracker.decided_at ? Decision::Rejected : Decision::Undecided;
}

}  // namespace peak
