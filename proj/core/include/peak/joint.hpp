#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "peak/capital.hpp"
#include "peak/region.hpp"

namespace peak {

/// W independent streams observed one (arm, x) pair at a time.
///
/// The per-arm capital K_t^a only moves when arm a is pulled; the joint
/// capital E_t(m) is the average of the W per-arm capitals.
class JointState {
 public:
  JointState(std::size_t arms, StreamConfig cfg);

  /// Throws std::out_of_range for a bad arm and DomainError for x outside [0,1].
  void observe(std::size_t arm, double x);

  [[nodiscard]] std::size_t arms() const noexcept { return streams_.size(); }
  /// Total number of observations t.
  [[nodiscard]] std::size_t time() const noexcept { return actions_.size(); }
  [[nodiscard]] const StreamConfig& config() const noexcept { return cfg_; }
  [[nodiscard]] const StreamState& stream(std::size_t arm) const { return streams_.at(arm); }
  [[nodiscard]] std::size_t pulls(std::size_t arm) const { return streams_.at(arm).size(); }
  /// Arm pulled at each time step, in order.
  [[nodiscard]] std::span<const std::uint32_t> actions() const noexcept { return actions_; }

 private:
  StreamConfig cfg_;
  std::vector<StreamState> streams_;
  std::vector<std::uint32_t> actions_;
};

/// E_t(m) = (1/W) sum_a K_t^a(m_a).
[[nodiscard]] double joint_capital(const JointState& joint, std::span<const double> m);

/// log E_t(m), finite for much longer streams than joint_capital.
[[nodiscard]] double log_joint_capital(const JointState& joint, std::span<const double> m);

/// log((1/W) sum_a exp(v_a)) without overflow.
[[nodiscard]] double log_mean_exp(std::span<const double> values) noexcept;

/// log(E_t(m)) / t, a diagnostic estimate of the e-power. Requires t >= 1.
[[nodiscard]] double empirical_e_power(const JointState& joint, std::span<const double> m);

enum class Decision { Undecided, Rejected };

/// One sequential test in flight: a region, a level and the running maximum
/// of the statistic compared against 1/alpha. Decisions are absorbing.
struct TestTracker {
  TestTracker(Region region, double alpha);

  Region region;
  double alpha;
  /// Largest statistic seen so far; starts at E_0 = 1.
  double running_extreme = 1.0;
  /// Time index (number of observations) of the first crossing.
  std::optional<std::size_t> decided_at;

  /// Incremental per-arm log-capitals for point hypotheses.
  std::size_t cursor = 0;
  std::vector<double> arm_log_capital;
  std::vector<std::size_t> arm_consumed;

  [[nodiscard]] double threshold() const noexcept { return 1.0 / alpha; }
  [[nodiscard]] bool rejected() const noexcept { return decided_at.has_value(); }
  /// Folds a statistic observed at time t into the running maximum.
  Decision record(double value, std::size_t t);
};

/// PEAK point test: rejects m at the first time max_{i<=t} E_i(m) >= 1/alpha.
/// Every intermediate time since the previous call is visited, so the running
/// maximum is exact regardless of call cadence.
Decision step_point_test(TestTracker& tracker, const JointState& joint);

/// Union-bound comparator: each arm's K_t^a(m_a) against W/alpha.
struct UnionTracker {
  UnionTracker(std::vector<double> m, double alpha);

  std::vector<double> m;
  double alpha;
  std::vector<double> arm_max_log;
  std::vector<std::optional<std::size_t>> arm_crossed_at;
  std::optional<std::size_t> decided_at;

  std::size_t cursor = 0;
  std::vector<double> arm_log_capital;
  std::vector<std::size_t> arm_consumed;
};

/// Rejects once every arm's running max of K^a has reached W/alpha.
Decision union_test(UnionTracker& tracker, const JointState& joint);

}  // namespace peak
