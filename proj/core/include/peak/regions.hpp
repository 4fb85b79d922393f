#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "peak/joint.hpp"
#include "peak/region.hpp"

namespace peak {

/// Per-arm minimizers of the separable objective E_t and the per-arm
/// log-capital at those minimizers.
struct GlobalMinimum {
  std::vector<double> point;
  std::vector<double> log_capital;
};

/// Minimizer of E_t over a region, with log E_t at that point.
struct RegionMinimum {
  std::vector<double> point;
  double log_value = 0.0;

  [[nodiscard]] double value() const;
};

[[nodiscard]] GlobalMinimum global_minimum(const JointState& joint);

/// argmin of E_t over [0,1]^W; coordinate a is minimizer() of stream a.
[[nodiscard]] std::vector<double> global_minimizer(const JointState& joint);

/// Recomputes only the arms whose stream grew since the previous update.
class MinimumCache {
 public:
  const GlobalMinimum& update(const JointState& joint);
  [[nodiscard]] const GlobalMinimum& current() const noexcept { return gm_; }

 private:
  GlobalMinimum gm_;
  std::vector<std::size_t> seen_;
};

/// Clamps coordinate `arm` to min(m*_arm, xi) (below) or max(m*_arm, xi) (above).
[[nodiscard]] std::vector<double> project_threshold(std::span<const double> m_star,
                                                    const ThresholdBelow& region);
[[nodiscard]] std::vector<double> project_threshold(std::span<const double> m_star,
                                                    const ThresholdAbove& region);

/// Minimum of E_t over {m : m_target >= m_b for all b}.
///
/// Arms whose global minimizer lies at or above the common level q are tied at
/// q together with the target; q is the root of the summed derivative of the
/// tied per-arm capitals.
[[nodiscard]] RegionMinimum minimize_bai(const JointState& joint, std::size_t target);
/// `hint` is a starting level for the root search, e.g. the previous step's level.
[[nodiscard]] RegionMinimum minimize_bai(const JointState& joint, std::size_t target,
                                         const GlobalMinimum& gm, double hint = -1.0);

/// Common tied level q of a BAI solution and the normalized stationarity
/// residual sum_{tied} dK^a/dm(q) / sum_{tied} |dK^a/dm(q)| (0 when nothing is tied).
struct BaiDiagnostics {
  double level = 0.0;
  double normalized_residual = 0.0;
  std::size_t tied = 0;
};
[[nodiscard]] BaiDiagnostics bai_diagnostics(const JointState& joint, std::size_t target,
                                             const RegionMinimum& solution);

/// Minimum of E_t over a convex polytope intersected with [0,1]^W, by a
/// log-barrier interior-point method. Throws InfeasibleRegion when empty.
[[nodiscard]] RegionMinimum minimize_polytope(const JointState& joint, const Polytope& region);

/// Dispatches on the region kind. Throws InfeasibleRegion for empty polytopes.
[[nodiscard]] RegionMinimum minimize_region(const JointState& joint, const Region& region);
[[nodiscard]] RegionMinimum minimize_region(const JointState& joint, const Region& region,
                                            const GlobalMinimum& gm);

/// Region test: v_t = min_{m in R} E_t(m) is folded into the tracker's running
/// maximum; the region is rejected once that maximum reaches 1/alpha.
Decision step_region_test(TestTracker& tracker, const JointState& joint);
Decision step_region_test(TestTracker& tracker, const JointState& joint, const GlobalMinimum& gm);

}  // namespace peak
