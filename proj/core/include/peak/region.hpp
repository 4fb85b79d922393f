#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace peak {

/// Simple hypothesis m.
struct PointRegion {
  std::vector<double> m;
};

/// {m : m_arm < xi}. Rejecting it labels the arm as above the threshold.
struct ThresholdBelow {
  std::size_t arm = 0;
  double xi = 0.5;
};

/// {m : m_arm >= xi}. Rejecting it labels the arm as below the threshold.
struct ThresholdAbove {
  std::size_t arm = 0;
  double xi = 0.5;
};

/// {m : m_arm >= m_b for every b}.
struct BestArm {
  std::size_t arm = 0;
};

/// coeffs . m <= bound
struct LinearConstraint {
  std::vector<double> coeffs;
  double bound = 0.0;
};

/// Intersection of half-spaces with [0,1]^W.
struct Polytope {
  std::vector<LinearConstraint> constraints;
};

/// A composite hypothesis in [0,1]^W. Every variant is implicitly intersected
/// with the unit box; minimization is over the closure.
using Region = std::variant<PointRegion, ThresholdBelow, ThresholdAbove, BestArm, Polytope>;

/// Throws DomainError on out-of-range arms, thresholds, coordinates or
/// constraint lengths for a W-armed problem.
void validate(const Region& region, std::size_t arms);

/// Closure membership with slack `tol` on every constraint.
[[nodiscard]] bool contains(const Region& region, std::span<const double> m, double tol = 1e-9);

[[nodiscard]] bool is_point(const Region& region) noexcept;

/// Text form used by the CLI, replay tool and checkpoints:
///   point:0.2,0.7   thr-below:ARM:XI   thr-above:ARM:XI   bai:ARM
///   poly:1,-1<=0;0,1<=0.8
/// Doubles are written with 17 significant digits so parse(describe(r)) == r.
[[nodiscard]] std::string describe(const Region& region);

/// Inverse of describe(). Throws DomainError on malformed text.
[[nodiscard]] Region parse_region(std::string_view text);

}  // namespace peak
