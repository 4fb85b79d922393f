#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace peak {

/// Per-arm pull counts and empirical means, plus the global time t.
struct ArmStats {
  std::vector<std::size_t> pulls;
  std::vector<double> sums;
  std::size_t t = 0;

  explicit ArmStats(std::size_t arms = 0) : pulls(arms, 0), sums(arms, 0.0) {}

  [[nodiscard]] std::size_t arms() const noexcept { return pulls.size(); }
  /// Empirical mean; 0 for an unpulled arm.
  [[nodiscard]] double mean(std::size_t a) const;
  void record(std::size_t a, double x);
};

using Rng = std::mt19937_64;

/// splitmix64 step, used to derive independent stream seeds from one root.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t& state) noexcept;
/// Seed for stream `index` under `root`.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept;

/// Lowest-index unpulled arm among `active`, or arms() when all are pulled.
[[nodiscard]] std::size_t first_unpulled(const ArmStats& stats, std::span<const std::size_t> active);

/// argmax over active arms of mu_hat + sqrt(log t / (2N)); unpulled arms first.
[[nodiscard]] std::size_t hdoc_select(const ArmStats& stats, std::span<const std::size_t> active);

/// (leader, challenger): leader = argmax mu_hat; challenger maximizes mu_hat
/// plus the LUCB radius among the rest. Requires at least two arms, all pulled.
[[nodiscard]] std::pair<std::size_t, std::size_t> lucb_select(const ArmStats& stats, double alpha);

/// Each arm with probability 1/W.
[[nodiscard]] std::size_t uniform_select(Rng& rng, std::size_t arms);

/// argmax mu_hat with probability 1 - epsilon, otherwise uniform; unpulled arms first.
[[nodiscard]] std::size_t epsilon_greedy_select(const ArmStats& stats, Rng& rng, double epsilon);

}  // namespace peak
