#include "peak/policies.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "peak/confseq.hpp"
#include "peak/errors.hpp"

namespace peak {

double ArmStats::mean(std::size_t a) const {
  const auto n = pulls.at(a);
  return n == 0 ? 0.0 : sums[a] / static_cast<double>(n);
}

void ArmStats::record(std::size_t a, double x) {
  ++pulls.at(a);
  sums[a] += x;
  ++t;
}

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept {
  std::uint64_t s = root;
  const std::uint64_t base = splitmix64(s);
  std::uint64_t t = base ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
  return splitmix64(t);
}

std::size_t first_unpulled(const ArmStats& stats, std::span<const std::size_t> active) {
  std::size_t best = stats.arms();
  for (auto a : active) {
    if (stats.pulls.at(a) == 0 && a < best) best = a;
  }
  return best;
}

std::size_t hdoc_select(const ArmStats& stats, std::span<const std::size_t> active) {
  if (active.empty()) throw DomainError("HDoC needs at least one active arm");
  if (const auto a = first_unpulled(stats, active); a < stats.arms()) return a;
  const double log_t = std::log(static_cast<double>(std::max<std::size_t>(stats.t, 1)));
  std::size_t best = stats.arms();
  double best_score = -std::numeric_limits<double>::infinity();
  for (auto a : active) {
    const double score =
        stats.mean(a) + std::sqrt(log_t / (2.0 * static_cast<double>(stats.pulls[a])));
    if (score > best_score || (score == best_score && a < best)) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

std::pair<std::size_t, std::size_t> lucb_select(const ArmStats& stats, double alpha) {
  const std::size_t w = stats.arms();
  if (w < 2) throw DomainError("LUCB needs at least two arms");
  for (std::size_t a = 0; a < w; ++a) {
    if (stats.pulls[a] == 0) throw DomainError("LUCB needs every arm pulled once");
  }
  std::size_t leader = 0;
  for (std::size_t a = 1; a < w; ++a) {
    if (stats.mean(a) > stats.mean(leader)) leader = a;
  }
  std::size_t challenger = w;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < w; ++a) {
    if (a == leader) continue;
    const double score = stats.mean(a) + lucb_radius(stats.t, stats.pulls[a], alpha, w);
    if (score > best) {
      best = score;
      challenger = a;
    }
  }
  return {leader, challenger};
}

std::size_t uniform_select(Rng& rng, std::size_t arms) {
  if (arms == 0) throw DomainError("uniform policy needs at least one arm");
  return std::uniform_int_distribution<std::size_t>(0, arms - 1)(rng);
}

std::size_t epsilon_greedy_select(const ArmStats& stats, Rng& rng, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in [0,1]");
  const std::size_t w = stats.arms();
  if (w == 0) throw DomainError("epsilon-greedy needs at least one arm");
  for (std::size_t a = 0; a < w; ++a) {
    if (stats.pulls[a] == 0) return a;
  }
  if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon) {
    return uniform_select(rng, w);
  }
  std::size_t best = 0;
  for (std::size_t a = 1; a < w; ++a) {
    if (stats.mean(a) > stats.mean(best)) best = a;
  }
  return best;
}

}  // namespace peak
