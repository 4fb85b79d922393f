#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "peak/joint.hpp"

namespace peak {

inline constexpr int kCheckpointVersion = 1;

/// Replay clock: last `t` field seen and the `t` at which each tracker rejected.
struct ReplayClock {
  std::optional<std::uint64_t> last_t;
  std::vector<std::optional<std::uint64_t>> rejected_t;
};

/// Joint state plus the tests in flight.
struct Checkpoint {
  JointState joint;
  std::vector<TestTracker> trackers;
  ReplayClock clock;
};

/// Versioned JSON document with c, gamma_floor, the action log, per-arm
/// observations and every tracker's region, alpha, running maximum and
/// incremental state. Doubles are written with round-trip precision.
void checkpoint_save(const JointState& joint, const std::vector<TestTracker>& trackers,
                     std::ostream& os, const ReplayClock& clock = {});
void checkpoint_save(const JointState& joint, const std::vector<TestTracker>& trackers,
                     const std::filesystem::path& path, const ReplayClock& clock = {});

/// Throws CheckpointError on a version mismatch or a corrupt document.
[[nodiscard]] Checkpoint checkpoint_load(std::istream& is);
[[nodiscard]] Checkpoint checkpoint_load(const std::filesystem::path& path);

}  // namespace peak
