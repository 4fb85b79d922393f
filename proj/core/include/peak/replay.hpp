#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "peak/checkpoint.hpp"
#include "peak/regions.hpp"

namespace peak {

/// One line `t=<int> arm=<int> x=<real>` of a replay stream.
struct ReplayRecord {
  std::size_t line = 0;
  std::uint64_t t = 0;
  std::size_t arm = 0;
  double x = 0.0;
};

/// Parses one non-comment line. Throws ParseError for malformed fields or an
/// arm index >= arms, and DomainError (message naming the line) for x outside [0,1].
[[nodiscard]] ReplayRecord parse_replay_line(const std::string& text, std::size_t line,
                                             std::size_t arms);

struct ReplayDecision {
  std::string region;
  std::optional<std::uint64_t> rejected_t;  ///< `t` field of the rejecting record
  std::optional<std::size_t> rejected_index;  ///< 1-based record count at rejection
  double running_extreme = 1.0;
};

/// Feeds records into a joint state and runs every region test after each one.
class ReplaySession {
 public:
  ReplaySession(std::size_t arms, StreamConfig cfg, double alpha, const std::vector<Region>& regions);
  explicit ReplaySession(Checkpoint cp);

  void feed(const ReplayRecord& r);
  /// Reads the whole stream; `#` lines and blank lines are skipped.
  void feed_stream(std::istream& is);

  [[nodiscard]] std::vector<ReplayDecision> decisions() const;
  [[nodiscard]] const JointState& joint() const noexcept { return joint_; }
  [[nodiscard]] const std::vector<TestTracker>& trackers() const noexcept { return trackers_; }
  [[nodiscard]] const ReplayClock& clock() const noexcept { return clock_; }
  void save(std::ostream& os) const;

 private:
  JointState joint_;
  std::vector<TestTracker> trackers_;
  ReplayClock clock_;
  MinimumCache cache_;
};

/// One-shot replay of a stream.
[[nodiscard]] std::vector<ReplayDecision> replay_ingest(std::istream& source, std::size_t arms,
                                                        double alpha,
                                                        const std::vector<Region>& regions,
                                                        StreamConfig cfg = {});

}  // namespace peak
