#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "peak/capital.hpp"
#include "peak/distributions.hpp"
#include "peak/region.hpp"

namespace peak {

enum class Problem { Thr, Bai, Type1, Power1 };
enum class PolicyKind { Auto, Hdoc, Lucb, Uniform, EpsilonGreedy };

struct MethodSpec {
  enum class Kind { Peak, Base, Hedged, UnionPeak };
  Kind kind = Kind::Peak;
  std::size_t grid = 100;  ///< Hedged grid size
};

[[nodiscard]] Problem parse_problem(std::string_view text);
[[nodiscard]] PolicyKind parse_policy(std::string_view text);
/// peak, base, union-peak, hedged (grid 100) or hedged:N.
[[nodiscard]] MethodSpec parse_method(std::string_view text);
[[nodiscard]] std::string describe(Problem p);
[[nodiscard]] std::string describe(PolicyKind p);
[[nodiscard]] std::string describe(const MethodSpec& m);

struct ExperimentConfig {
  Problem problem = Problem::Thr;
  std::vector<ArmDistribution> arms;
  std::optional<double> xi;
  double alpha = 0.05;
  StreamConfig stream;
  PolicyKind policy = PolicyKind::Auto;  ///< THR: HDoC, BAI: LUCB, otherwise uniform
  double epsilon = 0.1;
  MethodSpec method;
  std::size_t horizon = 10000;
  std::size_t n_paths = 100;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  bool timing = false;  ///< fill wall_ms; off keeps result files byte-identical
  /// TYPE1 / POWER1 point hypothesis; defaults to the true means.
  std::optional<std::vector<double>> hypothesis;
  /// TYPE1 / POWER1 composite region tested instead of the point hypothesis.
  std::optional<Region> region;

  [[nodiscard]] std::size_t arm_count() const noexcept { return arms.size(); }
  [[nodiscard]] PolicyKind effective_policy() const noexcept;
  /// Throws ConfigError naming the offending key.
  void validate() const;
};

struct PathResult {
  std::size_t path_id = 0;
  std::uint64_t seed = 0;
  /// THR: i-th labeling time; BAI: i-th elimination time with tau_W the
  /// declaration time; TYPE1/POWER1: tau_1 is the rejection time.
  std::vector<std::optional<std::size_t>> tau;
  bool complete = false;
  bool correct = false;
  bool anomaly = false;  ///< both THR sides or every BAI region rejected
  std::vector<int> labels;  ///< THR: +1 above, -1 below, 0 unlabeled
  std::optional<std::size_t> declared;  ///< BAI survivor
  std::size_t observations = 0;
  double wall_ms = 0.0;
};

struct TauSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
};

struct ExperimentSummary {
  std::size_t paths = 0;
  std::size_t complete = 0;
  std::size_t correct = 0;  ///< among complete paths
  std::size_t anomalies = 0;
  std::vector<TauSummary> tau;  ///< over complete paths only
  double rejection_rate = 0.0;  ///< TYPE1 / POWER1
  double rejection_se = 0.0;
};

struct ExperimentResult {
  std::vector<PathResult> paths;
  ExperimentSummary summary;
};

/// Runs one path of the configured problem with generator seed `seed`.
[[nodiscard]] PathResult run_path(const ExperimentConfig& cfg, std::size_t path_id,
                                  std::uint64_t seed);

/// Dispatches on cfg.problem; paths use derive_seed(cfg.seed, path_id) and
/// may run on cfg.threads workers. Results are ordered by path id.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig& cfg);

[[nodiscard]] ExperimentResult run_thr(const ExperimentConfig& cfg);
[[nodiscard]] ExperimentResult run_bai(const ExperimentConfig& cfg);
[[nodiscard]] ExperimentResult type1_mc(const ExperimentConfig& cfg);
[[nodiscard]] ExperimentResult power1_check(const ExperimentConfig& cfg);

[[nodiscard]] ExperimentSummary summarize(const ExperimentConfig& cfg,
                                          const std::vector<PathResult>& paths);

/// Header `path_id,seed,tau_1..tau_W,complete,correct,wall_ms`, one row per
/// path, then `#`-prefixed summary lines. Numbers use 10 significant digits.
void write_results_csv(std::ostream& os, const ExperimentConfig& cfg, const ExperimentResult& r);

/// Human-readable summary lines (also used for the `#` block).
[[nodiscard]] std::vector<std::string> summary_lines(const ExperimentConfig& cfg,
                                                     const ExperimentSummary& s);

/// printf("%.10g")
[[nodiscard]] std::string fmt10(double v);

// ---------------------------------------------------------------------------
// Runtime benchmark: fixed-horizon BAI test, LUCB sampling, a test of every
// region every `test_every` observations, no stopping, serial.

struct BenchConfig {
  std::vector<ArmDistribution> arms;
  double alpha = 0.05;
  StreamConfig stream;
  std::size_t horizon = 2000;
  std::size_t test_every = 2;
  std::size_t n_paths = 3;
  std::uint64_t seed = 1;
  std::vector<MethodSpec> methods;
};

struct BenchRow {
  MethodSpec method;
  std::size_t paths = 0;
  double mean_seconds = 0.0;
  double se_seconds = 0.0;
  /// Regions still unrejected at the horizon, summed over paths (sanity check).
  std::size_t survivors = 0;
};

/// Every method sees the identical data stream for a given path seed.
[[nodiscard]] std::vector<BenchRow> bench_runtime(const BenchConfig& cfg);

/// Header `method,paths,mean_s,se_s,survivors`.
void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows);

}  // namespace peak
