#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "peak/harness.hpp"
#include "settings.hpp"

namespace peak::cli {

// Key lists per subcommand; every key doubles as a `--key` flag with `_`
// spelled as `-`.
[[nodiscard]] std::vector<KeySpec> simulate_keys();
[[nodiscard]] std::vector<KeySpec> confseq_keys();
[[nodiscard]] std::vector<KeySpec> growth_keys();
[[nodiscard]] std::vector<KeySpec> replay_keys();
[[nodiscard]] std::vector<KeySpec> bench_keys();

/// `arms` is a preset name (paper-bern, ...) or a comma list of distributions.
[[nodiscard]] std::vector<ArmDistribution> parse_arms(const std::string& key, const std::string& text);

/// Throws ConfigError naming the offending key.
[[nodiscard]] ExperimentConfig experiment_from(const Settings& s);
[[nodiscard]] BenchConfig bench_from(const Settings& s);

// Each returns the process exit code; ConfigError propagates (exit 2), other
// exceptions are runtime failures (exit 1). `out` receives the summary.
int run_simulate(const Settings& s, std::ostream& out);
int run_confseq(const Settings& s, std::ostream& out);
int run_growth(const Settings& s, std::ostream& out);
int run_replay(const Settings& s, std::ostream& out);
int run_bench(const Settings& s, std::ostream& out);

}  // namespace peak::cli
