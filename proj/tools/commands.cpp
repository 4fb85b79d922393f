#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "peak/confseq.hpp"
#include "peak/errors.hpp"
#include "peak/growth.hpp"
#include "peak/policies.hpp"
#include "peak/replay.hpp"

namespace peak::cli {

namespace {

const KeySpec kAlpha{"alpha", "test level in (0,1) [0.05]"};
const KeySpec kC{"c", "bet scale, at least 1/4 [0.26]"};
const KeySpec kSeed{"seed", "root seed [1]"};
const KeySpec kOut{"out", "output file; relative paths go under $PEAK_OUTPUT_DIR"};

StreamConfig stream_from(const Settings& s) {
  StreamConfig cfg;
  cfg.c = s.real("c", cfg.c);
  cfg.gamma_floor = s.real("gamma_floor", cfg.gamma_floor);
  try {
    cfg.validate();
  } catch (const DomainError& e) {
    throw ConfigError("c", e.what());
  }
  return cfg;
}

double alpha_from(const Settings& s) {
  const double a = s.real("alpha", 0.05);
  if (!(a > 0.0 && a < 1.0)) throw ConfigError("alpha", "alpha must lie in (0,1)");
  return a;
}

// Writes through `fn` to the configured file, or to `fallback` when the key is
// unset and no default file name is given.
void emit(const Settings& s, const std::string& default_name, std::ostream& fallback,
          const std::function<void(std::ostream&)>& fn) {
  const auto value = s.text("out");
  if (!value && default_name.empty()) {
    fn(fallback);
    return;
  }
  const auto path = output_path(value.value_or(default_name));
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  fn(file);
  file.flush();
  if (!file) throw std::runtime_error("write failed for " + path.string());
}

std::string interval_fields(const Interval& iv) {
  if (iv.empty) return "nan,nan";
  return fmt10(iv.lo) + "," + fmt10(iv.hi);
}

// One confidence-sequence method behind a common face.
struct Sequence {
  std::string name;
  std::function<const Interval&(const StreamState&, double)> update;
};

Sequence make_sequence(const std::string& name, double alpha, const StreamConfig& cfg) {
  if (name == "peak") {
    auto ci = std::make_shared<PeakInterval>(cfg, alpha);
    return {name, [ci](const StreamState& s, double) -> const Interval& { return ci->update(s); }};
  }
  if (name == "prplh") {
    auto ci = std::make_shared<PrPlH>(alpha);
    return {name, [ci](const StreamState&, double x) -> const Interval& { return ci->update(x); }};
  }
  if (name == "emp-bern") {
    auto ci = std::make_shared<EmpBern>(alpha);
    return {name, [ci](const StreamState&, double x) -> const Interval& { return ci->update(x); }};
  }
  if (name.rfind("hedged", 0) == 0) {
    const auto spec = parse_method(name);
    auto ci = std::make_shared<HedgedGrid>(spec.grid, alpha);
    return {describe(spec),
            [ci](const StreamState&, double x) -> const Interval& { return ci->update(x); }};
  }
  throw ConfigError("methods", "unknown confidence sequence '" + name + "'");
}

std::vector<Region> regions_from(const Settings& s) {
  std::vector<Region> out;
  std::istringstream words(s.text("region", ""));
  std::string word;
  while (words >> word) {
    try {
      out.push_back(parse_region(word));
    } catch (const DomainError& e) {
      throw ConfigError("region", e.what());
    }
  }
  return out;
}

}  // namespace

std::vector<KeySpec> simulate_keys() {
  return {
      {"problem", "thr, bai, type1 or power1 [thr]"},
      {"arms", "preset (paper-bern, paper-beta, paper-beta-contaminated, mixture-3) or list "
               "such as bern(0.3),beta(1,2)"},
      {"xi", "THR threshold; required for thr"},
      kAlpha,
      kC,
      {"gamma_floor", "factors at or below this count as zero [1e-300]"},
      {"policy", "auto, hdoc, lucb, uniform or epsilon-greedy [auto]"},
      {"epsilon", "epsilon-greedy exploration rate [0.1]"},
      {"method", "peak, base, union-peak, hedged or hedged:N [peak]"},
      {"horizon", "observations per path [10000]"},
      {"n_paths", "number of paths [100]"},
      kSeed,
      {"threads", "worker threads [1]"},
      {"timing", "record per-path wall time [false]"},
      {"hypothesis", "type1/power1 point hypothesis, one coordinate per arm [true means]"},
      {"region", "type1/power1 region instead of the point hypothesis"},
      {kOut.name, kOut.help + " [results.csv]"},
  };
}

std::vector<KeySpec> confseq_keys() {
  return {
      {"dist", "data distribution [bern(0.5)]"},
      {"length", "observations [500]"},
      kAlpha,
      kC,
      {"gamma_floor", "factors at or below this count as zero [1e-300]"},
      kSeed,
      {"methods", "comma list of peak, prplh, emp-bern, hedged[:N] [all four]"},
      {kOut.name, kOut.help + " [stdout]"},
  };
}

std::vector<KeySpec> growth_keys() {
  return {
      {"c", "bet scale [0.26]"},
      {"resolution", "grid points per axis [99]"},
      {kOut.name, kOut.help + " [stdout]"},
  };
}

std::vector<KeySpec> replay_keys() {
  return {
      {"in", "record stream, one `t=.. arm=.. x=..` per line"},
      {"arms", "number of arms [1 + largest arm index in the stream]"},
      kAlpha,
      kC,
      {"gamma_floor", "factors at or below this count as zero [1e-300]"},
      {"region", "regions to test, space separated (bai:1 thr-above:0:0.5 ...)"},
      {"checkpoint_in", "resume from a checkpoint; arms, alpha, c and regions come from it"},
      {"checkpoint_out", "write a checkpoint after the stream"},
      {kOut.name, kOut.help + " [stdout]"},
  };
}

std::vector<KeySpec> bench_keys() {
  return {
      {"arms", "preset or distribution list [paper-bern]"},
      kAlpha,
      kC,
      {"gamma_floor", "factors at or below this count as zero [1e-300]"},
      {"horizon", "observations per path [2000]"},
      {"test_every", "test cadence in observations [2]"},
      {"n_paths", "timed paths per method [3]"},
      kSeed,
      {"methods", "comma list of peak and hedged:N [peak,hedged:100,hedged:400]"},
      {kOut.name, kOut.help + " [stdout]"},
  };
}

std::vector<ArmDistribution> parse_arms(const std::string& key, const std::string& text) {
  try {
    if (text.find('(') == std::string::npos && text != "unif") return preset_arms(text);
    std::vector<ArmDistribution> arms;
    for (const auto& item : split_list(text)) arms.push_back(parse_distribution(item));
    return arms;
  } catch (const DomainError& e) {
    throw ConfigError(key, e.what());
  }
}

ExperimentConfig experiment_from(const Settings& s) {
  ExperimentConfig cfg;
  cfg.problem = parse_problem(s.text("problem", "thr"));
  cfg.arms = parse_arms("arms", s.require("arms"));
  cfg.xi = s.real("xi");
  cfg.alpha = s.real("alpha", cfg.alpha);
  cfg.stream.c = s.real("c", cfg.stream.c);
  cfg.stream.gamma_floor = s.real("gamma_floor", cfg.stream.gamma_floor);
  cfg.policy = parse_policy(s.text("policy", "auto"));
  cfg.epsilon = s.real("epsilon", cfg.epsilon);
  cfg.method = parse_method(s.text("method", "peak"));
  cfg.horizon = s.count("horizon", cfg.horizon);
  cfg.n_paths = s.count("n_paths", cfg.n_paths);
  cfg.seed = s.u64("seed", cfg.seed);
  cfg.threads = s.count("threads", 1);
  if (cfg.threads == 0) throw ConfigError("threads", "need at least one thread");
  cfg.timing = s.flag("timing", false);
  cfg.hypothesis = s.reals("hypothesis");
  if (const auto r = s.text("region"); r && !r->empty()) {
    try {
      cfg.region = parse_region(*r);
    } catch (const DomainError& e) {
      throw ConfigError("region", e.what());
    }
  }
  cfg.validate();
  return cfg;
}

BenchConfig bench_from(const Settings& s) {
  BenchConfig cfg;
  cfg.arms = parse_arms("arms", s.text("arms", "paper-bern"));
  cfg.alpha = alpha_from(s);
  cfg.stream = stream_from(s);
  cfg.horizon = s.count("horizon", cfg.horizon);
  cfg.test_every = s.count("test_every", cfg.test_every);
  if (cfg.test_every == 0) throw ConfigError("test_every", "must be positive");
  cfg.n_paths = s.count("n_paths", cfg.n_paths);
  cfg.seed = s.u64("seed", cfg.seed);
  for (const auto& m : split_list(s.text("methods", "peak,hedged:100,hedged:400"))) {
    const auto spec = parse_method(m);
    if (spec.kind != MethodSpec::Kind::Peak && spec.kind != MethodSpec::Kind::Hedged) {
      throw ConfigError("methods", "bench compares peak and hedged:N only");
    }
    cfg.methods.push_back(spec);
  }
  if (cfg.methods.empty()) throw ConfigError("methods", "no methods given");
  if (cfg.arms.size() < 2) throw ConfigError("arms", "the BAI benchmark needs at least two arms");
  return cfg;
}

int run_simulate(const Settings& s, std::ostream& out) {
  const auto cfg = experiment_from(s);
  const auto result = run_experiment(cfg);
  emit(s, "results.csv", out, [&](std::ostream& os) { write_results_csv(os, cfg, result); });
  for (const auto& line : summary_lines(cfg, result.summary)) out << line << '\n';
  return 0;
}

int run_confseq(const Settings& s, std::ostream& out) {
  ArmDistribution dist;
  try {
    dist = parse_distribution(s.text("dist", "bern(0.5)"));
  } catch (const DomainError& e) {
    throw ConfigError("dist", e.what());
  }
  const auto length = s.count("length", 500);
  const double alpha = alpha_from(s);
  const auto stream_cfg = stream_from(s);
  const auto seed = s.u64("seed", 1);
  std::vector<Sequence> seqs;
  for (const auto& name : split_list(s.text("methods", "peak,prplh,emp-bern,hedged"))) {
    seqs.push_back(make_sequence(name, alpha, stream_cfg));
  }
  if (seqs.empty()) throw ConfigError("methods", "no methods given");

  const double truth = mean(dist);
  std::vector<std::size_t> first_miss(seqs.size(), 0);
  std::vector<Interval> last(seqs.size());
  Rng rng(derive_seed(seed, 0));
  StreamState state;
  emit(s, "", out, [&](std::ostream& os) {
    os << "t,x";
    for (const auto& q : seqs) os << ',' << q.name << "_lo," << q.name << "_hi";
    os << '\n';
    for (std::size_t t = 1; t <= length; ++t) {
      const double x = sample(dist, rng);
      state.observe(x);
      os << t << ',' << fmt10(x);
      for (std::size_t i = 0; i < seqs.size(); ++i) {
        last[i] = seqs[i].update(state, x);
        if (first_miss[i] == 0 && !last[i].contains(truth)) first_miss[i] = t;
        os << ',' << interval_fields(last[i]);
      }
      os << '\n';
    }
  });
  // Summary goes to stderr when the table itself went to stdout.
  std::ostream& log = s.has("out") ? out : std::cerr;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    log << seqs[i].name << ": final [" << interval_fields(last[i]) << "] mean " << fmt10(truth)
        << (first_miss[i] ? " first excluded at t=" + std::to_string(first_miss[i]) : " always covered")
        << '\n';
  }
  return 0;
}

int run_growth(const Settings& s, std::ostream& out) {
  const double c = s.real("c", 0.26);
  if (!(c >= 0.25)) throw ConfigError("c", "c must be at least 1/4");
  const auto res = s.count("resolution", 99);
  if (res == 0) throw ConfigError("resolution", "must be positive");
  const auto rows = emit_growth_grid(c, res);
  emit(s, "", out, [&](std::ostream& os) { write_growth_csv(os, rows); });
  return 0;
}

int run_replay(const Settings& s, std::ostream& out) {
  const auto in_path = s.require("in");
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot read " + in_path);

  std::unique_ptr<ReplaySession> session;
  if (const auto cp = s.text("checkpoint_in")) {
    for (const char* key : {"arms", "region"}) {
      if (s.has(key)) throw ConfigError(key, "taken from the checkpoint when resuming");
    }
    session = std::make_unique<ReplaySession>(checkpoint_load(std::filesystem::path(*cp)));
  } else {
    const auto regions = regions_from(s);
    if (regions.empty()) throw ConfigError("region", "at least one region is required");
    std::size_t arms = s.count("arms", 0);
    if (!s.has("arms")) {
      // Infer W from the stream; full validation happens on the real pass.
      std::string line;
      std::size_t n = 0;
      while (std::getline(in, line)) {
        ++n;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto r = parse_replay_line(line, n, std::numeric_limits<std::size_t>::max());
        arms = std::max(arms, r.arm + 1);
      }
      in.clear();
      in.seekg(0);
    }
    if (arms == 0) throw ConfigError("arms", "cannot infer the arm count from an empty stream");
    for (const auto& r : regions) {
      try {
        validate(r, arms);
      } catch (const DomainError& e) {
        throw ConfigError("region", e.what());
      }
    }
    session = std::make_unique<ReplaySession>(arms, stream_from(s), alpha_from(s), regions);
  }
  session->feed_stream(in);

  const auto decisions = session->decisions();
  emit(s, "", out, [&](std::ostream& os) {
    os << "region,rejected_t,rejected_index,running_extreme\n";
    for (const auto& d : decisions) {
      os << d.region << ',' << (d.rejected_t ? std::to_string(*d.rejected_t) : "") << ','
         << (d.rejected_index ? std::to_string(*d.rejected_index) : "") << ','
         << fmt10(d.running_extreme) << '\n';
    }
  });
  if (const auto cp = s.text("checkpoint_out")) {
    const auto path = output_path(*cp);
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write " + path.string());
    session->save(file);
  }
  if (s.has("out")) {
    for (const auto& d : decisions) {
      out << d.region << ": "
          << (d.rejected_t ? "rejected at t=" + std::to_string(*d.rejected_t) : "not rejected")
          << '\n';
    }
  }
  return 0;
}

int run_bench(const Settings& s, std::ostream& out) {
  const auto cfg = bench_from(s);
  const auto rows = bench_runtime(cfg);
  emit(s, "", out, [&](std::ostream& os) { write_bench_csv(os, rows); });
  return 0;
}

}  // namespace peak::cli
