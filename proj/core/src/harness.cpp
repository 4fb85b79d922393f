#include "peak/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>

#include "peak/confseq.hpp"
#include "peak/errors.hpp"
#include "peak/joint.hpp"
#include "peak/policies.hpp"
#include "peak/regions.hpp"

namespace peak {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<double> true_means(const ExperimentConfig& cfg) {
  std::vector<double> out;
  for (const auto& a : cfg.arms) out.push_back(mean(a));
  return out;
}

std::size_t best_arm(const std::vector<double>& means) {
  return static_cast<std::size_t>(std::max_element(means.begin(), means.end()) - means.begin());
}

// Sampling environment of one path.
struct Environment {
  const ExperimentConfig& cfg;
  Rng rng;
  ArmStats stats;
  JointState joint;

  Environment(const ExperimentConfig& c, std::uint64_t seed)
      : cfg(c), rng(seed), stats(c.arm_count()), joint(c.arm_count(), c.stream) {}

  double pull(std::size_t a) {
    const double x = sample(cfg.arms[a], rng);
    joint.observe(a, x);
    stats.record(a, x);
    return x;
  }
  [[nodiscard]] std::size_t time() const noexcept { return joint.time(); }
};

std::size_t select_single(PolicyKind policy, Environment& env, const std::vector<std::size_t>& active,
                          double epsilon) {
  switch (policy) {
    case PolicyKind::Hdoc:
      return hdoc_select(env.stats, active);
    case PolicyKind::Uniform:
      return active[uniform_select(env.rng, active.size())];
    case PolicyKind::EpsilonGreedy:
      return epsilon_greedy_select(env.stats, env.rng, epsilon);
    default:
      throw DomainError("policy " + describe(policy) + " cannot pick a single arm");
  }
}

// Drives the sampling loop: `after_pull` returns true once the path is done.
// LUCB initializes round-robin and then pulls leader and challenger in turn.
template <class AfterPull>
void drive(Environment& env, PolicyKind policy, const std::vector<std::size_t>& all_arms,
           const std::vector<std::size_t>* active, AfterPull after_pull) {
  const auto& cfg = env.cfg;
  auto pull_and_check = [&](std::size_t a) {
    env.pull(a);
    return after_pull();
  };
  if (policy == PolicyKind::Lucb && cfg.arm_count() >= 2) {
    while (env.time() < cfg.horizon) {
      const auto unpulled = first_unpulled(env.stats, all_arms);
      if (unpulled < cfg.arm_count()) {
        if (pull_and_check(unpulled)) return;
        continue;
      }
      const auto [leader, challenger] = lucb_select(env.stats, cfg.alpha);
      if (pull_and_check(leader)) return;
      if (env.time() >= cfg.horizon) return;
      if (pull_and_check(challenger)) return;
    }
    return;
  }
  const PolicyKind single = policy == PolicyKind::Lucb ? PolicyKind::Uniform : policy;
  while (env.time() < cfg.horizon) {
    const auto& arms = active ? *active : all_arms;
    if (arms.empty()) return;
    if (pull_and_check(select_single(single, env, arms, cfg.epsilon))) return;
  }
}

// Per-arm confidence set for the interval-based comparators.
class ArmInterval {
 public:
  ArmInterval(const ExperimentConfig& cfg, Problem problem)
      : kind_(cfg.method.kind), problem_(problem), alpha_(cfg.alpha), arms_(cfg.arm_count()) {
    const double split = cfg.alpha / static_cast<double>(arms_);
    if (kind_ == MethodSpec::Kind::Hedged) hedged_ = std::make_unique<HedgedGrid>(cfg.method.grid, split);
    if (kind_ == MethodSpec::Kind::UnionPeak) peak_ = std::make_unique<PeakInterval>(cfg.stream, split);
  }

  void update(const JointState& joint, const ArmStats& stats, std::size_t arm) {
    const auto& stream = joint.stream(arm);
    switch (kind_) {
      case MethodSpec::Kind::Base: {
        const auto n = stats.pulls[arm];
        const auto b = problem_ == Problem::Bai
                           ? base_bound_bai(stats.t, n, stats.mean(arm), alpha_, arms_)
                           : base_bound_thr(n, stats.mean(arm), alpha_, arms_);
        if (b.empty) {
          interval_.empty = true;
        } else {
          interval_.intersect(b.lo, b.hi);
        }
        break;
      }
      case MethodSpec::Kind::Hedged:
        interval_ = hedged_->update(stream.records().back().x);
        break;
      case MethodSpec::Kind::UnionPeak:
        interval_ = peak_->update(stream);
        break;
      case MethodSpec::Kind::Peak:
        break;
    }
  }
  [[nodiscard]] const Interval& current() const noexcept { return interval_; }

 private:
  MethodSpec::Kind kind_;
  Problem problem_;
  double alpha_;
  std::size_t arms_;
  Interval interval_;
  std::unique_ptr<HedgedGrid> hedged_;
  std::unique_ptr<PeakInterval> peak_;
};

double log_step(const Observation& r, const StreamConfig& cfg, double m) {
  const double f = detail::factor(r, cfg.c, m);
  return f <= cfg.gamma_floor ? kNegInf : std::log(f);
}

// ---------------------------------------------------------------------------

PathResult thr_path(const ExperimentConfig& cfg, std::size_t path_id, std::uint64_t seed) {
  const auto start = Clock::now();
  const std::size_t w = cfg.arm_count();
  const double xi = *cfg.xi;
  Environment env(cfg, seed);
  PathResult res;
  res.path_id = path_id;
  res.seed = seed;
  res.tau.assign(w, std::nullopt);
  res.labels.assign(w, 0);

  std::vector<std::size_t> all(w);
  for (std::size_t a = 0; a < w; ++a) all[a] = a;
  std::vector<std::size_t> active = all;
  std::size_t labeled = 0;

  const bool peak = cfg.method.kind == MethodSpec::Kind::Peak;
  MinimumCache cache;
  std::vector<double> log_at_xi(w, 0.0);
  std::vector<double> min_below(w, 0.0);
  std::vector<double> min_above(w, 0.0);
  std::vector<TestTracker> below;  // R0: m_a <= xi, rejection labels "above"
  std::vector<TestTracker> above;  // R1: m_a >= xi, rejection labels "below"
  std::vector<ArmInterval> intervals;
  for (std::size_t a = 0; a < w; ++a) {
    below.emplace_back(ThresholdBelow{a, xi}, cfg.alpha);
    above.emplace_back(ThresholdAbove{a, xi}, cfg.alpha);
    if (!peak) intervals.emplace_back(cfg, Problem::Thr);
  }

  auto label = [&](std::size_t a, int value, bool anomaly) {
    res.labels[a] = value;
    res.anomaly = res.anomaly || anomaly;
    res.tau[labeled++] = env.time();
    active.erase(std::find(active.begin(), active.end(), a));
  };

  auto after_pull = [&]() {
    const std::size_t t = env.time();
    const std::size_t pulled = env.joint.actions().back();
    std::vector<std::pair<std::size_t, int>> decided;
    if (peak) {
      const auto& stream = env.joint.stream(pulled);
      log_at_xi[pulled] += log_step(stream.records().back(), cfg.stream, xi);
      const auto& gm = cache.update(env.joint);
      // Region minima move only coordinate a. With a single basin that is the
      // clamp at xi; otherwise the constrained minimizer decides.
      const double m = gm.point[pulled];
      const bool single = stream.scan_basins(cfg.stream) == 1;
      auto constrained = [&](double lo, double hi) {
        if (single) return log_at_xi[pulled];
        return log_capital(stream, cfg.stream, minimizer_on(stream, cfg.stream, lo, hi, xi));
      };
      min_below[pulled] = m > xi ? constrained(0.0, xi) : gm.log_capital[pulled];
      min_above[pulled] = m < xi ? constrained(xi, 1.0) : gm.log_capital[pulled];
      std::vector<double> logs = gm.log_capital;
      for (auto a : active) {
        logs[a] = min_below[a];
        const bool r0 = below[a].record(std::exp(log_mean_exp(logs)), t) == Decision::Rejected;
        logs[a] = min_above[a];
        const bool r1 = above[a].record(std::exp(log_mean_exp(logs)), t) == Decision::Rejected;
        logs[a] = gm.log_capital[a];
        if (r0 || r1) decided.emplace_back(a, r0 && r1 ? 2 : (r0 ? 1 : -1));
      }
    } else {
      intervals[pulled].update(env.joint, env.stats, pulled);
      for (auto a : active) {
        const auto& iv = intervals[a].current();
        if (iv.empty) {
          decided.emplace_back(a, 2);
        } else if (iv.lo > xi) {
          decided.emplace_back(a, 1);
        } else if (iv.hi < xi) {
          decided.emplace_back(a, -1);
        }
      }
    }
    for (auto [a, v] : decided) label(a, v == 2 ? 0 : v, v == 2);
    return active.empty();
  };

  if (cfg.horizon > 0) drive(env, cfg.effective_policy(), all, &active, after_pull);

  res.observations = env.time();
  res.complete = active.empty();
  const auto means = true_means(cfg);
  res.correct = res.complete && !res.anomaly;
  for (std::size_t a = 0; a < w && res.correct; ++a) {
    const int truth = means[a] > xi ? 1 : (means[a] < xi ? -1 : res.labels[a]);
    res.correct = res.labels[a] == truth;
  }
  if (cfg.timing) res.wall_ms = elapsed_ms(start);
  return res;
}

PathResult bai_path(const ExperimentConfig& cfg, std::size_t path_id, std::uint64_t seed) {
  const auto start = Clock::now();
  const std::size_t w = cfg.arm_count();
  Environment env(cfg, seed);
  PathResult res;
  res.path_id = path_id;
  res.seed = seed;
  res.tau.assign(w, std::nullopt);
  const auto means = true_means(cfg);

  if (w == 1) {
    res.tau[0] = 0;
    res.declared = 0;
    res.complete = true;
    res.correct = true;
    return res;
  }

  std::vector<std::size_t> all(w);
  for (std::size_t a = 0; a < w; ++a) all[a] = a;
  std::vector<char> eliminated(w, 0);
  std::size_t n_eliminated = 0;

  const bool peak = cfg.method.kind == MethodSpec::Kind::Peak;
  MinimumCache cache;
  std::vector<TestTracker> trackers;
  std::vector<double> hints(w, -1.0);
  std::vector<ArmInterval> intervals;
  for (std::size_t a = 0; a < w; ++a) {
    trackers.emplace_back(BestArm{a}, cfg.alpha);
    if (!peak) intervals.emplace_back(cfg, Problem::Bai);
  }

  auto after_pull = [&]() {
    const std::size_t t = env.time();
    const std::size_t pulled = env.joint.actions().back();
    std::vector<std::size_t> out;
    if (peak) {
      const auto& gm = cache.update(env.joint);
      for (std::size_t a = 0; a < w; ++a) {
        if (eliminated[a]) continue;
        const auto sol = minimize_bai(env.joint, a, gm, hints[a]);
        hints[a] = sol.point[a];
        if (trackers[a].record(std::exp(sol.log_value), t) == Decision::Rejected) out.push_back(a);
      }
    } else {
      intervals[pulled].update(env.joint, env.stats, pulled);
      for (std::size_t a = 0; a < w; ++a) {
        if (eliminated[a]) continue;
        const auto& ia = intervals[a].current();
        bool gone = ia.empty;
        for (std::size_t b = 0; b < w && !gone; ++b) {
          const auto& ib = intervals[b].current();
          gone = b != a && !ib.empty && ib.lo > ia.hi;
        }
        if (gone) out.push_back(a);
      }
    }
    for (auto a : out) {
      eliminated[a] = 1;
      res.tau[n_eliminated++] = t;
    }
    if (n_eliminated >= w - 1) {
      if (n_eliminated == w - 1) {
        res.tau[w - 1] = t;
        res.declared = static_cast<std::size_t>(std::find(eliminated.begin(), eliminated.end(), 0) -
                                                eliminated.begin());
      } else {
        res.anomaly = true;
      }
      return true;
    }
    return false;
  };

  if (cfg.horizon > 0) drive(env, cfg.effective_policy(), all, nullptr, after_pull);

  res.observations = env.time();
  res.complete = n_eliminated >= w - 1;
  res.correct = res.complete && res.declared && *res.declared == best_arm(means);
  if (cfg.timing) res.wall_ms = elapsed_ms(start);
  return res;
}

// TYPE1 and POWER1 share the machinery; only the meaning of "correct" differs.
PathResult hypothesis_path(const ExperimentConfig& cfg, std::size_t path_id, std::uint64_t seed) {
  const auto start = Clock::now();
  const std::size_t w = cfg.arm_count();
  Environment env(cfg, seed);
  PathResult res;
  res.path_id = path_id;
  res.seed = seed;
  res.tau.assign(w, std::nullopt);
  std::vector<double> m = cfg.hypothesis ? *cfg.hypothesis : true_means(cfg);
  if (cfg.region && is_point(*cfg.region)) m = std::get<PointRegion>(*cfg.region).m;

  std::vector<std::size_t> all(w);
  for (std::size_t a = 0; a < w; ++a) all[a] = a;

  std::optional<std::size_t> rejected_at;
  const auto kind = cfg.method.kind;
  const bool region_test = cfg.region && !is_point(*cfg.region);
  TestTracker tracker(region_test ? *cfg.region : Region{PointRegion{m}}, cfg.alpha);
  UnionTracker union_tracker(m, cfg.alpha);
  MinimumCache cache;
  std::vector<ArmInterval> intervals;
  if (kind == MethodSpec::Kind::Base || kind == MethodSpec::Kind::Hedged) {
    for (std::size_t a = 0; a < w; ++a) intervals.emplace_back(cfg, Problem::Type1);
  }

  auto after_pull = [&]() {
    const std::size_t t = env.time();
    const std::size_t pulled = env.joint.actions().back();
    bool reject = false;
    switch (kind) {
      case MethodSpec::Kind::Peak:
        reject = (region_test ? step_region_test(tracker, env.joint, cache.update(env.joint))
                              : step_point_test(tracker, env.joint)) == Decision::Rejected;
        break;
      case MethodSpec::Kind::UnionPeak:
        reject = union_test(union_tracker, env.joint) == Decision::Rejected;
        break;
      default:
        intervals[pulled].update(env.joint, env.stats, pulled);
        reject = !intervals[pulled].current().contains(m[pulled]);
        break;
    }
    if (reject) rejected_at = t;
    return reject;
  };

  if (cfg.horizon > 0) drive(env, cfg.effective_policy(), all, nullptr, after_pull);

  res.observations = env.time();
  res.tau[0] = rejected_at;
  res.complete = true;
  res.correct = cfg.problem == Problem::Type1 ? !rejected_at : rejected_at.has_value();
  if (cfg.timing) res.wall_ms = elapsed_ms(start);
  return res;
}

std::vector<PathResult> run_paths(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<PathResult> paths(cfg.n_paths);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    try {
      for (std::size_t i = next++; i < cfg.n_paths; i = next++) {
        paths[i] = run_path(cfg, i, derive_seed(cfg.seed, i));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = cfg.n_paths;
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(cfg.threads, cfg.n_paths));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return paths;
}

ExperimentResult run_checked(const ExperimentConfig& cfg, Problem expected) {
  if (cfg.problem != expected) {
    throw ConfigError("problem", "expected problem " + describe(expected) + ", got " +
                                     describe(cfg.problem));
  }
  ExperimentResult r;
  r.paths = run_paths(cfg);
  r.summary = summarize(cfg, r.paths);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

Problem parse_problem(std::string_view text) {
  if (text == "thr" || text == "THR") return Problem::Thr;
  if (text == "bai" || text == "BAI") return Problem::Bai;
  if (text == "type1" || text == "TYPE1") return Problem::Type1;
  if (text == "power1" || text == "POWER1") return Problem::Power1;
  throw ConfigError("problem", "unknown problem '" + std::string(text) + "'");
}

PolicyKind parse_policy(std::string_view text) {
  if (text == "auto") return PolicyKind::Auto;
  if (text == "hdoc") return PolicyKind::Hdoc;
  if (text == "lucb") return PolicyKind::Lucb;
  if (text == "uniform") return PolicyKind::Uniform;
  if (text == "epsilon-greedy" || text == "egreedy") return PolicyKind::EpsilonGreedy;
  throw ConfigError("policy", "unknown policy '" + std::string(text) + "'");
}

MethodSpec parse_method(std::string_view text) {
  MethodSpec m;
  if (text == "peak") return m;
  if (text == "base") {
    m.kind = MethodSpec::Kind::Base;
    return m;
  }
  if (text == "union-peak") {
    m.kind = MethodSpec::Kind::UnionPeak;
    return m;
  }
  if (text.substr(0, 6) == "hedged") {
    m.kind = MethodSpec::Kind::Hedged;
    if (text.size() == 6) return m;
    if (text[6] == ':' && text.size() > 7) {
      std::size_t n = 0;
      for (char ch : text.substr(7)) {
        if (ch < '0' || ch > '9') throw ConfigError("method", "bad hedged grid size in '" + std::string(text) + "'");
        n = n * 10 + static_cast<std::size_t>(ch - '0');
      }
      if (n == 0) throw ConfigError("method", "hedged grid size must be positive");
      m.grid = n;
      return m;
    }
  }
  throw ConfigError("method", "unknown method '" + std::string(text) + "'");
}

std::string describe(Problem p) {
  switch (p) {
    case Problem::Thr: return "thr";
    case Problem::Bai: return "bai";
    case Problem::Type1: return "type1";
    case Problem::Power1: return "power1";
  }
  return "?";
}

std::string describe(PolicyKind p) {
  switch (p) {
    case PolicyKind::Auto: return "auto";
    case PolicyKind::Hdoc: return "hdoc";
    case PolicyKind::Lucb: return "lucb";
    case PolicyKind::Uniform: return "uniform";
    case PolicyKind::EpsilonGreedy: return "epsilon-greedy";
  }
  return "?";
}

std::string describe(const MethodSpec& m) {
  switch (m.kind) {
    case MethodSpec::Kind::Peak: return "peak";
    case MethodSpec::Kind::Base: return "base";
    case MethodSpec::Kind::UnionPeak: return "union-peak";
    case MethodSpec::Kind::Hedged: return "hedged:" + std::to_string(m.grid);
  }
  return "?";
}

PolicyKind ExperimentConfig::effective_policy() const noexcept {
  if (policy != PolicyKind::Auto) return policy;
  switch (problem) {
    case Problem::Thr: return PolicyKind::Hdoc;
    case Problem::Bai: return PolicyKind::Lucb;
    default: return PolicyKind::Uniform;
  }
}

void ExperimentConfig::validate() const {
  if (arms.empty()) throw ConfigError("arms", "at least one arm is required");
  for (const auto& a : arms) {
    try {
      peak::validate(a);
    } catch (const DomainError& e) {
      throw ConfigError("arms", e.what());
    }
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha", "alpha must lie in (0,1)");
  try {
    stream.validate();
  } catch (const DomainError& e) {
    throw ConfigError("c", e.what());
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon", "epsilon must lie in [0,1]");
  if (problem == Problem::Thr) {
    if (!xi) throw ConfigError("xi", "THR needs a threshold xi");
    if (!(*xi >= 0.0 && *xi <= 1.0)) throw ConfigError("xi", "xi must lie in [0,1]");
    if (effective_policy() == PolicyKind::Lucb) throw ConfigError("policy", "LUCB is a BAI policy");
  }
  if (hypothesis) {
    if (hypothesis->size() != arms.size()) {
      throw ConfigError("hypothesis", "hypothesis needs one coordinate per arm");
    }
    for (double v : *hypothesis) {
      if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("hypothesis", "coordinates must lie in [0,1]");
    }
  }
  if (region) {
    try {
      peak::validate(*region, arms.size());
    } catch (const DomainError& e) {
      throw ConfigError("region", e.what());
    }
    const bool composite = !is_point(*region);
    if (composite && method.kind != MethodSpec::Kind::Peak) {
      throw ConfigError("region", "composite regions are only tested by the peak method");
    }
  }
  if (method.kind == MethodSpec::Kind::Hedged && method.grid == 0) {
    throw ConfigError("method", "hedged grid size must be positive");
  }
}

PathResult run_path(const ExperimentConfig& cfg, std::size_t path_id, std::uint64_t seed) {
  switch (cfg.problem) {
    case Problem::Thr: return thr_path(cfg, path_id, seed);
    case Problem::Bai: return bai_path(cfg, path_id, seed);
    case Problem::Type1:
    case Problem::Power1: return hypothesis_path(cfg, path_id, seed);
  }
  throw DomainError("unknown problem");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult r;
  r.paths = run_paths(cfg);
  r.summary = summarize(cfg, r.paths);
  return r;
}

ExperimentResult run_thr(const ExperimentConfig& cfg) { return run_checked(cfg, Problem::Thr); }
ExperimentResult run_bai(const ExperimentConfig& cfg) { return run_checked(cfg, Problem::Bai); }
ExperimentResult type1_mc(const ExperimentConfig& cfg) { return run_checked(cfg, Problem::Type1); }
ExperimentResult power1_check(const ExperimentConfig& cfg) {
  return run_checked(cfg, Problem::Power1);
}

ExperimentSummary summarize(const ExperimentConfig& cfg, const std::vector<PathResult>& paths) {
  ExperimentSummary s;
  s.paths = paths.size();
  const std::size_t w = cfg.arm_count();
  std::vector<std::vector<double>> taus(w);
  std::size_t rejected = 0;
  for (const auto& p : paths) {
    if (p.anomaly) ++s.anomalies;
    if (!p.tau.empty() && p.tau[0]) ++rejected;
    if (!p.complete) continue;
    ++s.complete;
    if (p.correct) ++s.correct;
    for (std::size_t i = 0; i < w && i < p.tau.size(); ++i) {
      if (p.tau[i]) taus[i].push_back(static_cast<double>(*p.tau[i]));
    }
  }
  for (const auto& v : taus) {
    TauSummary t;
    t.count = v.size();
    if (!v.empty()) {
      double sum = 0.0;
      for (double x : v) sum += x;
      t.mean = sum / static_cast<double>(v.size());
      if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - t.mean) * (x - t.mean);
        t.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
        t.se = t.sd / std::sqrt(static_cast<double>(v.size()));
      }
    }
    s.tau.push_back(t);
  }
  if (!paths.empty()) {
    const double n = static_cast<double>(paths.size());
    s.rejection_rate = static_cast<double>(rejected) / n;
    s.rejection_se = std::sqrt(s.rejection_rate * (1.0 - s.rejection_rate) / n);
  }
  return s;
}

std::string fmt10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::vector<std::string> summary_lines(const ExperimentConfig& cfg, const ExperimentSummary& s) {
  std::vector<std::string> out;
  out.push_back("problem=" + describe(cfg.problem) + " method=" + describe(cfg.method) +
                " policy=" + describe(cfg.effective_policy()) + " alpha=" + fmt10(cfg.alpha) +
                " c=" + fmt10(cfg.stream.c) + " horizon=" + std::to_string(cfg.horizon) +
                " seed=" + std::to_string(cfg.seed));
  out.push_back("paths=" + std::to_string(s.paths) + " complete=" + std::to_string(s.complete) +
                " correct=" + std::to_string(s.correct) + " anomalies=" + std::to_string(s.anomalies));
  if (cfg.problem == Problem::Type1 || cfg.problem == Problem::Power1) {
    out.push_back("rejection_rate=" + fmt10(s.rejection_rate) + " se=" + fmt10(s.rejection_se));
  } else {
    for (std::size_t i = 0; i < s.tau.size(); ++i) {
      const auto& t = s.tau[i];
      out.push_back("tau_" + std::to_string(i + 1) + " n=" + std::to_string(t.count) +
                    " mean=" + fmt10(t.mean) + " sd=" + fmt10(t.sd) + " se=" + fmt10(t.se));
    }
  }
  return out;
}

void write_results_csv(std::ostream& os, const ExperimentConfig& cfg, const ExperimentResult& r) {
  const std::size_t w = cfg.arm_count();
  os << "path_id,seed";
  for (std::size_t i = 1; i <= w; ++i) os << ",tau_" << i;
  os << ",complete,correct,wall_ms\n";
  for (const auto& p : r.paths) {
    os << p.path_id << ',' << p.seed;
    for (std::size_t i = 0; i < w; ++i) {
      os << ',';
      if (i < p.tau.size() && p.tau[i]) os << *p.tau[i];
    }
    os << ',' << (p.complete ? 1 : 0) << ',' << (p.correct ? 1 : 0) << ',' << fmt10(p.wall_ms)
       << '\n';
  }
  for (const auto& line : summary_lines(cfg, r.summary)) os << "# " << line << '\n';
}

// ---------------------------------------------------------------------------

namespace {

struct BenchStream {
  std::vector<std::uint32_t> arms;
  std::vector<double> xs;
};

BenchStream bench_stream(const BenchConfig& cfg, std::uint64_t seed) {
  const std::size_t w = cfg.arms.size();
  Rng rng(seed);
  ArmStats stats(w);
  BenchStream s;
  auto pull = [&](std::size_t a) {
    const double x = sample(cfg.arms[a], rng);
    stats.record(a, x);
    s.arms.push_back(static_cast<std::uint32_t>(a));
    s.xs.push_back(x);
  };
  std::vector<std::size_t> all(w);
  for (std::size_t a = 0; a < w; ++a) all[a] = a;
  while (s.xs.size() < cfg.horizon) {
    const auto unpulled = first_unpulled(stats, all);
    if (unpulled < w) {
      pull(unpulled);
      continue;
    }
    if (w < 2) {
      pull(0);
      continue;
    }
    const auto [leader, challenger] = lucb_select(stats, cfg.alpha);
    pull(leader);
    if (s.xs.size() < cfg.horizon) pull(challenger);
  }
  return s;
}

// Every test recomputes each region's statistic from the stored history.
std::size_t bench_peak(const BenchConfig& cfg, const BenchStream& s) {
  const std::size_t w = cfg.arms.size();
  JointState joint(w, cfg.stream);
  std::vector<TestTracker> trackers;
  for (std::size_t a = 0; a < w; ++a) trackers.emplace_back(BestArm{a}, cfg.alpha);
  for (std::size_t i = 0; i < s.xs.size(); ++i) {
    joint.observe(s.arms[i], s.xs[i]);
    if ((i + 1) % cfg.test_every != 0) continue;
    const auto gm = global_minimum(joint);
    for (std::size_t a = 0; a < w; ++a) {
      trackers[a].record(minimize_bai(joint, a, gm).value(), joint.time());
    }
  }
  std::size_t survivors = 0;
  for (const auto& t : trackers) survivors += t.rejected() ? 0 : 1;
  return survivors;
}

std::size_t bench_hedged(const BenchConfig& cfg, const BenchStream& s, std::size_t grid_size) {
  const std::size_t w = cfg.arms.size();
  const double split = cfg.alpha / static_cast<double>(w);
  const auto grid = unit_grid(grid_size);
  std::vector<std::vector<double>> history(w);
  std::vector<char> eliminated(w, 0);
  std::vector<Interval> sets(w);
  for (std::size_t i = 0; i < s.xs.size(); ++i) {
    history[s.arms[i]].push_back(s.xs[i]);
    if ((i + 1) % cfg.test_every != 0) continue;
    for (std::size_t a = 0; a < w; ++a) {
      const auto bets = hedged_bets(history[a], split);
      Interval hull;
      hull.empty = true;
      for (double m : grid) {
        if (!hedged_membership(history[a], bets, m, 0.5, split)) continue;
        if (hull.empty) {
          hull = {m, m, false};
        } else {
          hull.hi = m;
        }
      }
      sets[a] = hull;
    }
    for (std::size_t a = 0; a < w; ++a) {
      if (sets[a].empty) eliminated[a] = 1;
      for (std::size_t b = 0; b < w; ++b) {
        if (b != a && !sets[b].empty && !sets[a].empty && sets[b].lo > sets[a].hi) eliminated[a] = 1;
      }
    }
  }
  std::size_t survivors = 0;
  for (char e : eliminated) survivors += e ? 0 : 1;
  return survivors;
}

}  // namespace

std::vector<BenchRow> bench_runtime(const BenchConfig& cfg) {
  if (cfg.arms.empty()) throw ConfigError("arms", "bench needs at least one arm");
  if (cfg.test_every == 0) throw ConfigError("test_every", "test cadence must be positive");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("alpha", "alpha must lie in (0,1)");
  std::vector<BenchRow> rows;
  for (const auto& m : cfg.methods) rows.push_back({m, 0, 0.0, 0.0, 0});
  if (cfg.n_paths == 0) return rows;

  std::vector<std::vector<double>> seconds(cfg.methods.size());
  for (std::size_t p = 0; p < cfg.n_paths; ++p) {
    const auto stream = bench_stream(cfg, derive_seed(cfg.seed, p));
    for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
      const auto& m = cfg.methods[k];
      const auto start = Clock::now();
      std::size_t survivors = 0;
      switch (m.kind) {
        case MethodSpec::Kind::Peak:
          survivors = bench_peak(cfg, stream);
          break;
        case MethodSpec::Kind::Hedged:
          survivors = bench_hedged(cfg, stream, m.grid);
          break;
        default:
          throw ConfigError("methods", "bench supports peak and hedged:N, got " + describe(m));
      }
      seconds[k].push_back(elapsed_ms(start) / 1000.0);
      rows[k].survivors += survivors;
    }
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& v = seconds[k];
    const double n = static_cast<double>(v.size());
    double sum = 0.0;
    for (double x : v) sum += x;
    rows[k].paths = v.size();
    rows[k].mean_seconds = sum / n;
    if (v.size() > 1) {
      double ss = 0.0;
      for (double x : v) ss += (x - rows[k].mean_seconds) * (x - rows[k].mean_seconds);
      rows[k].se_seconds = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
  }
  return rows;
}

void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << "method,paths,mean_s,se_s,survivors\n";
  for (const auto& r : rows) {
    os << describe(r.method) << ',' << r.paths << ',' << fmt10(r.mean_seconds) << ','
       << fmt10(r.se_seconds) << ',' << r.survivors << '\n';
  }
}

}  // namespace peak
