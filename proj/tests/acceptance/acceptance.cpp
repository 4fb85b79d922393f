// Acceptance checks, one PASS/FAIL line per criterion.
//
//   peak_acceptance          run all ten
//   peak_acceptance 3 7      run a subset
//
// Exit status is nonzero when any selected criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "peak/checkpoint.hpp"
#include "peak/confseq.hpp"
#include "peak/growth.hpp"
#include "peak/harness.hpp"
#include "peak/regions.hpp"
#include "peak/replay.hpp"

using namespace peak;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) {
      pass = false;
      detail += " [x]";
    }
  }
};

std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::size_t workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<double> true_means(const std::vector<ArmDistribution>& arms) {
  std::vector<double> out;
  for (const auto& a : arms) out.push_back(mean(a));
  return out;
}

// --- 1 ---------------------------------------------------------------------

Verdict type_one() {
  Verdict v;
  const double bound = 0.05 + 3.0 * std::sqrt(0.05 * 0.95 / 5000.0);
  auto base = [] {
    ExperimentConfig cfg;
    cfg.problem = Problem::Type1;
    cfg.alpha = 0.05;
    cfg.horizon = 2000;
    cfg.n_paths = 5000;
    cfg.seed = 101;
    cfg.threads = workers();
    return cfg;
  };
  struct Case {
    std::string name;
    ExperimentConfig cfg;
  };
  std::vector<Case> cases;
  {
    auto cfg = base();
    cfg.arms = {ArmDistribution{Bernoulli{0.5}}};
    cfg.hypothesis = std::vector<double>{0.5};
    cases.push_back({"W1", cfg});
  }
  for (auto policy : {PolicyKind::Uniform, PolicyKind::Hdoc}) {
    auto cfg = base();
    cfg.arms = preset_arms("paper-bern");
    cfg.hypothesis = true_means(cfg.arms);
    cfg.policy = policy;
    cfg.seed = policy == PolicyKind::Uniform ? 102 : 103;
    cases.push_back({"W4-" + describe(policy), cfg});
  }
  {
    auto cfg = base();
    cfg.arms = preset_arms("paper-bern");
    cfg.region = BestArm{3};
    cfg.policy = PolicyKind::Uniform;
    cfg.seed = 104;
    cases.push_back({"W4-uniform-bai:3", cfg});
  }
  for (const auto& c : cases) {
    const auto r = type1_mc(c.cfg);
    v.require(r.summary.rejection_rate <= bound,
              c.name + " rate=" + num(r.summary.rejection_rate) + "<=" + num(bound));
  }
  return v;
}

// --- 2 ---------------------------------------------------------------------

Verdict power_one() {
  Verdict v;
  {
    ExperimentConfig cfg;
    cfg.problem = Problem::Power1;
    cfg.arms = {ArmDistribution{Bernoulli{0.5}}};
    cfg.hypothesis = std::vector<double>{0.3};
    cfg.horizon = 5000;
    cfg.n_paths = 200;
    cfg.seed = 201;
    cfg.threads = workers();
    const auto r = power1_check(cfg);
    v.require(r.summary.rejection_rate == 1.0, "W1 m=0.3 reject=" + num(r.summary.rejection_rate));
  }
  for (std::size_t wrong = 0; wrong < 4; wrong += 3) {
    ExperimentConfig cfg;
    cfg.problem = Problem::Power1;
    cfg.arms = preset_arms("paper-bern");
    auto h = true_means(cfg.arms);
    h[wrong] += wrong == 0 ? 0.2 : -0.2;
    cfg.hypothesis = h;
    cfg.policy = PolicyKind::Uniform;
    cfg.horizon = 10000;
    cfg.n_paths = 200;
    cfg.seed = 202 + wrong;
    cfg.threads = workers();
    const auto r = power1_check(cfg);
    v.require(r.summary.rejection_rate == 1.0, "W4 arm" + std::to_string(wrong) + "+-0.2 reject=" +
                                                   num(r.summary.rejection_rate));
  }
  return v;
}

// --- 3, 4 ------------------------------------------------------------------

void reproduce(Verdict& v, Problem problem, const std::string& preset, double reference) {
  ExperimentConfig cfg;
  cfg.problem = problem;
  cfg.arms = preset_arms(preset);
  cfg.xi = 0.5;
  cfg.alpha = 0.05;
  cfg.n_paths = 100;
  cfg.horizon = 100000;
  cfg.seed = 2024;
  cfg.threads = workers();
  const auto r = run_experiment(cfg);
  const auto& s = r.summary;
  const double tau = s.tau.back().mean;
  const double rel = tau / reference - 1.0;
  v.require(s.complete == 100 && s.correct == 100 && std::abs(rel) <= 0.30,
            preset + " tau=" + num(tau, 6) + " (ref " + num(reference, 6) + ", " +
                num(100.0 * rel, 3) + "%) correct=" + std::to_string(s.correct) + "/" +
                std::to_string(s.complete));
}

Verdict table_one() {
  Verdict v;
  reproduce(v, Problem::Thr, "paper-beta", 725.81);
  reproduce(v, Problem::Thr, "paper-bern", 1678.08);
  return v;
}

Verdict table_two() {
  Verdict v;
  reproduce(v, Problem::Bai, "paper-beta", 708.52);
  reproduce(v, Problem::Bai, "paper-bern", 1318.14);
  reproduce(v, Problem::Bai, "paper-beta-contaminated", 705.72);
  return v;
}

// --- 5 ---------------------------------------------------------------------

Verdict union_dominance() {
  Verdict v;
  Rng rng(501);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t violations = 0;
  std::size_t union_rejections = 0;
  std::size_t point_rejections = 0;
  for (int path = 0; path < 1000; ++path) {
    const std::size_t w = 2 + static_cast<std::size_t>(u(rng) * 4.0);
    std::vector<double> p(w);
    std::vector<double> m(w);
    for (std::size_t a = 0; a < w; ++a) {
      p[a] = u(rng);
      // half the coordinates near the truth, half anywhere
      m[a] = u(rng) < 0.5 ? std::clamp(p[a] + 0.1 * (u(rng) - 0.5), 0.0, 1.0) : u(rng);
    }
    JointState joint(w, {});
    TestTracker point(PointRegion{m}, 0.05);
    UnionTracker uni(m, 0.05);
    for (std::size_t t = 0; t < 600; ++t) {
      const std::size_t a = static_cast<std::size_t>(u(rng) * static_cast<double>(w)) % w;
      joint.observe(a, u(rng) < p[a] ? 1.0 : 0.0);
      step_point_test(point, joint);
      union_test(uni, joint);
      if (uni.decided_at && (!point.decided_at || *uni.decided_at < *point.decided_at)) {
        ++violations;
        break;
      }
    }
    union_rejections += uni.decided_at.has_value();
    point_rejections += point.decided_at.has_value();
  }
  v.require(violations == 0, "violations=" + std::to_string(violations) +
                                 " union rejections=" + std::to_string(union_rejections) +
                                 " point rejections=" + std::to_string(point_rejections));
  v.require(union_rejections > 50, "non-vacuous");
  return v;
}

// --- 6 ---------------------------------------------------------------------

constexpr int kGrid = 1000;  // step 1e-3

// Product form of K on the integer grid i / kGrid, computed without the library.
std::vector<double> grid_capital(const std::vector<double>& xs, double c) {
  std::vector<double> out(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) {
    const double m = static_cast<double>(i) / kGrid;
    double k = 1.0;
    double sum = 0.0;
    for (std::size_t n = 0; n < xs.size(); ++n) {
      const double mu = n == 0 ? m : sum / static_cast<double>(n);
      k *= 1.0 + (mu - m) * (xs[n] - m) / c;
      sum += xs[n];
    }
    out[i] = k;
  }
  return out;
}

// Sparse table for range minima over a grid table.
class RangeMin {
 public:
  explicit RangeMin(const std::vector<double>& v) {
    table_.push_back(v);
    for (std::size_t span = 1; 2 * span <= v.size(); span *= 2) {
      const auto& prev = table_.back();
      std::vector<double> next(v.size() - 2 * span + 1);
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::min(prev[i], prev[i + span]);
      table_.push_back(std::move(next));
    }
  }
  // inclusive [lo, hi]
  [[nodiscard]] double query(int lo, int hi) const {
    const auto len = static_cast<unsigned>(hi - lo + 1);
    const int k = static_cast<int>(std::bit_width(len)) - 1;
    return std::min(table_[k][lo], table_[k][hi - (1 << k) + 1]);
  }

 private:
  std::vector<std::vector<double>> table_;
};

struct Instance {
  std::vector<std::vector<double>> xs;
  JointState joint;
  std::vector<std::vector<double>> tab;
};

// 1e-3 on the E scale: absolute below 1, relative above (E reaches ~1e19 at
// t = 50, where doubles cannot resolve absolute differences of 1e-3).
double scaled_gap(double lib, double grid) { return std::abs(lib - grid) / std::max(1.0, grid); }

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Integer constraint sum_a c_a i_a <= bound with c_a in {-1, 0, 1}.
struct IntConstraint {
  std::vector<int> c;
  int bound;
};

// Grid minimum of E over {i : constraints hold}. The last coordinate is
// handled by a range minimum over its feasible index interval.
double grid_polytope(const Instance& in, const std::vector<IntConstraint>& cons) {
  const std::size_t w = in.xs.size();
  const RangeMin last(in.tab[w - 1]);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx(w - 1, 0);
  const double inv_w = 1.0 / static_cast<double>(w);
  while (true) {
    int lo = 0;
    int hi = kGrid;
    for (const auto& k : cons) {
      int partial = 0;
      for (std::size_t a = 0; a + 1 < w; ++a) partial += k.c[a] * idx[a];
      const int rest = k.bound - partial;
      const int cl = k.c[w - 1];
      if (cl == 0) {
        if (rest < 0) hi = -1;
      } else if (cl > 0) {
        hi = std::min(hi, rest);
      } else {
        lo = std::max(lo, -rest);
      }
    }
    if (lo <= hi) {
      double s = last.query(lo, hi);
      for (std::size_t a = 0; a + 1 < w; ++a) s += in.tab[a][idx[a]];
      best = std::min(best, s * inv_w);
    }
    std::size_t a = 0;
    while (a < idx.size() && ++idx[a] > kGrid) idx[a++] = 0;
    if (a == idx.size()) break;
  }
  return best;
}

Verdict oracle_equivalence() {
  Verdict v;
  Rng rng(601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const StreamConfig cfg;
  double worst_point = 0.0, worst_thr = 0.0, worst_bai = 0.0, worst_poly = 0.0, worst_arg = 0.0;
  std::size_t polys = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t w = 1 + static_cast<std::size_t>(u(rng) * 3.0) % 3;
    const std::size_t t = 2 + static_cast<std::size_t>(u(rng) * 49.0);
    Instance in{std::vector<std::vector<double>>(w), JointState(w, cfg), {}};
    std::vector<double> p(w);
    for (auto& x : p) x = 0.1 + 0.8 * u(rng);
    const bool bernoulli = inst % 2 == 0;
    for (std::size_t n = 0; n < t; ++n) {
      const std::size_t a = static_cast<std::size_t>(u(rng) * static_cast<double>(w)) % w;
      const double x = bernoulli ? (u(rng) < p[a] ? 1.0 : 0.0) : std::pow(u(rng), 1.0 / (4.0 * p[a]));
      in.xs[a].push_back(x);
      in.joint.observe(a, x);
    }
    for (const auto& xs : in.xs) in.tab.push_back(grid_capital(xs, cfg.c));

    // global minimizer per coordinate against a 1e-4 grid
    const auto gm = global_minimum(in.joint);
    for (std::size_t a = 0; a < w; ++a) {
      if (in.xs[a].size() < 2) continue;  // flat capital, 0.5 by convention
      double best = std::numeric_limits<double>::infinity();
      double arg = 0.0;
      for (int i = 0; i <= 10000; ++i) {
        const double m = i * 1e-4;
        const double val = log_capital(in.joint.stream(a), cfg, m);
        if (val < best) {
          best = val;
          arg = m;
        }
      }
      worst_arg = std::max(worst_arg, std::abs(gm.point[a] - arg));
    }

    // point
    {
      std::vector<int> idx(w);
      std::vector<double> m(w);
      std::vector<double> vals(w);
      for (std::size_t a = 0; a < w; ++a) {
        idx[a] = static_cast<int>(u(rng) * kGrid);
        m[a] = static_cast<double>(idx[a]) / kGrid;
        vals[a] = in.tab[a][idx[a]];
      }
      const double lib = minimize_region(in.joint, PointRegion{m}).value();
      worst_point = std::max(worst_point, scaled_gap(lib, mean_of(vals)));
    }
    // threshold, both sides, xi on the grid
    {
      const std::size_t arm = static_cast<std::size_t>(u(rng) * static_cast<double>(w)) % w;
      const int xi = 100 + static_cast<int>(u(rng) * 800.0);
      for (int side = 0; side < 2; ++side) {
        std::vector<double> mins(w);
        for (std::size_t a = 0; a < w; ++a) {
          const auto& tab = in.tab[a];
          auto first = tab.begin();
          auto last = tab.end();
          if (a == arm) {
            if (side == 0) last = tab.begin() + xi + 1;
            else first = tab.begin() + xi;
          }
          mins[a] = *std::min_element(first, last);
        }
        const double xv = static_cast<double>(xi) / kGrid;
        const Region r = side == 0 ? Region{ThresholdBelow{arm, xv}} : Region{ThresholdAbove{arm, xv}};
        const double lib = minimize_region(in.joint, r).value();
        worst_thr = std::max(worst_thr, scaled_gap(lib, mean_of(mins)));
      }
    }
    // best arm
    if (w >= 2) {
      const std::size_t target = static_cast<std::size_t>(u(rng) * static_cast<double>(w)) % w;
      std::vector<std::vector<double>> prefix(w);
      for (std::size_t a = 0; a < w; ++a) {
        prefix[a] = in.tab[a];
        for (int i = 1; i <= kGrid; ++i) prefix[a][i] = std::min(prefix[a][i], prefix[a][i - 1]);
      }
      double best = std::numeric_limits<double>::infinity();
      for (int q = 0; q <= kGrid; ++q) {
        double s = in.tab[target][q];
        for (std::size_t b = 0; b < w; ++b) {
          if (b != target) s += prefix[b][q];
        }
        best = std::min(best, s / static_cast<double>(w));
      }
      const double lib = minimize_region(in.joint, BestArm{target}).value();
      worst_bai = std::max(worst_bai, scaled_gap(lib, best));
      if (scaled_gap(lib, best) > 1e-3) std::fprintf(stderr, "bai inst %d w=%zu lib=%.9g grid=%.9g\n", inst, w, lib, best);
    }
    // two random constraints with coefficients in {-1,0,1}; even integer
    // bounds keep every vertex on the grid
    {
      std::vector<IntConstraint> cons;
      Polytope poly;
      while (cons.size() < 2) {
        IntConstraint k{std::vector<int>(w), 0};
        bool nonzero = false;
        for (auto& c : k.c) {
          c = static_cast<int>(u(rng) * 3.0) - 1;
          nonzero = nonzero || c != 0;
        }
        if (!nonzero) continue;
        k.bound = 2 * static_cast<int>((u(rng) - 0.3) * 500.0);
        cons.push_back(k);
      }
      for (const auto& k : cons) {
        LinearConstraint lc;
        for (int c : k.c) lc.coeffs.push_back(c);
        lc.bound = static_cast<double>(k.bound) / kGrid;
        poly.constraints.push_back(lc);
      }
      const double grid = grid_polytope(in, cons);
      if (std::isfinite(grid)) {
        ++polys;
        const double lib = minimize_region(in.joint, poly).value();
        worst_poly = std::max(worst_poly, scaled_gap(lib, grid));
        if (scaled_gap(lib, grid) > 1e-3) std::fprintf(stderr, "poly inst %d w=%zu lib=%.9g grid=%.9g\n", inst, w, lib, grid);
      }
    }
  }
  v.require(worst_point <= 1e-3, "point dev=" + num(worst_point));
  v.require(worst_thr <= 1e-3, "thr dev=" + num(worst_thr));
  v.require(worst_bai <= 1e-3, "bai dev=" + num(worst_bai));
  v.require(worst_poly <= 1e-3 && polys >= 100,
            "polytope dev=" + num(worst_poly) + " over " + std::to_string(polys));
  v.require(worst_arg <= 1e-4, "argmin dev=" + num(worst_arg));
  return v;
}

// --- 7 ---------------------------------------------------------------------

Verdict growth_analytics() {
  Verdict v;
  const std::vector<double> cs{0.26, 0.30, 0.50};
  std::vector<std::vector<GrowthRow>> grids;
  for (double c : cs) grids.push_back(emit_growth_grid(c, 99));
  std::size_t bad_sign = 0, bad_zero = 0, bad_mono = 0, bad_f = 0;
  for (std::size_t k = 0; k < grids[0].size(); ++k) {
    for (std::size_t j = 0; j < cs.size(); ++j) {
      const auto& r = grids[j][k];
      const bool diagonal = r.m == r.mu;
      if (r.g < 0.0) ++bad_sign;
      if (diagonal != (r.g == 0.0)) ++bad_zero;
      if (!diagonal && !(r.f && *r.f > 0.0 && *r.f < 1.0)) ++bad_f;
      if (j > 0 && !diagonal && !(r.g < grids[j - 1][k].g)) ++bad_mono;
    }
  }
  const std::size_t expected = 99 * 99;
  v.require(grids[0].size() == expected, "rows=" + std::to_string(grids[0].size()));
  v.require(bad_sign == 0, "G>=0");
  v.require(bad_zero == 0, "zero only on diagonal");
  v.require(bad_mono == 0, "decreasing in c");
  v.require(bad_f == 0, "f in (0,1)");
  const double direct = 0.5 * std::log(1.0 + 0.2 * 0.7 / 0.26) + 0.5 * std::log(1.0 - 0.2 * 0.3 / 0.26);
  const double lib = growth_bernoulli({0.26, 0.3, 0.5});
  v.require(std::abs(lib - direct) <= 1e-12, "G(0.26,0.3,0.5)=" + num(lib, 12));
  return v;
}

// --- 8 ---------------------------------------------------------------------

Verdict confseq_coverage() {
  Verdict v;
  const int paths = 1000;
  const int length = 500;
  const double alpha = 0.05;
  const double truth = 0.5;
  const StreamConfig cfg;
  std::vector<std::size_t> misses(4, 0);
  std::size_t non_interval = 0;
  std::size_t endpoint_mismatch = 0;
  std::size_t scans = 0;
  const double log_thr = std::log(1.0 / alpha);
  for (int p = 0; p < paths; ++p) {
    Rng rng(derive_seed(801, static_cast<std::uint64_t>(p)));
    std::bernoulli_distribution d(truth);
    StreamState s;
    PeakInterval peak(cfg, alpha);
    PrPlH prplh(alpha);
    EmpBern eb(alpha);
    HedgedGrid hedged(100, alpha);
    std::vector<bool> missed(4, false);
    // Shape check on the first 25 paths: running max of log K on a 1e-3 grid.
    const bool scan = p < 25;
    std::vector<double> acc(scan ? kGrid + 1 : 0, 0.0);
    std::vector<double> run(scan ? kGrid + 1 : 0, 0.0);
    double sum = 0.0;
    for (int t = 1; t <= length; ++t) {
      const double x = d(rng) ? 1.0 : 0.0;
      s.observe(x);
      const Interval ivs[4] = {peak.update(s), prplh.update(x), eb.update(x), hedged.update(x)};
      for (int k = 0; k < 4; ++k) {
        if (!ivs[k].contains(truth)) missed[k] = true;
      }
      if (scan) {
        const double mu_prev = t == 1 ? 0.0 : sum / (t - 1);
        for (int i = 0; i <= kGrid; ++i) {
          const double m = static_cast<double>(i) / kGrid;
          if (t > 1) acc[i] += std::log(1.0 + (mu_prev - m) * (x - m) / cfg.c);
          run[i] = std::max(run[i], acc[i]);
        }
        if (t % 25 == 0) {
          ++scans;
          int first = -1, last = -1, count = 0;
          for (int i = 0; i <= kGrid; ++i) {
            if (run[i] < log_thr) {
              if (first < 0) first = i;
              last = i;
              ++count;
            }
          }
          if (count > 0 && count != last - first + 1) ++non_interval;
          const auto& iv = ivs[0];
          if (count > 0 && (iv.empty || std::abs(iv.lo - first / 1000.0) > 1e-3 ||
                            std::abs(iv.hi - last / 1000.0) > 1e-3)) {
            ++endpoint_mismatch;
          }
        }
      }
      sum += x;
    }
    for (int k = 0; k < 4; ++k) misses[k] += missed[k];
  }
  const double bound = alpha + 3.0 * std::sqrt(alpha * (1.0 - alpha) / paths);
  const char* names[4] = {"peak", "prplh", "emp-bern", "hedged"};
  for (int k = 0; k < 4; ++k) {
    const double rate = static_cast<double>(misses[k]) / paths;
    v.require(rate <= bound, std::string(names[k]) + " miss=" + num(rate));
  }
  v.require(non_interval == 0 && scans > 0,
            "peak interval at " + std::to_string(scans - non_interval) + "/" + std::to_string(scans) + " scans");
  v.require(endpoint_mismatch == 0, "endpoint mismatches=" + std::to_string(endpoint_mismatch));
  return v;
}

// --- 9 ---------------------------------------------------------------------

Verdict runtime_ordering() {
  Verdict v;
  BenchConfig cfg;
  cfg.arms = preset_arms("paper-bern");
  cfg.horizon = 2000;
  cfg.test_every = 2;
  cfg.n_paths = 3;
  cfg.seed = 901;
  cfg.methods = {parse_method("peak"), parse_method("hedged:100"), parse_method("hedged:400")};
  const auto rows = bench_runtime(cfg);
  const double peak = rows[0].mean_seconds;
  const double h100 = rows[1].mean_seconds;
  const double h400 = rows[2].mean_seconds;
  v.require(peak < h400, "peak " + num(peak) + "s < hedged:400 " + num(h400) + "s");
  v.require(h400 >= 1.5 * h100, "hedged 400/100 ratio=" + num(h400 / h100));
  return v;
}

// --- 10 --------------------------------------------------------------------

Verdict invariants() {
  Verdict v;
  double worst = 0.0;
  for (double c : {0.25, 0.26, 0.5}) {
    for (int i = 0; i <= 20; ++i) {
      for (int j = 0; j <= 20; ++j) {
        const double mu = i / 20.0;
        const double mu_hat = j / 20.0;
        const double e = mu * detail::factor({mu_hat, 1.0}, c, mu) +
                         (1.0 - mu) * detail::factor({mu_hat, 0.0}, c, mu);
        worst = std::max(worst, std::abs(e - 1.0));
      }
    }
  }
  v.require(worst <= 1e-12, "factor mean dev=" + num(worst));

  Rng rng(1001);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  bool k1 = true;
  for (int i = 0; i < 1000; ++i) {
    StreamState s;
    s.observe(u(rng));
    k1 = k1 && capital(s, {}, u(rng)) == 1.0;
  }
  v.require(k1, "K_1 == 1");

  JointState j(3, {});
  std::vector<TestTracker> trackers;
  trackers.emplace_back(BestArm{2}, 0.05);
  trackers.emplace_back(ThresholdBelow{0, 0.5}, 0.05);
  for (int i = 0; i < 300; ++i) {
    j.observe(i % 3, u(rng) < 0.2 + 0.3 * (i % 3) ? 1.0 : 0.0);
    for (auto& t : trackers) step_region_test(t, j);
  }
  std::stringstream ss;
  checkpoint_save(j, trackers, ss);
  const auto cp = checkpoint_load(ss);
  bool same = cp.joint.time() == j.time();
  for (int k = 0; k < 20 && same; ++k) {
    const std::vector<double> m{u(rng), u(rng), u(rng)};
    same = joint_capital(cp.joint, m) == joint_capital(j, m);
  }
  for (std::size_t k = 0; k < trackers.size() && same; ++k) {
    same = cp.trackers[k].running_extreme == trackers[k].running_extreme &&
           cp.trackers[k].decided_at == trackers[k].decided_at;
  }
  v.require(same, "checkpoint round trip");

  ExperimentConfig cfg;
  cfg.problem = Problem::Bai;
  cfg.arms = preset_arms("paper-bern");
  cfg.n_paths = 8;
  cfg.seed = 1002;
  auto csv = [](const ExperimentConfig& c) {
    std::ostringstream os;
    write_results_csv(os, c, run_experiment(c));
    return os.str();
  };
  const auto a = csv(cfg);
  const auto b = csv(cfg);
  v.require(a == b, "simulation deterministic");

  std::ostringstream stream;
  for (int i = 1; i <= 200; ++i) stream << "t=" << i << " arm=" << i % 2 << " x=" << num(u(rng), 17) << '\n';
  std::istringstream s1(stream.str());
  std::istringstream s2(stream.str());
  const std::vector<Region> regions{BestArm{0}, BestArm{1}};
  const auto d1 = replay_ingest(s1, 2, 0.3, regions);
  const auto d2 = replay_ingest(s2, 2, 0.3, regions);
  bool replay_same = d1.size() == d2.size();
  for (std::size_t k = 0; k < d1.size() && replay_same; ++k) {
    replay_same = d1[k].rejected_t == d2[k].rejected_t && d1[k].running_extreme == d2[k].running_extreme;
  }
  v.require(replay_same, "replay deterministic");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"type-I control", type_one},
      {"power one", power_one},
      {"THR stopping times", table_one},
      {"BAI stopping times", table_two},
      {"union-bound dominance", union_dominance},
      {"optimization oracles", oracle_equivalence},
      {"growth-rate analytics", growth_analytics},
      {"confidence-sequence coverage and shape", confseq_coverage},
      {"runtime ordering", runtime_ordering},
      {"martingale and structural invariants", invariants},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[k].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", id, criteria[k].first.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
