// peak: command-line front end for the simulation harness, confidence
// sequences, growth tables, stream replay and the runtime benchmark.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "peak/errors.hpp"

namespace {

using peak::cli::KeySpec;
using peak::cli::Settings;

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

struct Subcommand {
  CLI::App* app = nullptr;
  std::vector<KeySpec> keys;
  std::string config;
  std::vector<std::string> assignments;
  std::map<std::string, std::vector<std::string>> flags;
  std::function<int(const Settings&, std::ostream&)> run;
};

std::string dashed(std::string key) {
  for (auto& ch : key) {
    if (ch == '_') ch = '-';
  }
  return key;
}

void add_subcommand(CLI::App& root, std::vector<Subcommand>& subs, const std::string& name,
                    const std::string& help, std::vector<KeySpec> keys,
                    std::function<int(const Settings&, std::ostream&)> run) {
  auto& sub = subs.emplace_back();
  sub.app = root.add_subcommand(name, help);
  sub.keys = std::move(keys);
  sub.run = std::move(run);
  sub.app->add_option("--config", sub.config, "flat key = value file");
  sub.app->add_option("--set", sub.assignments, "key=value override, repeatable");
  for (const auto& k : sub.keys) {
    std::string names = "--" + dashed(k.name);
    if (k.name.find('_') != std::string::npos) names += ",--" + k.name;
    sub.app->add_option(names, sub.flags[k.name], k.help)->allow_extra_args(false);
  }
}

// defaults < --config < --set < --key
Settings resolve(const Subcommand& sub) {
  Settings s(sub.keys);
  if (!sub.config.empty()) s.load_file(sub.config);
  for (const auto& a : sub.assignments) s.assign(a);
  for (const auto& [key, values] : sub.flags) {
    if (values.empty()) continue;
    if (key == "region") {
      std::string joined;
      for (const auto& v : values) joined += (joined.empty() ? "" : " ") + v;
      s.set(key, joined);
    } else {
      s.set(key, values.back());
    }
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PEAK anytime-valid tests: simulation, confidence sequences, replay"};
  app.require_subcommand(1);
  // Subcommand pointers stay valid: reserve before taking addresses.
  std::vector<Subcommand> subs;
  subs.reserve(5);
  add_subcommand(app, subs, "simulate", "run THR, BAI, type-I or power experiments",
                 peak::cli::simulate_keys(), peak::cli::run_simulate);
  add_subcommand(app, subs, "confseq", "confidence sequences on one simulated stream",
                 peak::cli::confseq_keys(), peak::cli::run_confseq);
  add_subcommand(app, subs, "growth", "growth-rate grid with header m,mu,G,f",
                 peak::cli::growth_keys(), peak::cli::run_growth);
  add_subcommand(app, subs, "replay", "sequential region tests over a recorded stream",
                 peak::cli::replay_keys(), peak::cli::run_replay);
  add_subcommand(app, subs, "bench", "fixed-horizon BAI runtime comparison",
                 peak::cli::bench_keys(), peak::cli::run_bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  for (const auto& sub : subs) {
    if (!sub.app->parsed()) continue;
    try {
      const auto settings = resolve(sub);
      return sub.run(settings, std::cout);
    } catch (const peak::ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kUsageError;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kRuntimeError;
    }
  }
  return kUsageError;
}
