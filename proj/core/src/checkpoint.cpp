#include "peak/checkpoint.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>

#include "peak/errors.hpp"

namespace peak {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "peak-checkpoint";

// JSON has no infinities; log-capitals can be -inf after a vanishing factor.
json encode(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double decode(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  throw CheckpointError("bad number '" + s + "' in checkpoint");
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

}  // namespace

void checkpoint_save(const JointState& joint, const std::vector<TestTracker>& trackers,
                     std::ostream& os, const ReplayClock& clock) {
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kCheckpointVersion;
  doc["c"] = joint.config().c;
  doc["gamma_floor"] = joint.config().gamma_floor;
  doc["arms"] = joint.arms();
  doc["actions"] = std::vector<std::uint32_t>(joint.actions().begin(), joint.actions().end());
  json obs = json::array();
  for (std::size_t a = 0; a < joint.arms(); ++a) {
    json xs = json::array();
    for (const auto& r : joint.stream(a).records()) xs.push_back(r.x);
    obs.push_back(std::move(xs));
  }
  doc["observations"] = std::move(obs);

  json ts = json::array();
  for (const auto& t : trackers) {
    json j;
    j["region"] = describe(t.region);
    j["alpha"] = t.alpha;
    j["running_extreme"] = encode(t.running_extreme);
    j["decided_at"] = optional_json(t.decided_at);
    j["cursor"] = t.cursor;
    json logs = json::array();
    for (double v : t.arm_log_capital) logs.push_back(encode(v));
    j["arm_log_capital"] = std::move(logs);
    j["arm_consumed"] = t.arm_consumed;
    ts.push_back(std::move(j));
  }
  doc["trackers"] = std::move(ts);

  json rc;
  rc["last_t"] = optional_json(clock.last_t);
  json rej = json::array();
  for (const auto& v : clock.rejected_t) rej.push_back(optional_json(v));
  rc["rejected_t"] = std::move(rej);
  doc["replay_clock"] = std::move(rc);

  os << doc.dump(1) << '\n';
  if (!os) throw CheckpointError("failed to write checkpoint");
}

void checkpoint_save(const JointState& joint, const std::vector<TestTracker>& trackers,
                     const std::filesystem::path& path, const ReplayClock& clock) {
  std::ofstream os(path);
  if (!os) throw CheckpointError("cannot open " + path.string() + " for writing");
  checkpoint_save(joint, trackers, os, clock);
}

Checkpoint checkpoint_load(std::istream& is) {
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kFormat) throw CheckpointError("not a peak checkpoint");
    const int version = doc.at("version").get<int>();
    if (version != kCheckpointVersion) {
      throw CheckpointError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                            std::to_string(kCheckpointVersion) + ")");
    }
    StreamConfig cfg;
    cfg.c = doc.at("c").get<double>();
    cfg.gamma_floor = doc.at("gamma_floor").get<double>();
    const auto arms = doc.at("arms").get<std::size_t>();
    JointState joint(arms, cfg);

    const auto actions = doc.at("actions").get<std::vector<std::uint32_t>>();
    const auto obs = doc.at("observations").get<std::vector<std::vector<double>>>();
    if (obs.size() != arms) throw CheckpointError("observation lists do not match arm count");
    std::vector<std::size_t> used(arms, 0);
    for (auto a : actions) {
      if (a >= arms || used[a] >= obs[a].size()) throw CheckpointError("action log does not match observations");
      joint.observe(a, obs[a][used[a]++]);
    }
    for (std::size_t a = 0; a < arms; ++a) {
      if (used[a] != obs[a].size()) throw CheckpointError("unreferenced observations in checkpoint");
    }

    Checkpoint cp{std::move(joint), {}, {}};
    for (const auto& j : doc.at("trackers")) {
      TestTracker t(parse_region(j.at("region").get<std::string>()), j.at("alpha").get<double>());
      t.running_extreme = decode(j.at("running_extreme"));
      t.decided_at = optional_from<std::size_t>(j.at("decided_at"));
      t.cursor = j.at("cursor").get<std::size_t>();
      for (const auto& v : j.at("arm_log_capital")) t.arm_log_capital.push_back(decode(v));
      t.arm_consumed = j.at("arm_consumed").get<std::vector<std::size_t>>();
      if (t.cursor > cp.joint.time()) throw CheckpointError("tracker cursor beyond the action log");
      cp.trackers.push_back(std::move(t));
    }
    if (doc.contains("replay_clock")) {
      const auto& rc = doc.at("replay_clock");
      cp.clock.last_t = optional_from<std::uint64_t>(rc.at("last_t"));
      for (const auto& v : rc.at("rejected_t")) cp.clock.rejected_t.push_back(optional_from<std::uint64_t>(v));
    }
    return cp;
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("corrupt checkpoint: ") + e.what());
  } catch (const DomainError& e) {
    throw CheckpointError(std::string("invalid checkpoint: ") + e.what());
  }
}

Checkpoint checkpoint_load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw CheckpointError("cannot open " + path.string());
  return checkpoint_load(is);
}

}  // namespace peak
