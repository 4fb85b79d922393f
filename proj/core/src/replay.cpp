#include "peak/replay.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <istream>
#include <sstream>

#include "peak/errors.hpp"

namespace peak {

namespace {

template <class T>
T parse_uint(std::string_view v, std::size_t line, const char* key) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ParseError(line, std::string("field ") + key + " is not a nonnegative integer: '" +
                               std::string(v) + "'");
  }
  return out;
}

bool blank_or_comment(const std::string& s) {
  for (char ch : s) {
    if (ch == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

}  // namespace

ReplayRecord parse_replay_line(const std::string& text, std::size_t line, std::size_t arms) {
  ReplayRecord r;
  r.line = line;
  bool has_t = false, has_arm = false, has_x = false;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key=value, got '" + tok + "'");
    const std::string_view key(tok.data(), eq);
    const std::string_view val(tok.data() + eq + 1, tok.size() - eq - 1);
    if (key == "t") {
      r.t = parse_uint<std::uint64_t>(val, line, "t");
      has_t = true;
    } else if (key == "arm") {
      r.arm = parse_uint<std::size_t>(val, line, "arm");
      has_arm = true;
    } else if (key == "x") {
      const std::string s(val);
      char* end = nullptr;
      r.x = std::strtod(s.c_str(), &end);
      if (s.empty() || end != s.c_str() + s.size()) {
        throw ParseError(line, "field x is not a number: '" + s + "'");
      }
      has_x = true;
    } else {
      throw ParseError(line, "unknown field '" + std::string(key) + "'");
    }
  }
  if (!has_t || !has_arm || !has_x) throw ParseError(line, "record needs t, arm and x");
  if (r.arm >= arms) {
    throw ParseError(line, "arm " + std::to_string(r.arm) + " out of range for " +
                               std::to_string(arms) + " arms");
  }
  if (!(r.x >= 0.0 && r.x <= 1.0)) {
    std::ostringstream os;
    os << "line " << line << ": x = " << r.x << " outside [0,1]";
    throw DomainError(os.str());
  }
  return r;
}

ReplaySession::ReplaySession(std::size_t arms, StreamConfig cfg, double alpha,
                             const std::vector<Region>& regions)
    : joint_(arms, cfg) {
  for (const auto& r : regions) {
    validate(r, arms);
    trackers_.emplace_back(r, alpha);
  }
  clock_.rejected_t.assign(trackers_.size(), std::nullopt);
}

ReplaySession::ReplaySession(Checkpoint cp)
    : joint_(std::move(cp.joint)), trackers_(std::move(cp.trackers)), clock_(std::move(cp.clock)) {
  clock_.rejected_t.resize(trackers_.size());
}

void ReplaySession::feed(const ReplayRecord& r) {
  if (clock_.last_t && r.t <= *clock_.last_t) {
    throw ParseError(r.line, "t = " + std::to_string(r.t) + " is not after the previous t = " +
                                 std::to_string(*clock_.last_t));
  }
  joint_.observe(r.arm, r.x);
  clock_.last_t = r.t;
  const GlobalMinimum* gm = nullptr;
  for (std::size_t i = 0; i < trackers_.size(); ++i) {
    auto& tr = trackers_[i];
    if (tr.rejected()) continue;
    Decision d;
    if (is_point(tr.region)) {
      d = step_point_test(tr, joint_);
    } else {
      if (!gm) gm = &cache_.update(joint_);
      d = step_region_test(tr, joint_, *gm);
    }
    if (d == Decision::Rejected) clock_.rejected_t[i] = r.t;
  }
}

void ReplaySession::feed_stream(std::istream& is) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(is, text)) {
    ++line;
    if (blank_or_comment(text)) continue;
    feed(parse_replay_line(text, line, joint_.arms()));
  }
}

std::vector<ReplayDecision> ReplaySession::decisions() const {
  std::vector<ReplayDecision> out;
  for (std::size_t i = 0; i < trackers_.size(); ++i) {
    const auto& tr = trackers_[i];
    out.push_back({describe(tr.region), clock_.rejected_t[i], tr.decided_at, tr.running_extreme});
  }
  return out;
}

void ReplaySession::save(std::ostream& os) const { checkpoint_save(joint_, trackers_, os, clock_); }

std::vector<ReplayDecision> replay_ingest(std::istream& source, std::size_t arms, double alpha,
                                          const std::vector<Region>& regions, StreamConfig cfg) {
  ReplaySession s(arms, cfg, alpha, regions);
  s.feed_stream(source);
  return s.decisions();
}

}  // namespace peak
