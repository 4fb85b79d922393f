#include "peak/region.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "peak/errors.hpp"

namespace peak {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_arm(std::size_t arm, std::size_t arms) {
  if (arm >= arms) {
    throw DomainError("arm index " + std::to_string(arm) + " out of range for " +
                      std::to_string(arms) + " arms");
  }
}

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream os;
    os << what << " must lie in [0,1], got " << v;
    throw DomainError(os.str());
  }
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view s) {
  s = trim(s);
  std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size()) {
    throw DomainError("malformed number '" + buf + "' in region");
  }
  return v;
}

std::size_t parse_index(std::string_view s) {
  s = trim(s);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DomainError("malformed arm index '" + std::string(s) + "' in region");
  }
  return v;
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_double(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

void validate(const Region& region, std::size_t arms) {
  std::visit(overloaded{
                 [&](const PointRegion& r) {
                   if (r.m.size() != arms) {
                     throw DomainError("point hypothesis has " + std::to_string(r.m.size()) +
                                       " coordinates, expected " + std::to_string(arms));
                   }
                   for (double v : r.m) check_unit(v, "hypothesis coordinate");
                 },
                 [&](const ThresholdBelow& r) {
                   check_arm(r.arm, arms);
                   check_unit(r.xi, "threshold");
                 },
                 [&](const ThresholdAbove& r) {
                   check_arm(r.arm, arms);
                   check_unit(r.xi, "threshold");
                 },
                 [&](const BestArm& r) { check_arm(r.arm, arms); },
                 [&](const Polytope& r) {
                   for (const auto& c : r.constraints) {
                     if (c.coeffs.size() != arms) {
                       throw DomainError("polytope constraint has " +
                                         std::to_string(c.coeffs.size()) +
                                         " coefficients, expected " + std::to_string(arms));
                     }
                     for (double v : c.coeffs) {
                       if (!std::isfinite(v)) throw DomainError("non-finite polytope coefficient");
                     }
                     if (!std::isfinite(c.bound)) throw DomainError("non-finite polytope bound");
                   }
                 },
             },
             region);
}

bool contains(const Region& region, std::span<const double> m, double tol) {
  for (double v : m) {
    if (v < -tol || v > 1.0 + tol) return false;
  }
  return std::visit(overloaded{
                        [&](const PointRegion& r) {
                          for (std::size_t a = 0; a < m.size(); ++a) {
                            if (std::abs(m[a] - r.m[a]) > tol) return false;
                          }
                          return true;
                        },
                        [&](const ThresholdBelow& r) { return m[r.arm] <= r.xi + tol; },
                        [&](const ThresholdAbove& r) { return m[r.arm] >= r.xi - tol; },
                        [&](const BestArm& r) {
                          for (double v : m) {
                            if (v > m[r.arm] + tol) return false;
                          }
                          return true;
                        },
                        [&](const Polytope& r) {
                          for (const auto& c : r.constraints) {
                            double lhs = 0.0;
                            for (std::size_t a = 0; a < m.size(); ++a) lhs += c.coeffs[a] * m[a];
                            if (lhs > c.bound + tol) return false;
                          }
                          return true;
                        },
                    },
                    region);
}

bool is_point(const Region& region) noexcept {
  return std::holds_alternative<PointRegion>(region);
}

std::string describe(const Region& region) {
  return std::visit(overloaded{
                        [](const PointRegion& r) {
                          std::string s = "point:";
                          for (std::size_t a = 0; a < r.m.size(); ++a) {
                            if (a) s += ',';
                            s += fmt17(r.m[a]);
                          }
                          return s;
                        },
                        [](const ThresholdBelow& r) {
                          return "thr-below:" + std::to_string(r.arm) + ":" + fmt17(r.xi);
                        },
                        [](const ThresholdAbove& r) {
                          return "thr-above:" + std::to_string(r.arm) + ":" + fmt17(r.xi);
                        },
                        [](const BestArm& r) { return "bai:" + std::to_string(r.arm); },
                        [](const Polytope& r) {
                          std::string s = "poly:";
                          for (std::size_t j = 0; j < r.constraints.size(); ++j) {
                            if (j) s += ';';
                            const auto& c = r.constraints[j];
                            for (std::size_t a = 0; a < c.coeffs.size(); ++a) {
                              if (a) s += ',';
                              s += fmt17(c.coeffs[a]);
                            }
                            s += "<=" + fmt17(c.bound);
                          }
                          return s;
                        },
                    },
                    region);
}

Region parse_region(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw DomainError("region '" + std::string(text) + "' has no kind prefix");
  }
  const auto kind = text.substr(0, colon);
  const auto body = text.substr(colon + 1);

  if (kind == "point") return PointRegion{parse_list(body)};
  if (kind == "bai") return BestArm{parse_index(body)};
  if (kind == "thr-below" || kind == "thr-above") {
    const auto sep = body.find(':');
    if (sep == std::string_view::npos) {
      throw DomainError("threshold region needs ARM:XI, got '" + std::string(body) + "'");
    }
    const auto arm = parse_index(body.substr(0, sep));
    const auto xi = parse_double(body.substr(sep + 1));
    if (kind == "thr-below") return ThresholdBelow{arm, xi};
    return ThresholdAbove{arm, xi};
  }
  if (kind == "poly") {
    Polytope poly;
    std::string_view rest = body;
    while (!trim(rest).empty()) {
      const auto semi = rest.find(';');
      const auto item = rest.substr(0, semi);
      const auto le = item.find("<=");
      if (le == std::string_view::npos) {
        throw DomainError("polytope constraint '" + std::string(item) + "' lacks '<='");
      }
      poly.constraints.push_back({parse_list(item.substr(0, le)), parse_double(item.substr(le + 2))});
      if (semi == std::string_view::npos) break;
      rest.remove_prefix(semi + 1);
    }
    return poly;
  }
  throw DomainError("unknown region kind '" + std::string(kind) + "'");
}

}  // namespace peak
