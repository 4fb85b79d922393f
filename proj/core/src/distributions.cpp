#include "peak/distributions.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "peak/errors.hpp"

namespace peak {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double beta_draw(double a, double b, Rng& rng) {
  const double x = std::gamma_distribution<double>(a, 1.0)(rng);
  const double y = std::gamma_distribution<double>(b, 1.0)(rng);
  const double s = x + y;
  return s > 0.0 ? x / s : 0.5;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double number(std::string_view s) {
  s = trim(s);
  std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size()) {
    throw DomainError("malformed number '" + buf + "' in distribution");
  }
  return v;
}

// Splits on `sep` at parenthesis depth zero.
std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == sep && depth == 0) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

std::vector<double> numbers(std::string_view args, std::size_t expected, std::string_view name) {
  std::vector<double> out;
  for (auto part : split_top(args, ',')) out.push_back(number(part));
  if (out.size() != expected) {
    throw DomainError(std::string(name) + " takes " + std::to_string(expected) + " parameters");
  }
  return out;
}

}  // namespace

void validate(const ArmDistribution& d) {
  std::visit(overloaded{
                 [](const Bernoulli& b) {
                   if (!(b.p >= 0.0 && b.p <= 1.0)) throw DomainError("bern(p) needs p in [0,1]");
                 },
                 [](const BetaDist& b) {
                   if (!(b.a > 0.0 && b.b > 0.0)) throw DomainError("beta(a,b) needs a,b > 0");
                 },
                 [](const ContaminatedBeta& b) {
                   if (!(b.a > 0.0 && b.b > 0.0)) throw DomainError("contam-beta needs a,b > 0");
                   if (b.atom != 0.0 && b.atom != 1.0) throw DomainError("contam-beta atom must be 0 or 1");
                   if (!(b.weight >= 0.0 && b.weight <= 1.0)) {
                     throw DomainError("contam-beta weight must lie in [0,1]");
                   }
                 },
                 [](const UniformDist&) {},
                 [](const Mixture& m) {
                   if (m.components.empty()) throw DomainError("mixture needs components");
                   double total = 0.0;
                   for (const auto& c : m.components) {
                     if (!(c.weight >= 0.0)) throw DomainError("mixture weights must be >= 0");
                     total += c.weight;
                     validate(c.dist);
                   }
                   if (std::abs(total - 1.0) > 1e-6) throw DomainError("mixture weights must sum to 1");
                 },
             },
             d.kind);
}

double mean(const ArmDistribution& d) {
  return std::visit(overloaded{
                        [](const Bernoulli& b) { return b.p; },
                        [](const BetaDist& b) { return b.a / (b.a + b.b); },
                        [](const ContaminatedBeta& b) {
                          return (1.0 - b.weight) * b.a / (b.a + b.b) + b.weight * b.atom;
                        },
                        [](const UniformDist&) { return 0.5; },
                        [](const Mixture& m) {
                          double s = 0.0;
                          for (const auto& c : m.components) s += c.weight * mean(c.dist);
                          return s;
                        },
                    },
                    d.kind);
}

double sample(const ArmDistribution& d, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::visit(overloaded{
                        [&](const Bernoulli& b) { return u(rng) < b.p ? 1.0 : 0.0; },
                        [&](const BetaDist& b) { return beta_draw(b.a, b.b, rng); },
                        [&](const ContaminatedBeta& b) {
                          if (u(rng) < b.weight) return b.atom;
                          return beta_draw(b.a, b.b, rng);
                        },
                        [&](const UniformDist&) { return u(rng); },
                        [&](const Mixture& m) {
                          double r = u(rng);
                          for (const auto& c : m.components) {
                            if (r < c.weight) return sample(c.dist, rng);
                            r -= c.weight;
                          }
                          return sample(m.components.back().dist, rng);
                        },
                    },
                    d.kind);
}

ArmDistribution parse_distribution(std::string_view text) {
  text = trim(text);
  if (text == "unif") return {UniformDist{}};
  const auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw DomainError("malformed distribution '" + std::string(text) + "'");
  }
  const auto name = trim(text.substr(0, open));
  const auto args = text.substr(open + 1, text.size() - open - 2);
  ArmDistribution out;
  if (name == "bern") {
    out = {Bernoulli{numbers(args, 1, name)[0]}};
  } else if (name == "beta") {
    const auto v = numbers(args, 2, name);
    out = {BetaDist{v[0], v[1]}};
  } else if (name == "contam-beta") {
    const auto v = numbers(args, 4, name);
    out = {ContaminatedBeta{v[0], v[1], v[2], v[3]}};
  } else if (name == "mix") {
    Mixture m;
    for (auto part : split_top(args, ';')) {
      const auto colon = part.find(':');
      if (colon == std::string_view::npos) {
        throw DomainError("mixture component '" + std::string(part) + "' needs weight:dist");
      }
      m.components.push_back({number(part.substr(0, colon)), parse_distribution(part.substr(colon + 1))});
    }
    out = {std::move(m)};
  } else {
    throw DomainError("unknown distribution '" + std::string(name) + "'");
  }
  validate(out);
  return out;
}

std::string describe(const ArmDistribution& d) {
  return std::visit(overloaded{
                        [](const Bernoulli& b) { return "bern(" + fmt(b.p) + ")"; },
                        [](const BetaDist& b) { return "beta(" + fmt(b.a) + "," + fmt(b.b) + ")"; },
                        [](const ContaminatedBeta& b) {
                          return "contam-beta(" + fmt(b.a) + "," + fmt(b.b) + "," + fmt(b.atom) +
                                 "," + fmt(b.weight) + ")";
                        },
                        [](const UniformDist&) { return std::string("unif"); },
                        [](const Mixture& m) {
                          std::string s = "mix(";
                          for (std::size_t i = 0; i < m.components.size(); ++i) {
                            if (i) s += ';';
                            s += fmt(m.components[i].weight) + ":" + describe(m.components[i].dist);
                          }
                          return s + ")";
                        },
                    },
                    d.kind);
}

std::vector<ArmDistribution> preset_arms(std::string_view name) {
  std::vector<ArmDistribution> arms;
  if (name == "paper-bern") {
    for (int a = 1; a <= 4; ++a) arms.push_back({Bernoulli{0.15 + 0.14 * a}});
  } else if (name == "paper-beta") {
    for (int a = 1; a <= 4; ++a) {
      arms.push_back({BetaDist{1.0, (0.85 - 0.14 * a) / (0.15 + 0.14 * a)}});
    }
  } else if (name == "paper-beta-contaminated") {
    arms = preset_arms("paper-beta");
    arms[2] = {ContaminatedBeta{1.0, 0.43 / 0.52, 1.0, 0.05}};
    arms[3] = {ContaminatedBeta{1.0, 0.24 / 0.71, 0.0, 0.05}};
  } else if (name == "mixture-3") {
    Mixture m;
    m.components.push_back({1.0 / 3.0, {UniformDist{}}});
    m.components.push_back({1.0 / 3.0, {BetaDist{1.0, 1.0}}});
    m.components.push_back({1.0 / 3.0, {Bernoulli{0.5}}});
    arms.push_back({std::move(m)});
  } else {
    throw DomainError("unknown arm preset '" + std::string(name) + "'");
  }
  return arms;
}

}  // namespace peak
