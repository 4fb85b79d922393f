#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "peak/policies.hpp"

namespace peak {

struct ArmDistribution;

struct Bernoulli {
  double p;
};
struct BetaDist {
  double a;
  double b;
};
/// (1 - weight) Beta(a, b) + weight * point mass at `atom` (0 or 1).
struct ContaminatedBeta {
  double a;
  double b;
  double atom;
  double weight;
};
struct UniformDist {};
struct MixtureComponent;
struct Mixture {
  std::vector<MixtureComponent> components;
};

struct ArmDistribution {
  std::variant<Bernoulli, BetaDist, ContaminatedBeta, UniformDist, Mixture> kind;
};

struct MixtureComponent {
  double weight;
  ArmDistribution dist;
};

/// Throws DomainError on invalid parameters or mixture weights not summing to 1.
void validate(const ArmDistribution& d);
[[nodiscard]] double mean(const ArmDistribution& d);
[[nodiscard]] double sample(const ArmDistribution& d, Rng& rng);

/// Text forms: bern(p), beta(a,b), contam-beta(a,b,atom,weight), unif,
/// mix(w1:dist1;w2:dist2;...). Throws DomainError on malformed input.
[[nodiscard]] ArmDistribution parse_distribution(std::string_view text);
[[nodiscard]] std::string describe(const ArmDistribution& d);

/// Named arm sets: paper-bern, paper-beta, paper-beta-contaminated (4 arms
/// each), and mixture-3 (single Unif/Beta(1,1)/Bern(0.5) arm).
/// Throws DomainError for an unknown name.
[[nodiscard]] std::vector<ArmDistribution> preset_arms(std::string_view name);

}  // namespace peak
