#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

namespace peak {

struct GrowthQuery {
  double c = 0.26;
  double m = 0.5;
  double mu = 0.5;
};

/// Expected log factor under Bern(mu) at hypothesis m:
/// mu log(1 + (mu-m)(1-m)/c) + (1-mu) log(1 - (mu-m)m/c). Natural log.
/// Throws DegenerateCapital when a log argument with positive weight is <= 0.
[[nodiscard]] double growth_bernoulli(const GrowthQuery& q);

/// KL(Bern(mu) || Bern(m)); +inf when m is on the boundary and mu is not equal to it.
[[nodiscard]] double kl_bernoulli(double m, double mu);

/// growth_bernoulli / kl_bernoulli. Throws DomainError when m == mu.
[[nodiscard]] double growth_ratio(const GrowthQuery& q);

struct GrowthRow {
  double m;
  double mu;
  double g;
  std::optional<double> f;  ///< empty on the diagonal
};

/// (m, mu) over the interior grid {i / (resolution + 1)}, m outer, mu inner.
[[nodiscard]] std::vector<GrowthRow> emit_growth_grid(double c, std::size_t resolution);

/// Header `m,mu,G,f` then one row per point, 10 significant digits.
void write_growth_csv(std::ostream& os, const std::vector<GrowthRow>& rows);

}  // namespace peak
