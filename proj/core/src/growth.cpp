#include "peak/growth.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "peak/errors.hpp"

namespace peak {

namespace {

void check_query(const GrowthQuery& q) {
  if (!(q.c >= 0.25)) throw DomainError("growth needs c >= 1/4");
  if (!(q.m >= 0.0 && q.m <= 1.0)) throw DomainError("growth needs m in [0,1]");
  if (!(q.mu >= 0.0 && q.mu <= 1.0)) throw DomainError("growth needs mu in [0,1]");
}

// w * log(arg), with the 0 * log(anything) = 0 convention.
double weighted_log(double w, double arg) {
  if (w == 0.0) return 0.0;
  if (!(arg > 0.0)) {
    std::ostringstream os;
    os << "growth rate log argument " << arg << " is not positive";
    throw DegenerateCapital(os.str());
  }
  return w * std::log(arg);
}

std::string fmt10(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

double growth_bernoulli(const GrowthQuery& q) {
  check_query(q);
  const double d = q.mu - q.m;
  return weighted_log(q.mu, 1.0 + d * (1.0 - q.m) / q.c) +
         weighted_log(1.0 - q.mu, 1.0 - d * q.m / q.c);
}

double kl_bernoulli(double m, double mu) {
  if (!(m >= 0.0 && m <= 1.0 && mu >= 0.0 && mu <= 1.0)) {
    throw DomainError("KL needs m, mu in [0,1]");
  }
  const double inf = std::numeric_limits<double>::infinity();
  double out = 0.0;
  if (mu > 0.0) out += m == 0.0 ? inf : mu * std::log(mu / m);
  if (mu < 1.0) out += m == 1.0 ? inf : (1.0 - mu) * std::log((1.0 - mu) / (1.0 - m));
  return out;
}

double growth_ratio(const GrowthQuery& q) {
  if (q.m == q.mu) throw DomainError("growth ratio is 0/0 when m == mu");
  return growth_bernoulli(q) / kl_bernoulli(q.m, q.mu);
}

std::vector<GrowthRow> emit_growth_grid(double c, std::size_t resolution) {
  if (resolution < 2) throw DomainError("growth grid resolution must be >= 2");
  std::vector<GrowthRow> rows;
  rows.reserve(resolution * resolution);
  const double step = 1.0 / static_cast<double>(resolution + 1);
  for (std::size_t i = 1; i <= resolution; ++i) {
    for (std::size_t j = 1; j <= resolution; ++j) {
      const double m = static_cast<double>(i) * step;
      const double mu = static_cast<double>(j) * step;
      GrowthRow row{m, mu, 0.0, std::nullopt};
      if (i != j) {
        row.g = growth_bernoulli({c, m, mu});
        row.f = row.g / kl_bernoulli(m, mu);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_growth_csv(std::ostream& os, const std::vector<GrowthRow>& rows) {
  os << "m,mu,G,f\n";
  for (const auto& r : rows) {
    os << fmt10(r.m) << ',' << fmt10(r.mu) << ',' << fmt10(r.g) << ',';
    if (r.f) os << fmt10(*r.f);
    os << '\n';
  }
}

}  // namespace peak
