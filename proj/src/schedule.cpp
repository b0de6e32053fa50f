#include "dgdmax/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dgdmax {

namespace {

void require_rho(double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in [0, 1)");
}

}  // namespace

Stepsizes default_stepsizes(double L, double kappa, double rho) {
  require_rho(rho);
  if (!(L > 0.0)) throw std::invalid_argument("default_stepsizes: L must be positive");
  if (!(kappa >= 1.0)) throw std::invalid_argument("default_stepsizes: kappa must be >= 1");
  const double gap2 = (1.0 - rho) * (1.0 - rho);
  return {gap2 / (5.0 * L * std::sqrt(1.0 + 6.0 * kappa * kappa)),
          gap2 / (L * (9.0 * kappa + 2.0))};
}

double default_delta(long t, double rho, double kappa) {
  if (t < 0) throw std::invalid_argument("default_delta: t must be >= 0");
  return (1.0 - rho) * (1.0 - rho) / (8.0 * kappa * (1.0 + static_cast<double>(t)));
}

long iteration_budget_T(double epsilon, double L, double kappa, double rho, double phi0) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("iteration_budget_T: epsilon must be > 0");
  require_rho(rho);
  const double gap = 1.0 - rho;
  const double a = 64.0 * (10.0 * L * kappa * (phi0 + 1.0) + 1.0) / (gap * gap);
  const double b = 4096.0 * L * kappa / gap;
  return static_cast<long>(std::ceil(std::max({a, b, 800.0}) / (epsilon * epsilon)));
}

Schedule paper_schedule(const ProblemConstants& k, double rho) {
  const Stepsizes s = default_stepsizes(k.L, k.kappa(), rho);
  const double kappa = k.kappa();
  return Schedule{s.eta_x, s.eta_lambda, [rho, kappa](long t) { return default_delta(t, rho, kappa); },
                  true};
}

}  // namespace dgdmax
