#pragma once

#include <functional>

#include "dgdmax/problem.hpp"

namespace dgdmax {

struct Stepsizes {
  double eta_x = 0.0;
  double eta_lambda = 0.0;
};

/// eta_x = (1-rho)^2 / (5 L sqrt(1 + 6 kappa^2)),  eta_lambda = (1-rho)^2 / (L (9 kappa + 2)).
Stepsizes default_stepsizes(double L, double kappa, double rho);

/// delta_t = (1-rho)^2 / (8 kappa (1 + t)).
double default_delta(long t, double rho, double kappa);

/// ceil(eps^-2 max{64 (10 L kappa (phi0 + 1) + 1) / (1-rho)^2, 4096 L kappa / (1-rho), 800}).
long iteration_budget_T(double epsilon, double L, double kappa, double rho, double phi0);

/// Stepsizes and the inexactness sequence consumed by the decentralized method.
struct Schedule {
  double eta_x = 0.0;
  double eta_lambda = 0.0;
  std::function<double(long)> delta;  // t -> delta_t >= 0
  bool use_exact_dual = true;         // prefer the closed-form dual oracle when present
};

/// The default stepsizes and delta_t rule for the given constants and rho.
Schedule paper_schedule(const ProblemConstants& k, double rho);

}  // namespace dgdmax
