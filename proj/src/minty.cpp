#include "dgdmax/minty.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace dgdmax {

std::pair<double, double> minty_operator(double x, double y) {
  return {ToyMintyInstance::grad_x(x, y), -ToyMintyInstance::grad_y(x, y)};
}

double minty_inner_product(double x, double y, double x_bar, double y_bar) {
  const auto [fx, fy] = minty_operator(x, y);
  return fx * (x - x_bar) + fy * (y - y_bar);
}

MintyScanResult minty_scan(int points, double x_lo, double x_hi, double y_lo, double y_hi,
                           const std::vector<double>& test_x, const std::vector<double>& test_y) {
  if (points < 2) throw std::invalid_argument("minty_scan: need at least 2 grid points per axis");
  MintyScanResult result;
  result.worst_product = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < points; ++a) {
    const double x_bar = x_lo + (x_hi - x_lo) * a / (points - 1);
    for (int b = 0; b < points; ++b) {
      const double y_bar = y_lo + (y_hi - y_lo) * b / (points - 1);
      double best = std::numeric_limits<double>::infinity();
      for (const double x : test_x)
        for (const double y : test_y) best = std::min(best, minty_inner_product(x, y, x_bar, y_bar));
      ++result.candidates;
      if (best < 0.0) ++result.refuted;
      result.worst_product = std::max(result.worst_product, best);
    }
  }
  return result;
}

}  // namespace dgdmax
