#pragma once

#include <utility>
#include <vector>

namespace dgdmax {

// Scalar instance f(x, y) = -x^2 y + y^2 / 2 on x in [-1, 1].
//
// As written f is convex in y (f_yy = +1); y* = x^2 is its stationary point,
// not a maximizer. The operator and the scan below follow that printed
// form exactly and do not guess an intended sign.
struct ToyMintyInstance {
  static double value(double x, double y) { return -x * x * y + 0.5 * y * y; }
  static double grad_x(double x, double y) { return -2.0 * x * y; }
  static double grad_y(double x, double y) { return -x * x + y; }
};

/// (f_x, -f_y) = (-2xy, x^2 - y).
std::pair<double, double> minty_operator(double x, double y);

/// <F(x, y), (x, y) - (x_bar, y_bar)>.
double minty_inner_product(double x, double y, double x_bar, double y_bar);

struct MintyScanResult {
  int candidates = 0;           // (x_bar, y_bar) grid points examined
  int refuted = 0;              // candidates with some test point giving a negative product
  double worst_product = 0.0;   // max over candidates of the min product found
  bool condition_fails() const { return candidates > 0 && refuted == candidates; }
};

/// Grid scan over (x_bar, y_bar) in [x_lo, x_hi] x [y_lo, y_hi] with `points` nodes per
/// axis; each candidate is tested against every (x, y) in test_x x test_y.
MintyScanResult minty_scan(int points, double x_lo, double x_hi, double y_lo, double y_hi,
                           const std::vector<double>& test_x, const std::vector<double>& test_y);

}  // namespace dgdmax
