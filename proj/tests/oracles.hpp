#pragma once

// Reference computations used only by the tests. Each one takes a different
// route from the library code it checks.

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "dgdmax/types.hpp"

namespace oracle {

using dgdmax::Matrix;
using dgdmax::Vector;

// Euclidean projection onto the simplex by enumerating supports: for each
// nonempty S the candidate p_S = v_S - (sum v_S - 1)/|S| (zero elsewhere) is
// kept if nonnegative; the closest feasible candidate is the projection.
inline Vector simplex_by_enumeration(const Vector& v) {
  const int n = static_cast<int>(v.size());
  Vector best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    int size = 0;
    double sum = 0.0;
    for (int j = 0; j < n; ++j)
      if (mask & (1u << j)) {
        ++size;
        sum += v(j);
      }
    const double shift = (sum - 1.0) / size;
    Vector p = Vector::Zero(n);
    bool feasible = true;
    for (int j = 0; j < n; ++j)
      if (mask & (1u << j)) {
        p(j) = v(j) - shift;
        if (p(j) < 0.0) feasible = false;
      }
    if (!feasible) continue;
    const double dist = (p - v).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = p;
    }
  }
  return best;
}

// Largest singular value of W - 11^T/m from a dense SVD.
inline double rho_by_svd(const Matrix& w) {
  const auto m = w.rows();
  const Matrix dev = w - Matrix::Constant(m, m, 1.0 / static_cast<double>(m));
  return Eigen::JacobiSVD<Matrix>(dev).singularValues()(0);
}

inline double spectral_norm_by_svd(const Matrix& a) {
  return Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
}

// Central differences of a scalar function.
inline Vector central_difference(const std::function<double(const Vector&)>& f, const Vector& x,
                                 double h = 1e-6) {
  Vector g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vector xp = x;
    Vector xm = x;
    xp(k) += h;
    xm(k) -= h;
    g(k) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

// Perceptron with bias; returns true if it separates the data within the epoch cap.
inline bool perceptron_separates(const Matrix& a, const Vector& b, int max_epochs = 100000) {
  Vector w = Vector::Zero(a.cols());
  double bias = 0.0;
  for (int epoch = 0; epoch < max_epochs; ++epoch) {
    int mistakes = 0;
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
      if (b(j) * (a.row(j).dot(w) + bias) <= 0.0) {
        w += b(j) * a.row(j).transpose();
        bias += b(j);
        ++mistakes;
      }
    }
    if (mistakes == 0) return true;
  }
  return false;
}

// logistic loss log(1 + exp(-t)) written out directly.
inline double logistic(double t) { return std::log(1.0 + std::exp(-t)); }

}  // namespace oracle
