#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace dgdmax {

/// Euclidean projection onto the probability simplex {y >= 0, 1^T y = 1}.
///
/// Sort descending, take the largest k with u_k - (u_1 + ... + u_k - 1) / k > 0,
/// and threshold at tau = (u_1 + ... + u_k - 1) / k. A coordinate that lands
/// exactly on the threshold gets weight zero.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> project_simplex(
    const Eigen::MatrixBase<Derived>& z) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = z.size();
  if (n == 0) throw std::invalid_argument("project_simplex: empty vector");
  if (!z.allFinite()) throw std::invalid_argument("project_simplex: non-finite input");

  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = z;
  std::vector<Scalar> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<Scalar>());

  Scalar cumsum = 0;
  Scalar tau = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumsum += sorted[k];
    const Scalar candidate = (cumsum - Scalar(1)) / static_cast<Scalar>(k + 1);
    if (sorted[k] - candidate > Scalar(0)) tau = candidate;
  }
  return (v.array() - tau).cwiseMax(Scalar(0)).matrix();
}

}  // namespace dgdmax
