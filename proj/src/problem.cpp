#include "dgdmax/problem.hpp"

#include <stdexcept>

namespace dgdmax {

Vector mean_grad_x(const MinimaxProblem& problem, const Vector& x, const Matrix& y_rows) {
  const int m = problem.agents();
  if (y_rows.rows() != m) throw std::invalid_argument("mean_grad_x: need one y row per agent");
  Vector sum = Vector::Zero(problem.dim_x());
  for (int i = 0; i < m; ++i) sum += problem.grad_x(i, x, y_rows.row(i).transpose());
  return sum / static_cast<double>(m);
}

}  // namespace dgdmax
