#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace bimodal {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// minimize   f' Q f + a' f + constant
/// subject to G f <= h,  A f = b
///
/// Q is symmetric positive semidefinite. Note the objective has no 1/2.
struct QpProblem {
  Matrix Q;
  Vector a;
  double constant = 0.0;
  SparseRowMatrix G;
  Vector h;
  SparseRowMatrix A;
  Vector b;

  Eigen::Index num_variables() const { return a.size(); }
  Eigen::Index num_inequalities() const { return h.size(); }
  Eigen::Index num_equalities() const { return b.size(); }
};

/// f' Q f + a' f + constant.
double Evaluate(const QpProblem& problem, const Vector& f);

/// Throws a domain error when the blocks disagree in size.
void CheckDimensions(const QpProblem& problem);

}  // namespace bimodal
