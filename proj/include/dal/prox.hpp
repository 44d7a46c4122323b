#pragma once

#include "dal/linalg.hpp"

namespace dal {

/// A lasso instance: minimize 0.5*||A w - b||^2 + lambda*||w||_1.
///
/// Immutable after construction; share it by const reference across solves.
class ProblemInstance {
 public:
  /// Throws ArgumentError unless lambda > 0, A is non-empty and
  /// b has one entry per row of A.
  ProblemInstance(Matrix design, Vector observations, double lambda);

  const Matrix& design() const { return design_; }
  const Vector& observations() const { return observations_; }
  double lambda() const { return lambda_; }
  Index rows() const { return design_.rows(); }
  Index cols() const { return design_.cols(); }

 private:
  Matrix design_;
  Vector observations_;
  double lambda_;
};

/// Relative slack accepted on ||A^T alpha||_inf <= lambda by dual_objective.
inline constexpr double kDualFeasibilitySlack = 1e-9;

/// Componentwise shrinkage toward zero by t; |v_j| <= t maps to exactly 0.
Vector soft_threshold(const Vector& v, double t);

/// Componentwise clamp to [-r, r].
Vector project_linf(const Vector& v, double r);

/// 0.5*||A w - b||^2 + lambda*||w||_1.
double primal_objective(const ProblemInstance& p, const Vector& w);

/// -0.5*||alpha - b||^2 + 0.5*||b||^2 for a dual-feasible alpha.
/// Throws FeasibilityError if ||A^T alpha||_inf > lambda*(1 + 1e-9).
double dual_objective(const ProblemInstance& p, const Vector& alpha);

/// True iff w = 0 solves the problem, i.e. ||A^T b||_inf <= lambda.
bool zero_is_optimal(const ProblemInstance& p);

}  // namespace dal
