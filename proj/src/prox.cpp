#include "dal/prox.hpp"

#include "dal/errors.hpp"
#include "dal/kernels.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace dal {

ProblemInstance::ProblemInstance(Matrix design, Vector observations, double lambda)
    : design_(std::move(design)), observations_(std::move(observations)), lambda_(lambda) {
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) {
    throw ArgumentError("lambda must be a positive finite number, got " + std::to_string(lambda_));
  }
  if (design_.rows() < 1 || design_.cols() < 1) {
    throw ArgumentError("design matrix must have at least one row and one column");
  }
  if (observations_.size() != design_.rows()) {
    throw ArgumentError("observations length " + std::to_string(observations_.size()) +
                        " does not match design rows " + std::to_string(design_.rows()));
  }
}

Vector soft_threshold(const Vector& v, double t) {
  if (!(t >= 0.0)) throw ArgumentError("soft_threshold: threshold must be nonnegative");
  Vector out(v.size());
  for (Index j = 0; j < v.size(); ++j) {
    const double x = v(j);
    if (x > t) {
      out(j) = x - t;
    } else if (x < -t) {
      out(j) = x + t;
    } else {
      out(j) = 0.0;
    }
  }
  return out;
}

Vector project_linf(const Vector& v, double r) {
  if (!(r >= 0.0)) throw ArgumentError("project_linf: radius must be nonnegative");
  return v.cwiseMax(-r).cwiseMin(r);
}

double primal_objective(const ProblemInstance& p, const Vector& w) {
  if (w.size() != p.cols()) {
    throw ArgumentError("primal_objective: w has length " + std::to_string(w.size()) +
                        ", expected " + std::to_string(p.cols()));
  }
  const IndexSet supp = kernels::support(w);
  Vector coef(static_cast<Index>(supp.size()));
  for (std::size_t k = 0; k < supp.size(); ++k) coef(static_cast<Index>(k)) = w(supp[k]);
  Vector residual;
  kernels::forward_subset(p.design(), supp, coef, residual);
  residual -= p.observations();
  return 0.5 * residual.squaredNorm() + p.lambda() * w.lpNorm<1>();
}

double dual_objective(const ProblemInstance& p, const Vector& alpha) {
  if (alpha.size() != p.rows()) {
    throw ArgumentError("dual_objective: alpha has length " + std::to_string(alpha.size()) +
                        ", expected " + std::to_string(p.rows()));
  }
  Vector v;
  kernels::adjoint(p.design(), alpha, v);
  const double vmax = v.lpNorm<Eigen::Infinity>();
  if (!(vmax <= p.lambda() * (1.0 + kDualFeasibilitySlack))) {
    throw FeasibilityError("dual_objective: ||A^T alpha||_inf = " + std::to_string(vmax) +
                           " exceeds lambda = " + std::to_string(p.lambda()));
  }
  return -0.5 * (alpha - p.observations()).squaredNorm() + 0.5 * p.observations().squaredNorm();
}

bool zero_is_optimal(const ProblemInstance& p) {
  Vector atb;
  kernels::adjoint(p.design(), p.observations(), atb);
  return atb.lpNorm<Eigen::Infinity>() <= p.lambda();
}

}  // namespace dal
