#include "dal/certificates.hpp"

#include "dal/errors.hpp"
#include "dal/kernels.hpp"

#include <algorithm>
#include <string>

namespace dal {
namespace {

Vector residual_of(const ProblemInstance& p, const Vector& w) {
  if (w.size() != p.cols()) {
    throw ArgumentError("certificate: w has length " + std::to_string(w.size()) + ", expected " +
                        std::to_string(p.cols()));
  }
  const IndexSet supp = kernels::support(w);
  Vector coef(static_cast<Index>(supp.size()));
  for (std::size_t k = 0; k < supp.size(); ++k) coef(static_cast<Index>(k)) = w(supp[k]);
  Vector aw;
  kernels::forward_subset(p.design(), supp, coef, aw);
  return p.observations() - aw;
}

double residual_scale(const ProblemInstance& p, const Vector& at_residual) {
  const double norm = at_residual.lpNorm<Eigen::Infinity>();
  // A^T r = 0 makes r itself feasible.
  if (norm <= p.lambda()) return 1.0;
  return p.lambda() / norm;
}

}  // namespace

Vector feasible_dual_point(const ProblemInstance& p, const Vector& w) {
  const Vector r = residual_of(p, w);
  Vector atr;
  kernels::adjoint(p.design(), r, atr);
  return residual_scale(p, atr) * r;
}

DualCertificate certify_from_residual(const ProblemInstance& p, const Vector& w,
                                      const Vector& residual, const Vector& at_residual) {
  DualCertificate cert;
  const double scale = residual_scale(p, at_residual);
  cert.alpha_hat = scale * residual;
  const Vector& b = p.observations();
  cert.primal_value = 0.5 * residual.squaredNorm() + p.lambda() * w.lpNorm<1>();
  // Feasible by construction, so the indicator term is zero.
  cert.dual_value = -0.5 * (cert.alpha_hat - b).squaredNorm() + 0.5 * b.squaredNorm();
  const double denom = std::max(cert.primal_value, kGapDenominatorFloor);
  cert.relative_gap = std::max(0.0, (cert.primal_value - cert.dual_value) / denom);
  return cert;
}

DualCertificate certify(const ProblemInstance& p, const Vector& w) {
  const Vector r = residual_of(p, w);
  Vector atr;
  kernels::adjoint(p.design(), r, atr);
  return certify_from_residual(p, w, r, atr);
}

double relative_duality_gap(const ProblemInstance& p, const Vector& w) {
  return certify(p, w).relative_gap;
}

}  // namespace dal
