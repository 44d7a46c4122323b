#pragma once

// Duality-gap stopping criterion.
//
// A feasible dual point is obtained by scaling the residual r = b - A w into
// the l-infinity ball: alpha_hat = r * min(1, lambda / ||A^T r||_inf). At the
// optimum r is the dual maximizer and the scale is exactly 1, so the gap
// closes. The opposite orientation (A w - b) stays feasible but leaves the
// gap bounded away from zero; see the sign test in test_certificates.cpp.

#include "dal/linalg.hpp"
#include "dal/prox.hpp"

namespace dal {

struct DualCertificate {
  Vector alpha_hat;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double relative_gap = 0.0;
};

/// Denominator floor for the relative gap when f(w) = 0.
inline constexpr double kGapDenominatorFloor = 1e-30;

Vector feasible_dual_point(const ProblemInstance& p, const Vector& w);

/// (f(w) - d(alpha_hat)) / max(f(w), 1e-30), clamped below at 0.
double relative_duality_gap(const ProblemInstance& p, const Vector& w);

DualCertificate certify(const ProblemInstance& p, const Vector& w);

/// Same as certify() with r = b - A w and A^T r already computed by the caller.
DualCertificate certify_from_residual(const ProblemInstance& p, const Vector& w,
                                      const Vector& residual, const Vector& at_residual);

}  // namespace dal
