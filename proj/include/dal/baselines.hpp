#pragma once

// Iterative shrinkage-thresholding comparators.
//
// w <- ST_{lambda*tau}(w - tau * A^T (A w - b)) with either a fixed step or a
// Barzilai-Borwein spectral step. No non-monotone acceptance test is applied,
// so the BB variant is a simplified stand-in for SpaRSA, not a reimplementation.

#include "dal/linalg.hpp"
#include "dal/prox.hpp"
#include "dal/report.hpp"

#include <variant>

namespace dal {

struct ConstantStep {
  double tau = 0.0;
};

struct BarzilaiBorweinStep {
  double tau_min = 1e-8;
  double tau_max = 1e8;
};

using StepRule = std::variant<ConstantStep, BarzilaiBorweinStep>;

struct IstConfig {
  StepRule step_rule = BarzilaiBorweinStep{};
  double tolerance = 1e-3;  // relative duality gap
  int max_iters = 100000;
};

/// Largest squared singular value of A by power iteration on A^T A.
/// Converges from below.
double spectral_norm_sq_estimate(const Matrix& a, int max_iters = 1000, double rel_tol = 1e-12);

/// Throws ArgumentError if a constant step violates tau < 2/L (L estimated),
/// or BB bounds are not 0 < tau_min <= tau_max.
void validate_ist_config(const ProblemInstance& p, const IstConfig& config);

/// Constant-step config with tau = 1/L.
IstConfig unit_lipschitz_ist_config(const ProblemInstance& p);

Vector ist_step(const ProblemInstance& p, const Vector& w, double tau);

/// clamp(s's / s'y, tau_min, tau_max) with s = w_curr - w_prev, y = grad_curr - grad_prev.
/// Returns tau_max when s'y <= 0.
double bb_step(const Vector& w_prev, const Vector& w_curr, const Vector& grad_prev,
               const Vector& grad_curr, double tau_min = 1e-8, double tau_max = 1e8);

/// Iterates until the relative duality gap reaches config.tolerance. The gap
/// is checked before the first step, so an optimal start reports 0 iterations.
SolveReport ist_solve(const ProblemInstance& p, const IstConfig& config, const Vector& w_initial);

}  // namespace dal
