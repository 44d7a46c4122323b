#include "dal/baselines.hpp"

#include "dal/certificates.hpp"
#include "dal/errors.hpp"
#include "dal/kernels.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

namespace dal {
namespace {

// r = b - A w using only the support of w.
Vector residual(const ProblemInstance& p, const Vector& w) {
  const IndexSet supp = kernels::support(w);
  Vector coef(static_cast<Index>(supp.size()));
  for (std::size_t k = 0; k < supp.size(); ++k) coef(static_cast<Index>(k)) = w(supp[k]);
  Vector aw;
  kernels::forward_subset(p.design(), supp, coef, aw);
  return p.observations() - aw;
}

}  // namespace

double spectral_norm_sq_estimate(const Matrix& a, int max_iters, double rel_tol) {
  const Index n = a.cols();
  // Deterministic start with no special alignment to coordinate axes.
  Vector v(n);
  for (Index j = 0; j < n; ++j) v(j) = 1.0 + 0.5 * std::sin(static_cast<double>(j) + 1.0);
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const Vector av = a * v;
    Vector next = a.transpose() * av;
    const double rayleigh = av.squaredNorm();
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    v = next / norm;
    if (it > 0 && std::abs(rayleigh - estimate) <= rel_tol * rayleigh) {
      estimate = rayleigh;
      break;
    }
    estimate = rayleigh;
  }
  return estimate;
}

void validate_ist_config(const ProblemInstance& p, const IstConfig& config) {
  if (!(config.tolerance > 0.0)) throw ArgumentError("IST tolerance must be positive");
  if (config.max_iters < 1) throw ArgumentError("IST max_iters must be positive");
  if (const auto* c = std::get_if<ConstantStep>(&config.step_rule)) {
    if (!(c->tau > 0.0)) throw ArgumentError("IST step size must be positive");
    const double lip = spectral_norm_sq_estimate(p.design());
    if (!(c->tau * lip < 2.0)) {
      throw ArgumentError("IST step size " + std::to_string(c->tau) + " violates tau < 2/L with L = " +
                          std::to_string(lip));
    }
  } else {
    const auto& bb = std::get<BarzilaiBorweinStep>(config.step_rule);
    if (!(bb.tau_min > 0.0 && bb.tau_min <= bb.tau_max)) {
      throw ArgumentError("BB bounds must satisfy 0 < tau_min <= tau_max");
    }
  }
}

IstConfig unit_lipschitz_ist_config(const ProblemInstance& p) {
  IstConfig cfg;
  cfg.step_rule = ConstantStep{1.0 / spectral_norm_sq_estimate(p.design())};
  return cfg;
}

Vector ist_step(const ProblemInstance& p, const Vector& w, double tau) {
  if (!(tau > 0.0)) throw ArgumentError("ist_step: tau must be positive");
  if (w.size() != p.cols()) throw ArgumentError("ist_step: dimension mismatch");
  Vector grad;
  kernels::adjoint(p.design(), residual(p, w), grad);
  grad = -grad;
  return soft_threshold(w - tau * grad, p.lambda() * tau);
}

double bb_step(const Vector& w_prev, const Vector& w_curr, const Vector& grad_prev,
               const Vector& grad_curr, double tau_min, double tau_max) {
  const Vector s = w_curr - w_prev;
  const Vector y = grad_curr - grad_prev;
  const double sy = s.dot(y);
  if (!(sy > 0.0)) return tau_max;
  return std::clamp(s.squaredNorm() / sy, tau_min, tau_max);
}

SolveReport ist_solve(const ProblemInstance& p, const IstConfig& config, const Vector& w_initial) {
  validate_ist_config(p, config);
  if (w_initial.size() != p.cols()) throw ArgumentError("ist_solve: w_initial dimension mismatch");

  const auto start = std::chrono::steady_clock::now();
  const auto* constant = std::get_if<ConstantStep>(&config.step_rule);
  const auto* bb = std::get_if<BarzilaiBorweinStep>(&config.step_rule);
  double tau = constant ? constant->tau : 1.0 / spectral_norm_sq_estimate(p.design());

  SolveReport rep;
  Vector w = w_initial;
  Vector r = residual(p, w);
  Vector atr;
  kernels::adjoint(p.design(), r, atr);
  DualCertificate cert = certify_from_residual(p, w, r, atr);
  rep.objective_trace.push_back(cert.primal_value);
  rep.gap_trace.push_back(cert.relative_gap);
  rep.converged = cert.relative_gap <= config.tolerance;

  int iters = 0;
  while (!rep.converged && iters < config.max_iters) {
    // Smooth-part gradient is A^T (A w - b) = -A^T r.
    const Vector grad = -atr;
    Vector w_next = soft_threshold(w - tau * grad, p.lambda() * tau);
    if (!w_next.allFinite()) throw NumericError("ist_solve: iterate diverged");
    r = residual(p, w_next);
    kernels::adjoint(p.design(), r, atr);
    ++iters;
    cert = certify_from_residual(p, w_next, r, atr);
    rep.objective_trace.push_back(cert.primal_value);
    rep.gap_trace.push_back(cert.relative_gap);
    rep.converged = cert.relative_gap <= config.tolerance;
    if (bb && w_next != w) tau = bb_step(w, w_next, grad, -atr, bb->tau_min, bb->tau_max);
    w = std::move(w_next);
  }

  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  rep.w_final = std::move(w);
  rep.primal_value = cert.primal_value;
  rep.relative_gap = cert.relative_gap;
  rep.outer_iters = iters;
  rep.wall_time_seconds = elapsed.count();
  rep.nnz_fraction = nnz_fraction(rep.w_final);
  return rep;
}

}  // namespace dal
