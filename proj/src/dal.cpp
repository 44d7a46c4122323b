#include "dal/dal.hpp"

#include "dal/certificates.hpp"
#include "dal/errors.hpp"
#include "dal/kernels.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace dal {
namespace {

void check_eta(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ArgumentError("eta must be positive and finite, got " + std::to_string(eta));
  }
}

void check_dims(const ProblemInstance& p, const Vector& w, const Vector& alpha) {
  if (w.size() != p.cols()) {
    throw ArgumentError("w has length " + std::to_string(w.size()) + ", expected " +
                        std::to_string(p.cols()));
  }
  if (alpha.size() != p.rows()) {
    throw ArgumentError("alpha has length " + std::to_string(alpha.size()) + ", expected " +
                        std::to_string(p.rows()));
  }
}

double st_scalar(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

double objective_from(const ProblemInstance& p, const InnerWorkspace& ws, double eta,
                      const Vector& alpha) {
  return 0.5 * (alpha - p.observations()).squaredNorm() + 0.5 * eta * ws.st_active.squaredNorm();
}

Vector gradient_from(const ProblemInstance& p, const InnerWorkspace& ws, double eta,
                     const Vector& alpha) {
  Vector a_st;
  kernels::forward_subset(p.design(), ws.active_set, ws.st_active, a_st);
  return alpha - p.observations() + eta * a_st;
}

Vector apply_hessian(const ProblemInstance& p, const IndexSet& active, double eta, const Vector& y) {
  Vector t;
  kernels::adjoint_subset(p.design(), active, y, t);
  Vector out;
  kernels::forward_subset(p.design(), active, t, out);
  out *= eta;
  out += y;
  return out;
}

Vector cholesky_direction(const ProblemInstance& p, const InnerWorkspace& ws, double eta,
                          const Vector& grad) {
  if (!grad.allFinite()) throw NumericError("newton_direction_cholesky: non-finite gradient");
  if (ws.active_set.empty()) return -grad;
  const Matrix h = kernels::shifted_gram_subset(p.design(), ws.active_set, eta);
  Eigen::LLT<Matrix> llt(h);
  if (llt.info() != Eigen::Success) {
    throw NumericError("newton_direction_cholesky: Hessian factorization failed");
  }
  Vector y = llt.solve(-grad);
  if (!y.allFinite()) throw NumericError("newton_direction_cholesky: non-finite direction");
  return y;
}

PcgResult pcg_direction(const ProblemInstance& p, const InnerWorkspace& ws, double eta,
                        const Vector& grad, double tol, int max_iters) {
  PcgResult res;
  const Index m = p.rows();
  res.direction = Vector::Zero(m);
  const double gnorm = grad.norm();
  if (gnorm == 0.0) return res;

  Vector diag;
  kernels::row_sq_sums_subset(p.design(), ws.active_set, diag);
  diag = (eta * diag).array() + 1.0;

  Vector r = -grad;
  Vector z = r.cwiseQuotient(diag);
  Vector dir = z;
  double rz = r.dot(z);
  for (int it = 1; it <= max_iters; ++it) {
    const Vector hd = apply_hessian(p, ws.active_set, eta, dir);
    const double curvature = dir.dot(hd);
    if (!(curvature > 0.0)) break;
    const double step = rz / curvature;
    res.direction += step * dir;
    r -= step * hd;
    z = r.cwiseQuotient(diag);
    res.iters = it;
    if (r.norm() <= tol * gnorm) break;
    const double rz_next = r.dot(z);
    dir = z + (rz_next / rz) * dir;
    rz = rz_next;
  }
  return res;
}

// g(alpha + s*d) - g(alpha), evaluated term by term so the Armijo test stays
// meaningful when the decrease is far below the magnitude of g itself.
double objective_change(const ProblemInstance& p, const InnerWorkspace& ws, double eta,
                        const Vector& alpha, const Vector& d, const Vector& u, double s) {
  const double lambda = p.lambda();
  const double quad = s * d.dot(alpha - p.observations()) + 0.5 * s * s * d.squaredNorm();
  double barrier = 0.0;
  for (Index j = 0; j < ws.q.size(); ++j) {
    const double before = st_scalar(ws.q(j), lambda);
    const double after = st_scalar(ws.q(j) + s * u(j), lambda);
    if (before != 0.0 || after != 0.0) barrier += (after - before) * (after + before);
  }
  return quad + 0.5 * eta * barrier;
}

struct StepOutcome {
  double step = 0.0;
  double change = 0.0;  // g(alpha_new) - g(alpha)
};

// Backtracks along d from step 1; on success advances alpha and ws.q.
StepOutcome line_search_in_place(const ProblemInstance& p, InnerWorkspace& ws, double eta,
                                 Vector& alpha, const Vector& d, const Vector& grad,
                                 const LineSearchParams& params) {
  Vector u;
  kernels::adjoint(p.design(), d, u);
  const double slope = grad.dot(d);
  for (double s = 1.0; s >= kMinLineSearchStep; s *= params.shrink) {
    const double change = objective_change(p, ws, eta, alpha, d, u, s);
    if (change <= params.sufficient_decrease * s * slope) {
      alpha += s * d;
      ws.q += s * u;
      ws.refresh_active(p.lambda());
      return {s, change};
    }
  }
  throw LineSearchError("backtracking line search: step fell below 1e-16");
}

}  // namespace

void SolverConfig::validate() const {
  if (eta_initial && !(*eta_initial > 0.0)) throw ArgumentError("eta_initial must be positive");
  if (!(eta_growth > 1.0)) throw ArgumentError("eta_growth must exceed 1");
  if (!(eps_initial_scale > 0.0)) throw ArgumentError("eps_initial_scale must be positive");
  if (!(eps_shrink > 0.0 && eps_shrink < 1.0)) throw ArgumentError("eps_shrink must lie in (0,1)");
  if (!(outer_tolerance > 0.0)) throw ArgumentError("outer_tolerance must be positive");
  if (max_outer < 1 || max_inner_newton < 1 || pcg_max_iters < 1) {
    throw ArgumentError("iteration caps must be positive");
  }
  if (!(line_search.shrink > 0.0 && line_search.shrink < 1.0)) {
    throw ArgumentError("line search shrink factor must lie in (0,1)");
  }
  if (!(line_search.sufficient_decrease > 0.0 && line_search.sufficient_decrease < 1.0)) {
    throw ArgumentError("line search sufficient-decrease constant must lie in (0,1)");
  }
}

double SolverConfig::resolved_eta_initial(const ProblemInstance& p) const {
  return eta_initial.value_or(1.0 / p.lambda());
}

void InnerWorkspace::update(const ProblemInstance& p, const Vector& w, double eta,
                            const Vector& alpha) {
  kernels::adjoint(p.design(), alpha, q);
  q += w / eta;
  refresh_active(p.lambda());
}

void InnerWorkspace::refresh_active(double lambda) {
  active_set = compute_active_set(q, lambda);
  st_active.resize(static_cast<Index>(active_set.size()));
  for (std::size_t k = 0; k < active_set.size(); ++k) {
    st_active(static_cast<Index>(k)) = st_scalar(q(active_set[k]), lambda);
  }
}

IndexSet compute_active_set(const Vector& q, double lambda) {
  IndexSet active;
  for (Index j = 0; j < q.size(); ++j) {
    if (std::abs(q(j)) > lambda) active.push_back(j);
  }
  return active;
}

double inner_objective(const ProblemInstance& p, const Vector& w, double eta, const Vector& alpha) {
  check_eta(eta);
  check_dims(p, w, alpha);
  InnerWorkspace ws;
  ws.update(p, w, eta, alpha);
  return objective_from(p, ws, eta, alpha);
}

Vector inner_gradient(const ProblemInstance& p, const Vector& w, double eta, const Vector& alpha) {
  check_eta(eta);
  check_dims(p, w, alpha);
  InnerWorkspace ws;
  ws.update(p, w, eta, alpha);
  return gradient_from(p, ws, eta, alpha);
}

Matrix inner_hessian(const ProblemInstance& p, const Vector& w, double eta, const Vector& alpha) {
  check_eta(eta);
  check_dims(p, w, alpha);
  InnerWorkspace ws;
  ws.update(p, w, eta, alpha);
  return kernels::shifted_gram_subset(p.design(), ws.active_set, eta);
}

Vector hessian_diagonal(const ProblemInstance& p, const Vector& w, double eta, const Vector& alpha) {
  check_eta(eta);
  check_dims(p, w, alpha);
  InnerWorkspace ws;
  ws.update(p, w, eta, alpha);
  Vector diag;
  kernels::row_sq_sums_subset(p.design(), ws.active_set, diag);
  return (eta * diag).array() + 1.0;
}

Vector newton_direction_cholesky(const ProblemInstance& p, const Vector& w, double eta,
                                 const Vector& alpha, const Vector& grad) {
  check_eta(eta);
  check_dims(p, w, alpha);
  if (!w.allFinite() || !alpha.allFinite()) {
    throw NumericError("newton_direction_cholesky: non-finite input");
  }
  InnerWorkspace ws;
  ws.update(p, w, eta, alpha);
  return cholesky_direction(p, ws, eta, grad);
}

PcgResult newton_direction_pcg(const ProblemInstance& p, const Vector& w, double eta,
                               const Vector& alpha, const Vector& grad, double tol, int max_iters) {
  check_eta(eta);
  check_dims(p, w, alpha);
  InnerWorkspace ws;
  ws.update(p, w, eta, alpha);
  return pcg_direction(p, ws, eta, grad, tol, max_iters);
}

LineSearchResult backtracking_line_search(const ProblemInstance& p, const Vector& w, double eta,
                                          const Vector& alpha, const Vector& direction,
                                          const LineSearchParams& params) {
  check_eta(eta);
  check_dims(p, w, alpha);
  InnerWorkspace ws;
  ws.update(p, w, eta, alpha);
  const Vector grad = gradient_from(p, ws, eta, alpha);
  const Vector d = grad.dot(direction) < 0.0 ? direction : Vector(-grad);
  LineSearchResult res;
  res.alpha = alpha;
  res.step = line_search_in_place(p, ws, eta, res.alpha, d, grad, params).step;
  return res;
}

InnerResult inner_solve(const ProblemInstance& p, const Vector& w, double eta, double eps,
                        const Vector& alpha_start, const SolverConfig& config) {
  check_eta(eta);
  check_dims(p, w, alpha_start);
  if (!(eps > 0.0)) throw ArgumentError("inner_solve: eps must be positive");

  InnerResult res;
  res.alpha = alpha_start;
  InnerWorkspace ws;
  ws.update(p, w, eta, res.alpha);
  int negligible_steps = 0;
  for (;;) {
    const Vector grad = gradient_from(p, ws, eta, res.alpha);
    const double gnorm = grad.norm();
    if (!std::isfinite(gnorm)) throw NumericError("inner_solve: non-finite gradient");
    res.grad_norms.push_back(gnorm);
    if (gnorm <= eps) {
      res.converged = true;
      break;
    }
    // Two accepted steps in a row that change g by less than its rounding
    // error: the gradient is at its floating-point floor.
    if (negligible_steps >= 2) {
      res.stalled = true;
      break;
    }
    if (res.newton_iters >= config.max_inner_newton) break;

    Vector d;
    if (config.inner_variant == InnerVariant::Cholesky) {
      d = cholesky_direction(p, ws, eta, grad);
    } else {
      // Forcing term: looser solves far from the minimizer.
      const double tol = std::min(0.1, std::sqrt(gnorm));
      PcgResult pcg = pcg_direction(p, ws, eta, grad, tol, config.pcg_max_iters);
      res.pcg_iters += pcg.iters;
      d = std::move(pcg.direction);
    }
    ++res.newton_iters;
    if (!(grad.dot(d) < 0.0)) d = -grad;

    const double g_before = objective_from(p, ws, eta, res.alpha);
    try {
      const StepOutcome out = line_search_in_place(p, ws, eta, res.alpha, d, grad, config.line_search);
      const double resolution = 4.0 * std::numeric_limits<double>::epsilon() * std::max(g_before, 1e-300);
      negligible_steps = -out.change <= resolution ? negligible_steps + 1 : 0;
    } catch (const LineSearchError&) {
      res.stalled = true;
      break;
    }
  }
  return res;
}

Vector outer_update(const Vector& w, const Vector& alpha, double eta, const ProblemInstance& p) {
  check_eta(eta);
  check_dims(p, w, alpha);
  Vector at_alpha;
  kernels::adjoint(p.design(), alpha, at_alpha);
  return soft_threshold(w + eta * at_alpha, p.lambda() * eta);
}

DalSolver::DalSolver(const ProblemInstance& p, SolverConfig config, Vector w_initial)
    : problem_(&p), config_(std::move(config)) {
  config_.validate();
  if (w_initial.size() != p.cols()) {
    throw ArgumentError("w_initial has length " + std::to_string(w_initial.size()) +
                        ", expected " + std::to_string(p.cols()));
  }
  if (!w_initial.allFinite()) throw NumericError("w_initial contains non-finite values");
  state_.w = std::move(w_initial);
  state_.alpha = p.observations();
  state_.eta = std::min(config_.resolved_eta_initial(p), kEtaCap);
  state_.eps =
      std::max(config_.eps_initial_scale * std::sqrt(static_cast<double>(p.rows())), kEpsFloor);
  const DualCertificate cert = certify(p, state_.w);
  state_.objective_trace.push_back(cert.primal_value);
  state_.gap_trace.push_back(cert.relative_gap);
}

bool DalSolver::step() {
  const ProblemInstance& p = *problem_;
  const double f_prev = state_.objective_trace.back();
  const auto account = [this](const InnerResult& inner) {
    state_.inner_newton_total += inner.newton_iters;
    state_.pcg_total += inner.pcg_iters;
    if (!inner.converged && !inner.stalled) ++state_.inner_cap_hits;
    if (inner.stalled) ++state_.inner_stalls;
  };

  InnerResult inner = inner_solve(p, state_.w, state_.eta, state_.eps, state_.alpha, config_);
  account(inner);
  Vector w_next = outer_update(state_.w, inner.alpha, state_.eta, p);
  if (!w_next.allFinite()) throw NumericError("outer update produced non-finite coefficients");

  // An exact inner minimizer guarantees f(w_next) <= f(w). When the inexact
  // one does not, tighten the inner tolerance; if that cannot help, keep w.
  const double slack = kDescentSlack * std::max(1.0, std::abs(f_prev));
  double eps_retry = state_.eps;
  for (int retry = 0; primal_objective(p, w_next) > f_prev + slack; ++retry) {
    if (retry == kDescentRetries || inner.stalled) {
      w_next = state_.w;
      ++state_.rejected_updates;
      break;
    }
    eps_retry = std::max(eps_retry * 1e-2, std::numeric_limits<double>::min());
    inner = inner_solve(p, state_.w, state_.eta, eps_retry, inner.alpha, config_);
    account(inner);
    w_next = outer_update(state_.w, inner.alpha, state_.eta, p);
  }
  state_.alpha = std::move(inner.alpha);
  state_.w = std::move(w_next);
  ++state_.outer_iter;

  const DualCertificate cert = certify(p, state_.w);
  state_.objective_trace.push_back(cert.primal_value);
  state_.gap_trace.push_back(cert.relative_gap);
  converged_ = cert.relative_gap <= config_.outer_tolerance;

  state_.eta = std::min(state_.eta * config_.eta_growth, kEtaCap);
  state_.eps = std::max(state_.eps * config_.eps_shrink, kEpsFloor);
  return converged_;
}

SolveReport DalSolver::run() {
  const auto start = std::chrono::steady_clock::now();
  while (!converged_ && state_.outer_iter < config_.max_outer) step();
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  return make_report(elapsed.count());
}

SolveReport DalSolver::make_report(double seconds) const {
  SolveReport r;
  r.w_final = state_.w;
  r.primal_value = state_.objective_trace.back();
  r.relative_gap = state_.gap_trace.back();
  r.outer_iters = state_.outer_iter;
  r.inner_newton_iters = state_.inner_newton_total;
  r.pcg_iters_total = state_.pcg_total;
  r.wall_time_seconds = seconds;
  r.nnz_fraction = nnz_fraction(state_.w);
  r.converged = converged_;
  r.inner_cap_hits = state_.inner_cap_hits;
  r.inner_stalls = state_.inner_stalls;
  r.rejected_updates = state_.rejected_updates;
  r.objective_trace = state_.objective_trace;
  r.gap_trace = state_.gap_trace;
  return r;
}

SolveReport solve(const ProblemInstance& p, const SolverConfig& config, const Vector& w_initial) {
  DalSolver solver(p, config, w_initial);
  return solver.run();
}

SolveReport solve(const ProblemInstance& p, const SolverConfig& config) {
  return solve(p, config, Vector::Zero(p.cols()));
}

}  // namespace dal
