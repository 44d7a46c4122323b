#pragma once

// Dual augmented Lagrangian solver for 0.5*||A w - b||^2 + lambda*||w||_1.
//
// Each outer iteration approximately minimizes over alpha in R^m
//
//   g(alpha) = 0.5*||alpha - b||^2 + (eta/2)*||ST_lambda(A^T alpha + w/eta)||^2
//
// with a Newton method, then updates w <- ST_{lambda*eta}(w + eta*A^T alpha)
// and grows eta. Only the active columns {j : |q_j| > lambda} of A enter the
// gradient and Hessian of g, which keeps the inner problem m-dimensional and
// cheap when the solution is sparse.

#include "dal/linalg.hpp"
#include "dal/prox.hpp"
#include "dal/report.hpp"

#include <optional>
#include <vector>

namespace dal {

enum class InnerVariant { Cholesky, PCG };

struct LineSearchParams {
  double shrink = 0.5;               // beta
  double sufficient_decrease = 1e-4;  // Armijo c1
};

struct SolverConfig {
  std::optional<double> eta_initial;  // unset: 1/lambda
  double eta_growth = 2.0;
  double eps_initial_scale = 1e-4;  // eps_1 = scale * sqrt(m)
  double eps_shrink = 0.5;
  double outer_tolerance = 1e-3;  // relative duality gap
  int max_outer = 100;
  int max_inner_newton = 100;
  InnerVariant inner_variant = InnerVariant::PCG;
  int pcg_max_iters = 1000;
  LineSearchParams line_search;

  /// Throws ArgumentError on out-of-range fields.
  void validate() const;
  double resolved_eta_initial(const ProblemInstance& p) const;
};

inline constexpr double kEtaCap = 1e12;
inline constexpr double kEpsFloor = 1e-12;
inline constexpr double kMinLineSearchStep = 1e-16;
/// f(w_next) may exceed f(w) by at most this times max(1, |f(w)|).
inline constexpr double kDescentSlack = 1e-14;
/// Inner re-solves (eps / 100 each) before an ascending outer update is rejected.
inline constexpr int kDescentRetries = 3;

struct SolverState {
  Vector w;
  Vector alpha;
  double eta = 0.0;
  double eps = 0.0;
  int outer_iter = 0;
  int inner_newton_total = 0;
  int pcg_total = 0;
  int inner_cap_hits = 0;
  int inner_stalls = 0;
  int rejected_updates = 0;
  std::vector<double> objective_trace;  // f(w_1), f(w_2), ...
  std::vector<double> gap_trace;        // relative gap at the same iterates
};

/// q = A^T alpha + w/eta and its active set {j : |q_j| > lambda}.
struct InnerWorkspace {
  Vector q;
  IndexSet active_set;
  Vector st_active;  // ST_lambda(q) restricted to active_set, compact

  void update(const ProblemInstance& p, const Vector& w, double eta, const Vector& alpha);
  /// Recompute active_set and st_active from the current q.
  void refresh_active(double lambda);
};

IndexSet compute_active_set(const Vector& q, double lambda);

double inner_objective(const ProblemInstance& p, const Vector& w, double eta, const Vector& alpha);
Vector inner_gradient(const ProblemInstance& p, const Vector& w, double eta, const Vector& alpha);

/// I_m + eta * A_+ A_+^T at alpha.
Matrix inner_hessian(const ProblemInstance& p, const Vector& w, double eta, const Vector& alpha);

/// Diagonal of the inner Hessian: 1 + eta * sum_{j active} A_ij^2.
Vector hessian_diagonal(const ProblemInstance& p, const Vector& w, double eta, const Vector& alpha);

Vector newton_direction_cholesky(const ProblemInstance& p, const Vector& w, double eta,
                                 const Vector& alpha, const Vector& grad);

struct PcgResult {
  Vector direction;
  int iters = 0;
};

/// Diagonally preconditioned CG on the Newton system, matrix-free. Stops when
/// ||r|| <= tol * ||grad|| (r the Newton-system residual) or after max_iters.
PcgResult newton_direction_pcg(const ProblemInstance& p, const Vector& w, double eta,
                               const Vector& alpha, const Vector& grad, double tol, int max_iters);

struct LineSearchResult {
  Vector alpha;
  double step = 0.0;
};

/// Armijo backtracking from step 1. A non-descent direction is replaced by
/// -grad. Throws LineSearchError if the step falls below 1e-16.
LineSearchResult backtracking_line_search(const ProblemInstance& p, const Vector& w, double eta,
                                          const Vector& alpha, const Vector& direction,
                                          const LineSearchParams& params = {});

struct InnerResult {
  Vector alpha;
  int newton_iters = 0;
  int pcg_iters = 0;
  bool converged = false;  // ||grad|| <= eps reached
  bool stalled = false;    // progress fell below floating-point resolution
  std::vector<double> grad_norms;  // at every iterate, including the start
};

InnerResult inner_solve(const ProblemInstance& p, const Vector& w, double eta, double eps,
                        const Vector& alpha_start, const SolverConfig& config);

/// ST_{lambda*eta}(w + eta * A^T alpha).
Vector outer_update(const Vector& w, const Vector& alpha, double eta, const ProblemInstance& p);

/// Outer loop with inspectable state; solve() drives it to completion.
class DalSolver {
 public:
  DalSolver(const ProblemInstance& p, SolverConfig config, Vector w_initial);

  /// One outer iteration. Returns true once the gap tolerance is met.
  bool step();
  SolveReport run();

  bool converged() const { return converged_; }
  const SolverState& state() const { return state_; }
  const SolverConfig& config() const { return config_; }

 private:
  SolveReport make_report(double seconds) const;

  const ProblemInstance* problem_;
  SolverConfig config_;
  SolverState state_;
  bool converged_ = false;
};

SolveReport solve(const ProblemInstance& p, const SolverConfig& config, const Vector& w_initial);
SolveReport solve(const ProblemInstance& p, const SolverConfig& config);

}  // namespace dal
