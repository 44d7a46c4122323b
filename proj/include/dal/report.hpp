#pragma once

#include "dal/linalg.hpp"

#include <vector>

namespace dal {

/// Outcome of a solver run; shared by the DAL solver and the IST baselines.
struct SolveReport {
  Vector w_final;
  double primal_value = 0.0;
  double relative_gap = 0.0;
  int outer_iters = 0;
  int inner_newton_iters = 0;
  int pcg_iters_total = 0;  // 0 for Cholesky and IST
  double wall_time_seconds = 0.0;
  double nnz_fraction = 0.0;
  bool converged = false;
  int inner_cap_hits = 0;  // inner solves that exhausted max_inner_newton
  int inner_stalls = 0;    // inner solves stopped at floating-point resolution
  int rejected_updates = 0;  // outer updates discarded because f would increase
  std::vector<double> objective_trace;
  std::vector<double> gap_trace;
};

/// Fraction of exactly nonzero entries.
inline double nnz_fraction(const Vector& w) {
  if (w.size() == 0) return 0.0;
  return static_cast<double>((w.array() != 0.0).count()) / static_cast<double>(w.size());
}

}  // namespace dal
