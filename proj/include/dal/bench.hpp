#pragma once

// Benchmark harness shared by the dalbench CLI and the acceptance suite.

#include "dal/linalg.hpp"
#include "dal/probgen.hpp"
#include "dal/prox.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dal::bench {

enum class SolverId { DalChol, DalCg, Ist, IstBb };

std::string to_string(SolverId id);
/// "dal-chol", "dal-cg", "ist", "ist-bb". Throws ArgumentError otherwise.
SolverId solver_from_string(const std::string& s);
inline const std::vector<SolverId>& all_solvers() {
  static const std::vector<SolverId> ids{SolverId::DalChol, SolverId::DalCg, SolverId::Ist, SolverId::IstBb};
  return ids;
}

struct RunOptions {
  double tolerance = 1e-3;
  std::optional<double> eta_initial;  // DAL only; unset means 1/lambda
  int max_outer = 100;                // DAL outer iterations
  int ist_max_iters = 100000;
  std::optional<std::uint64_t> w_init_seed;  // unset: start from zero
};

struct BenchRecord {
  std::string solver;
  std::string family;
  std::int64_t m = 0;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  std::optional<double> eta_initial;
  double wall_time_s = 0.0;
  int outer_iters = 0;
  int inner_iters = 0;
  int pcg_iters = 0;
  double nnz_fraction = 0.0;
  double primal_value = 0.0;
  double final_gap = 0.0;
  bool converged = false;
  std::string error;  // empty on success
};

/// Runs one solver; wall time covers the solve only. Numeric failures
/// propagate as exceptions.
BenchRecord run_solver(const ProblemInstance& p, SolverId solver, const RunOptions& options,
                       const std::string& family, std::uint64_t seed);

nlohmann::ordered_json to_json(const BenchRecord& r);

/// Largest n accepted for the large-scale family without allow_huge.
inline constexpr Index kDefaultMaxColumns = Index{1} << 17;

struct BenchPlan {
  Family family = Family::NormalConditioning;
  std::vector<Index> sizes;  // m for normal/poor, n for largescale
  std::optional<Index> fixed_m;  // largescale only; default 1024
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<SolverId> solvers = all_solvers();
  RunOptions options;
  int workers = 1;
  bool allow_huge = false;
};

GenSpec spec_for(const BenchPlan& plan, Index size, std::uint64_t seed);

/// Every (solver, size, seed) cell yields exactly one record; failures are
/// recorded with converged=false and a message. Records are sorted by
/// (m, n, seed, solver) so output does not depend on the worker count.
std::vector<BenchRecord> run_bench(const BenchPlan& plan);

void write_records_csv(std::ostream& out, const std::vector<BenchRecord>& records);
std::vector<BenchRecord> read_records_csv(std::istream& in);

struct AggregateRow {
  std::string solver;
  std::string family;
  std::int64_t m = 0;
  std::int64_t n = 0;
  int runs = 0;
  int converged_runs = 0;
  double median_wall_time_s = 0.0;
  double median_outer_iters = 0.0;
  double median_inner_iters = 0.0;
  double median_pcg_iters = 0.0;
  double median_nnz_fraction = 0.0;
  double median_final_gap = 0.0;
};

double median(std::vector<double> values);

/// Per-(solver, family, m, n) medians, in first-appearance order of the
/// sorted records.
std::vector<AggregateRow> aggregate(const std::vector<BenchRecord>& records);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

/// DAL_NUM_THREADS if set to a positive integer, else `fallback`.
int worker_count_from_env(int fallback);

}  // namespace dal::bench
