// dalbench: generate lasso problems, solve them, and run benchmark grids.
//
//   dalbench gen   --family normal --m 128 --seed 7 --out p.dalp
//   dalbench solve p.dalp --solver dal-cg --tol 1e-3
//   dalbench bench --family poor --sizes 128,256 --out rows.csv
//
// Exit codes: 0 success, 2 usage, 3 data/format/I-O, 4 numeric failure.

#include "dal/bench.hpp"
#include "dal/errors.hpp"
#include "dal/problem_io.hpp"
#include "dal/probgen.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct GenArgs {
  std::string family;
  std::optional<std::int64_t> m;
  std::optional<std::int64_t> n;
  std::optional<double> density;
  std::optional<double> noise_variance;
  std::optional<double> lambda;
  std::optional<double> lambda_coef;
  std::uint64_t seed = 1;
  std::string out;
  std::string csv;
  bool allow_huge = false;
};

struct SolveArgs {
  std::string file;
  std::string solver = "dal-cg";
  std::optional<double> eta1;
  double tol = 1e-3;
  int max_outer = 100;
  int max_iters = 100000;
  std::string w_init = "zero";
  std::string family = "file";
  std::uint64_t seed = 0;
  bool quiet = false;
};

struct BenchArgs {
  std::string family;
  std::vector<std::int64_t> sizes;
  std::optional<std::int64_t> m;
  std::string seeds = "1-10";
  std::vector<std::string> solvers{"dal-chol", "dal-cg", "ist", "ist-bb"};
  std::optional<double> eta1;
  double tol = 1e-3;
  int max_outer = 100;
  int max_iters = 100000;
  std::string w_init = "zero";
  std::string out;
  std::string aggregate_out;
  std::optional<int> workers;
  bool allow_huge = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::optional<std::uint64_t> parse_w_init(const std::string& s) {
  if (s == "zero") return std::nullopt;
  const std::string prefix = "random:";
  if (s.rfind(prefix, 0) == 0) {
    try {
      std::size_t used = 0;
      const std::string digits = s.substr(prefix.size());
      const auto v = std::stoull(digits, &used);
      if (used == digits.size()) return v;
    } catch (const std::logic_error&) {
    }
  }
  throw UsageError("--w-init must be 'zero' or 'random:<seed>'");
}

// "1-10" or "1,2,5" or a mix.
std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  try {
    while (pos <= s.size()) {
      const std::size_t comma = s.find(',', pos);
      const std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      const std::size_t dash = item.find('-');
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(item));
      } else {
        const auto lo = std::stoull(item.substr(0, dash));
        const auto hi = std::stoull(item.substr(dash + 1));
        if (hi < lo || hi - lo > 100000) throw UsageError("bad seed range '" + item + "'");
        for (auto v = lo; v <= hi; ++v) seeds.push_back(v);
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  } catch (const std::logic_error&) {
    throw UsageError("cannot parse seeds '" + s + "'");
  }
  if (seeds.empty()) throw UsageError("no seeds given");
  return seeds;
}

int cmd_gen(const GenArgs& a) {
  const dal::Family family = dal::family_from_string(a.family);
  dal::GenSpec spec;
  switch (family) {
    case dal::Family::NormalConditioning:
    case dal::Family::PoorConditioning:
      if (!a.m) throw UsageError("--m is required for the " + a.family + " family");
      spec = family == dal::Family::NormalConditioning ? dal::GenSpec::normal(*a.m, a.seed)
                                                       : dal::GenSpec::poor(*a.m, a.seed);
      if (a.n) spec.n = *a.n;
      break;
    case dal::Family::LargeScale:
      if (!a.n) throw UsageError("--n is required for the largescale family");
      if (*a.n > dal::bench::kDefaultMaxColumns && !a.allow_huge) {
        throw UsageError("n exceeds " + std::to_string(dal::bench::kDefaultMaxColumns) + "; pass --allow-huge");
      }
      spec = dal::GenSpec::large_scale(*a.n, a.seed, a.m.value_or(1024));
      break;
  }
  if (a.density) spec.density = *a.density;
  if (a.noise_variance) spec.noise_variance = *a.noise_variance;
  if (a.lambda && a.lambda_coef) throw UsageError("--lambda and --lambda-coef are mutually exclusive");
  if (a.lambda) spec.lambda_rule = dal::FixedLambda{*a.lambda};
  if (a.lambda_coef) spec.lambda_rule = dal::InverseSqrtNLambda{*a.lambda_coef};
  try {
    spec.validate();
  } catch (const dal::ArgumentError& e) {
    throw UsageError(e.what());
  }

  const dal::GeneratedProblem gp = dal::generate(spec);
  const std::string out = a.out.empty() ? a.family + "_m" + std::to_string(spec.m) + "_n" +
                                              std::to_string(spec.n) + "_s" + std::to_string(a.seed) + ".dalp"
                                        : a.out;
  dal::write_problem(out, gp);
  if (!a.csv.empty()) dal::write_problem_csv(a.csv, gp);
  const auto nnz = (gp.true_coeffs.array() != 0.0).count();
  std::cout << out << " m=" << spec.m << " n=" << spec.n << " lambda=" << spec.lambda() << " nnz_w0=" << nnz
            << '\n';
  return 0;
}

int cmd_solve(const SolveArgs& a) {
  const dal::bench::SolverId solver = dal::bench::solver_from_string(a.solver);
  dal::bench::RunOptions opts;
  opts.tolerance = a.tol;
  opts.eta_initial = a.eta1;
  opts.max_outer = a.max_outer;
  opts.ist_max_iters = a.max_iters;
  opts.w_init_seed = parse_w_init(a.w_init);

  const dal::GeneratedProblem gp = dal::read_problem(a.file);
  const dal::bench::BenchRecord rec = dal::bench::run_solver(gp.problem, solver, opts, a.family, a.seed);
  std::cout << dal::bench::to_json(rec).dump() << '\n';
  if (!a.quiet) {
    std::cerr << rec.solver << ": " << (rec.converged ? "converged" : "NOT converged") << " gap=" << rec.final_gap
              << " f=" << rec.primal_value << " outer=" << rec.outer_iters << " inner=" << rec.inner_iters
              << " nnz=" << rec.nnz_fraction << " time=" << rec.wall_time_s << "s\n";
  }
  return 0;
}

int cmd_bench(const BenchArgs& a) {
  dal::bench::BenchPlan plan;
  plan.family = dal::family_from_string(a.family);
  for (const auto s : a.sizes) {
    if (s < 1) throw UsageError("sizes must be positive");
    plan.sizes.push_back(s);
  }
  plan.fixed_m = a.m;
  plan.seeds = parse_seeds(a.seeds);
  plan.solvers.clear();
  for (const auto& s : a.solvers) plan.solvers.push_back(dal::bench::solver_from_string(s));
  plan.options.tolerance = a.tol;
  plan.options.eta_initial = a.eta1;
  plan.options.max_outer = a.max_outer;
  plan.options.ist_max_iters = a.max_iters;
  plan.options.w_init_seed = parse_w_init(a.w_init);
  plan.workers = a.workers.value_or(dal::bench::worker_count_from_env(1));
  plan.allow_huge = a.allow_huge;

  std::vector<dal::bench::BenchRecord> records;
  try {
    records = dal::bench::run_bench(plan);
  } catch (const dal::ArgumentError& e) {
    throw UsageError(e.what());
  }

  std::ofstream rows(a.out, std::ios::binary | std::ios::trunc);
  if (!rows) throw dal::FormatError("cannot open '" + a.out + "' for writing");
  dal::bench::write_records_csv(rows, records);
  const std::string agg_path = a.aggregate_out.empty() ? a.out + ".agg.csv" : a.aggregate_out;
  std::ofstream agg(agg_path, std::ios::binary | std::ios::trunc);
  if (!agg) throw dal::FormatError("cannot open '" + agg_path + "' for writing");
  dal::bench::write_aggregate_csv(agg, dal::bench::aggregate(records));
  if (!rows || !agg) throw dal::FormatError("writing benchmark output failed");
  std::cout << a.out << " rows=" << records.size() << '\n' << agg_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual augmented Lagrangian lasso solver: problem generation, solving, benchmarking"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic problem file");
  gen_cmd->add_option("--family", gen.family, "normal | poor | largescale")->required();
  gen_cmd->add_option("--m", gen.m, "Observations (rows)");
  gen_cmd->add_option("--n", gen.n, "Unknowns (columns)");
  gen_cmd->add_option("--density", gen.density, "Fraction of nonzero true coefficients");
  gen_cmd->add_option("--noise-variance", gen.noise_variance, "Observation noise variance");
  gen_cmd->add_option("--lambda", gen.lambda, "Fixed regularization weight");
  gen_cmd->add_option("--lambda-coef", gen.lambda_coef, "lambda = coef / sqrt(n)");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--out", gen.out, "Output .dalp path");
  gen_cmd->add_option("--csv", gen.csv, "Also export a long-format CSV (small problems)");
  gen_cmd->add_flag("--allow-huge", gen.allow_huge, "Permit n above the desk-scale cap");

  SolveArgs sol;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a problem file; prints one JSON record");
  solve_cmd->add_option("file", sol.file, "Problem file")->required();
  solve_cmd->add_option("--solver", sol.solver, "dal-chol | dal-cg | ist | ist-bb");
  solve_cmd->add_option("--eta1", sol.eta1, "Initial barrier parameter (default 1/lambda)");
  solve_cmd->add_option("--tol", sol.tol, "Relative duality gap tolerance");
  solve_cmd->add_option("--max-outer", sol.max_outer, "DAL outer iteration cap");
  solve_cmd->add_option("--max-iters", sol.max_iters, "IST iteration cap");
  solve_cmd->add_option("--w-init", sol.w_init, "zero | random:<seed>");
  solve_cmd->add_option("--family", sol.family, "Family label for the record");
  solve_cmd->add_option("--seed", sol.seed, "Seed label for the record");
  solve_cmd->add_flag("--quiet", sol.quiet, "No summary on stderr");

  BenchArgs ben;
  auto* bench_cmd = app.add_subcommand("bench", "Run a solver x size x seed grid to CSV");
  bench_cmd->add_option("--family", ben.family, "normal | poor | largescale")->required();
  bench_cmd->add_option("--sizes", ben.sizes, "m values (normal, poor) or n values (largescale)")
      ->required()
      ->delimiter(',');
  bench_cmd->add_option("--m", ben.m, "Rows for the largescale family (default 1024)");
  bench_cmd->add_option("--seeds", ben.seeds, "Seeds, e.g. 1-10 or 1,4,9");
  bench_cmd->add_option("--solvers", ben.solvers, "Comma-separated solver list")->delimiter(',');
  bench_cmd->add_option("--eta1", ben.eta1, "Initial barrier parameter (default 1/lambda)");
  bench_cmd->add_option("--tol", ben.tol, "Relative duality gap tolerance");
  bench_cmd->add_option("--max-outer", ben.max_outer, "DAL outer iteration cap");
  bench_cmd->add_option("--max-iters", ben.max_iters, "IST iteration cap");
  bench_cmd->add_option("--w-init", ben.w_init, "zero | random:<seed>");
  bench_cmd->add_option("--out", ben.out, "Row CSV path")->required();
  bench_cmd->add_option("--aggregate", ben.aggregate_out, "Median CSV path (default <out>.agg.csv)");
  bench_cmd->add_option("--workers", ben.workers, "Parallel cells (default DAL_NUM_THREADS or 1)");
  bench_cmd->add_flag("--allow-huge", ben.allow_huge, "Permit n above the desk-scale cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*solve_cmd) return cmd_solve(sol);
    if (*bench_cmd) return cmd_bench(ben);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const dal::ArgumentError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const dal::FormatError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const dal::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}
