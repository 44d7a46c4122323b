#include "dal/bench.hpp"

#include "dal/baselines.hpp"
#include "dal/dal.hpp"
#include "dal/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>
#include <utility>

namespace dal::bench {
namespace {

const char* const kRecordHeader[] = {"solver",      "family",    "m",          "n",           "seed",
                                     "lambda",      "eta_initial", "wall_time_s", "outer_iters", "inner_iters",
                                     "pcg_iters",   "nnz_fraction", "primal_value", "final_gap", "converged",
                                     "error"};
constexpr std::size_t kRecordColumns = std::size(kRecordHeader);

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_field(fields[i]);
  }
  out << "\r\n";
}

// RFC 4180 record reader; returns false at end of input.
bool read_row(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  for (;;) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) {
      fields.push_back(field);
      return true;
    }
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        field += static_cast<char>(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
      continue;
    } else if (c == '\n') {
      fields.push_back(std::move(field));
      return true;
    } else {
      field += static_cast<char>(c);
    }
  }
}

auto sort_key(const BenchRecord& r) {
  return std::make_tuple(r.m, r.n, r.seed, static_cast<int>(solver_from_string(r.solver)));
}

BenchRecord failed_record(SolverId solver, const GenSpec& spec, const std::string& message) {
  BenchRecord r;
  r.solver = to_string(solver);
  r.family = to_string(spec.family);
  r.m = spec.m;
  r.n = spec.n;
  r.seed = spec.seed;
  r.lambda = spec.lambda();
  r.converged = false;
  r.error = message.empty() ? "unknown error" : message;
  return r;
}

}  // namespace

std::string to_string(SolverId id) {
  switch (id) {
    case SolverId::DalChol: return "dal-chol";
    case SolverId::DalCg: return "dal-cg";
    case SolverId::Ist: return "ist";
    case SolverId::IstBb: return "ist-bb";
  }
  return "unknown";
}

SolverId solver_from_string(const std::string& s) {
  if (s == "dal-chol") return SolverId::DalChol;
  if (s == "dal-cg") return SolverId::DalCg;
  if (s == "ist") return SolverId::Ist;
  if (s == "ist-bb") return SolverId::IstBb;
  throw ArgumentError("unknown solver '" + s + "' (expected dal-chol|dal-cg|ist|ist-bb)");
}

BenchRecord run_solver(const ProblemInstance& p, SolverId solver, const RunOptions& options,
                       const std::string& family, std::uint64_t seed) {
  BenchRecord rec;
  rec.solver = to_string(solver);
  rec.family = family;
  rec.m = p.rows();
  rec.n = p.cols();
  rec.seed = seed;
  rec.lambda = p.lambda();

  const Vector w0 = options.w_init_seed ? random_initial_coeffs(p.cols(), *options.w_init_seed)
                                        : Vector(Vector::Zero(p.cols()));
  SolveReport rep;
  if (solver == SolverId::DalChol || solver == SolverId::DalCg) {
    SolverConfig cfg;
    cfg.inner_variant = solver == SolverId::DalChol ? InnerVariant::Cholesky : InnerVariant::PCG;
    cfg.outer_tolerance = options.tolerance;
    cfg.max_outer = options.max_outer;
    cfg.eta_initial = options.eta_initial;
    rec.eta_initial = cfg.resolved_eta_initial(p);
    rep = solve(p, cfg, w0);
  } else {
    IstConfig cfg = solver == SolverId::Ist ? unit_lipschitz_ist_config(p) : IstConfig{};
    cfg.tolerance = options.tolerance;
    cfg.max_iters = options.ist_max_iters;
    rep = ist_solve(p, cfg, w0);
  }
  rec.wall_time_s = rep.wall_time_seconds;
  rec.outer_iters = rep.outer_iters;
  rec.inner_iters = rep.inner_newton_iters;
  rec.pcg_iters = rep.pcg_iters_total;
  rec.nnz_fraction = rep.nnz_fraction;
  rec.primal_value = rep.primal_value;
  rec.final_gap = rep.relative_gap;
  rec.converged = rep.converged;
  return rec;
}

nlohmann::ordered_json to_json(const BenchRecord& r) {
  nlohmann::ordered_json j;
  j["solver"] = r.solver;
  j["family"] = r.family;
  j["m"] = r.m;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["lambda"] = r.lambda;
  j["eta_initial"] = r.eta_initial ? nlohmann::ordered_json(*r.eta_initial) : nlohmann::ordered_json();
  j["wall_time_s"] = r.wall_time_s;
  j["outer_iters"] = r.outer_iters;
  j["inner_iters"] = r.inner_iters;
  j["pcg_iters"] = r.pcg_iters;
  j["nnz_fraction"] = r.nnz_fraction;
  j["primal_value"] = r.primal_value;
  j["final_gap"] = r.final_gap;
  j["converged"] = r.converged;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

GenSpec spec_for(const BenchPlan& plan, Index size, std::uint64_t seed) {
  switch (plan.family) {
    case Family::NormalConditioning: return GenSpec::normal(size, seed);
    case Family::PoorConditioning: return GenSpec::poor(size, seed);
    case Family::LargeScale:
      if (size > kDefaultMaxColumns && !plan.allow_huge) {
        throw ArgumentError("n = " + std::to_string(size) + " exceeds the default cap of " +
                            std::to_string(kDefaultMaxColumns) + " columns; pass --allow-huge");
      }
      return GenSpec::large_scale(size, seed, plan.fixed_m.value_or(1024));
  }
  throw ArgumentError("unknown family");
}

std::vector<BenchRecord> run_bench(const BenchPlan& plan) {
  if (plan.sizes.empty() || plan.seeds.empty() || plan.solvers.empty()) {
    throw ArgumentError("bench plan needs at least one size, seed and solver");
  }
  struct Cell {
    GenSpec spec;
  };
  std::vector<Cell> cells;
  for (const Index size : plan.sizes) {
    for (const std::uint64_t seed : plan.seeds) {
      GenSpec spec = spec_for(plan, size, seed);
      spec.validate();
      cells.push_back({spec});
    }
  }

  std::vector<std::vector<BenchRecord>> results(cells.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
      const GenSpec& spec = cells[i].spec;
      auto& out = results[i];
      std::optional<GeneratedProblem> gp;
      std::string gen_error;
      try {
        gp.emplace(generate(spec));
      } catch (const std::exception& e) {
        gen_error = std::string("generation failed: ") + e.what();
      }
      for (const SolverId solver : plan.solvers) {
        if (!gp) {
          out.push_back(failed_record(solver, spec, gen_error));
          continue;
        }
        try {
          out.push_back(run_solver(gp->problem, solver, plan.options, to_string(spec.family), spec.seed));
        } catch (const std::exception& e) {
          out.push_back(failed_record(solver, spec, e.what()));
        }
      }
    }
  };

  const int workers = std::max(1, std::min<int>(plan.workers, static_cast<int>(cells.size())));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
  }

  std::vector<BenchRecord> records;
  for (auto& cell : results) {
    for (auto& r : cell) records.push_back(std::move(r));
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const BenchRecord& a, const BenchRecord& b) { return sort_key(a) < sort_key(b); });
  return records;
}

void write_records_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  write_row(out, std::vector<std::string>(std::begin(kRecordHeader), std::end(kRecordHeader)));
  for (const BenchRecord& r : records) {
    write_row(out, {r.solver, r.family, std::to_string(r.m), std::to_string(r.n), std::to_string(r.seed),
                    num(r.lambda), r.eta_initial ? num(*r.eta_initial) : std::string(), num(r.wall_time_s),
                    std::to_string(r.outer_iters), std::to_string(r.inner_iters), std::to_string(r.pcg_iters),
                    num(r.nnz_fraction), num(r.primal_value), num(r.final_gap),
                    r.converged ? "true" : "false", r.error});
  }
}

std::vector<BenchRecord> read_records_csv(std::istream& in) {
  std::vector<std::string> f;
  if (!read_row(in, f) || f.size() != kRecordColumns || f[0] != "solver") {
    throw FormatError("bench CSV: missing or malformed header");
  }
  std::vector<BenchRecord> records;
  while (read_row(in, f)) {
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != kRecordColumns) throw FormatError("bench CSV: row has " + std::to_string(f.size()) + " fields");
    BenchRecord r;
    try {
      r.solver = f[0];
      r.family = f[1];
      r.m = std::stoll(f[2]);
      r.n = std::stoll(f[3]);
      r.seed = std::stoull(f[4]);
      r.lambda = std::stod(f[5]);
      if (!f[6].empty()) r.eta_initial = std::stod(f[6]);
      r.wall_time_s = std::stod(f[7]);
      r.outer_iters = std::stoi(f[8]);
      r.inner_iters = std::stoi(f[9]);
      r.pcg_iters = std::stoi(f[10]);
      r.nnz_fraction = std::stod(f[11]);
      r.primal_value = std::stod(f[12]);
      r.final_gap = std::stod(f[13]);
    } catch (const std::logic_error&) {
      throw FormatError("bench CSV: unparsable numeric field");
    }
    r.converged = f[14] == "true";
    r.error = f[15];
    records.push_back(std::move(r));
  }
  return records;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<AggregateRow> aggregate(const std::vector<BenchRecord>& records) {
  using Key = std::tuple<std::string, std::string, std::int64_t, std::int64_t>;
  std::vector<Key> order;
  std::map<Key, std::vector<const BenchRecord*>> groups;
  for (const BenchRecord& r : records) {
    Key key{r.solver, r.family, r.m, r.n};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  std::vector<AggregateRow> rows;
  for (const Key& key : order) {
    const auto& group = groups.at(key);
    AggregateRow row;
    std::tie(row.solver, row.family, row.m, row.n) = key;
    row.runs = static_cast<int>(group.size());
    std::vector<double> wall, outer, inner, pcg, nnz, gap;
    for (const BenchRecord* r : group) {
      row.converged_runs += r->converged ? 1 : 0;
      wall.push_back(r->wall_time_s);
      outer.push_back(r->outer_iters);
      inner.push_back(r->inner_iters);
      pcg.push_back(r->pcg_iters);
      nnz.push_back(r->nnz_fraction);
      gap.push_back(r->final_gap);
    }
    row.median_wall_time_s = median(wall);
    row.median_outer_iters = median(outer);
    row.median_inner_iters = median(inner);
    row.median_pcg_iters = median(pcg);
    row.median_nnz_fraction = median(nnz);
    row.median_final_gap = median(gap);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  write_row(out, {"solver", "family", "m", "n", "runs", "converged_runs", "median_wall_time_s",
                  "median_outer_iters", "median_inner_iters", "median_pcg_iters", "median_nnz_fraction",
                  "median_final_gap"});
  for (const AggregateRow& r : rows) {
    write_row(out, {r.solver, r.family, std::to_string(r.m), std::to_string(r.n), std::to_string(r.runs),
                    std::to_string(r.converged_runs), num(r.median_wall_time_s), num(r.median_outer_iters),
                    num(r.median_inner_iters), num(r.median_pcg_iters), num(r.median_nnz_fraction),
                    num(r.median_final_gap)});
  }
}

int worker_count_from_env(int fallback) {
  const char* env = std::getenv("DAL_NUM_THREADS");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) return fallback;
  return static_cast<int>(std::min<long>(v, 1024));
}

}  // namespace dal::bench
