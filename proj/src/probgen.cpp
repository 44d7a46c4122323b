#include "dal/probgen.hpp"

#include "dal/errors.hpp"
#include "dal/kernels.hpp"
#include "dal/rng.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace dal {

std::string to_string(Family f) {
  switch (f) {
    case Family::NormalConditioning: return "normal";
    case Family::PoorConditioning: return "poor";
    case Family::LargeScale: return "largescale";
  }
  return "unknown";
}

Family family_from_string(const std::string& s) {
  if (s == "normal") return Family::NormalConditioning;
  if (s == "poor") return Family::PoorConditioning;
  if (s == "largescale") return Family::LargeScale;
  throw ArgumentError("unknown problem family '" + s + "' (expected normal|poor|largescale)");
}

GenSpec GenSpec::normal(Index m, std::uint64_t seed) {
  GenSpec s;
  s.family = Family::NormalConditioning;
  s.m = m;
  s.n = 4 * m;
  s.noise_variance = 1e-4;
  s.lambda_rule = FixedLambda{0.025};
  s.seed = seed;
  return s;
}

GenSpec GenSpec::poor(Index m, std::uint64_t seed) {
  GenSpec s;
  s.family = Family::PoorConditioning;
  s.m = m;
  s.n = 4 * m;
  s.noise_variance = 0.0;
  s.lambda_rule = FixedLambda{0.0003};
  s.seed = seed;
  return s;
}

GenSpec GenSpec::large_scale(Index n, std::uint64_t seed, Index m) {
  GenSpec s;
  s.family = Family::LargeScale;
  s.m = m;
  s.n = n;
  s.noise_variance = 1e-4;
  s.lambda_rule = InverseSqrtNLambda{1.6};
  s.seed = seed;
  return s;
}

double GenSpec::lambda() const {
  if (const auto* f = std::get_if<FixedLambda>(&lambda_rule)) return f->value;
  return std::get<InverseSqrtNLambda>(lambda_rule).coefficient / std::sqrt(static_cast<double>(n));
}

void GenSpec::validate() const {
  if (m < 1 || n < 1) throw ArgumentError("m and n must be positive");
  if (!(density > 0.0 && density <= 1.0)) throw ArgumentError("density must lie in (0, 1]");
  if (!(noise_variance >= 0.0)) throw ArgumentError("noise variance must be nonnegative");
  if (!(lambda() > 0.0) || !std::isfinite(lambda())) throw ArgumentError("lambda must be positive");
  if (family == Family::PoorConditioning && m > kMaxSvdRows) {
    throw ArgumentError("poor-conditioning problems need a full SVD; m is limited to " +
                        std::to_string(kMaxSvdRows));
  }
}

Matrix gen_gaussian_design(Index m, Index n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw ArgumentError("gen_gaussian_design: m and n must be positive");
  const CounterRng rng(seed, rng_stream::kDesign);
  const double scale = std::sqrt(1.0 / (2.0 * static_cast<double>(n)));
  Matrix a(m, n);
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < n; ++j) {
    const auto base = static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(m);
    for (Index i = 0; i < m; ++i) a(i, j) = scale * rng.normal(base + static_cast<std::uint64_t>(i));
  }
  return a;
}

Vector gen_sparse_coeffs(Index n, double density, std::uint64_t seed) {
  if (n < 1) throw ArgumentError("gen_sparse_coeffs: n must be positive");
  if (!(density > 0.0 && density <= 1.0)) throw ArgumentError("gen_sparse_coeffs: density must lie in (0, 1]");
  // nearbyint honours the default round-half-to-even mode.
  const auto k = static_cast<Index>(std::nearbyint(density * static_cast<double>(n)));
  const CounterRng rng(seed, rng_stream::kCoefficients);
  constexpr std::uint64_t kSignOffset = std::uint64_t{1} << 40;

  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  Vector w = Vector::Zero(n);
  for (Index t = 0; t < k; ++t) {
    const auto pick = t + static_cast<Index>(rng.below(static_cast<std::uint64_t>(t),
                                                       static_cast<std::uint64_t>(n - t)));
    std::swap(perm[static_cast<std::size_t>(t)], perm[static_cast<std::size_t>(pick)]);
    const bool positive = (rng.bits(kSignOffset + static_cast<std::uint64_t>(t)) & 1U) != 0;
    w(perm[static_cast<std::size_t>(t)]) = positive ? 1.0 : -1.0;
  }
  return w;
}

Matrix impose_power_law_spectrum(const Matrix& a) {
  if (!a.allFinite()) throw NumericError("impose_power_law_spectrum: non-finite input");
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericError("impose_power_law_spectrum: SVD failed");
  const Index r = std::min(a.rows(), a.cols());
  Vector sigma(r);
  for (Index s = 0; s < r; ++s) sigma(s) = 1.0 / static_cast<double>(s + 1);
  return svd.matrixU() * sigma.asDiagonal() * svd.matrixV().transpose();
}

GeneratedProblem generate(const GenSpec& spec) {
  spec.validate();
  Matrix a = gen_gaussian_design(spec.m, spec.n, spec.seed);
  if (spec.family == Family::PoorConditioning) a = impose_power_law_spectrum(a);
  Vector w0 = gen_sparse_coeffs(spec.n, spec.density, spec.seed);

  const IndexSet supp = kernels::support(w0);
  Vector coef(static_cast<Index>(supp.size()));
  for (std::size_t k = 0; k < supp.size(); ++k) coef(static_cast<Index>(k)) = w0(supp[k]);
  Vector b;
  kernels::forward_subset(a, supp, coef, b);
  if (spec.noise_variance > 0.0) {
    const CounterRng rng(spec.seed, rng_stream::kNoise);
    const double sd = std::sqrt(spec.noise_variance);
    for (Index i = 0; i < spec.m; ++i) b(i) += sd * rng.normal(static_cast<std::uint64_t>(i));
  }
  return GeneratedProblem{ProblemInstance(std::move(a), std::move(b), spec.lambda()), std::move(w0),
                          spec.seed};
}

Vector random_initial_coeffs(Index n, std::uint64_t seed) {
  if (n < 1) throw ArgumentError("random_initial_coeffs: n must be positive");
  const CounterRng rng(seed, rng_stream::kInitialPoint);
  Vector w(n);
  for (Index j = 0; j < n; ++j) w(j) = rng.normal(static_cast<std::uint64_t>(j));
  return w;
}

}  // namespace dal
