#pragma once

// Seeded synthetic lasso problems.
//
// Three families: i.i.d. Gaussian designs with variance 1/(2n) (largest
// singular value near one), the same designs re-spectrumed so that the s-th
// singular value is 1/s, and wide Gaussian designs with lambda shrinking as
// c/sqrt(n). True coefficients have round(density*n) entries equal to +-1;
// b = A w0 + noise.
//
// Generation order: design (column-major, stream 0), coefficients (stream 1),
// noise (stream 2). See rng.hpp for the counter layout.

#include "dal/linalg.hpp"
#include "dal/prox.hpp"

#include <cstdint>
#include <string>
#include <variant>

namespace dal {

enum class Family { NormalConditioning, PoorConditioning, LargeScale };

std::string to_string(Family f);
/// Accepts "normal", "poor", "largescale". Throws ArgumentError otherwise.
Family family_from_string(const std::string& s);

struct FixedLambda {
  double value = 0.0;
};
struct InverseSqrtNLambda {
  double coefficient = 0.0;
};
using LambdaRule = std::variant<FixedLambda, InverseSqrtNLambda>;

/// Largest m for which the power-law family computes a full SVD.
inline constexpr Index kMaxSvdRows = 2048;

struct GenSpec {
  Family family = Family::NormalConditioning;
  Index m = 0;
  Index n = 0;
  double density = 0.04;
  double noise_variance = 1e-4;
  LambdaRule lambda_rule = FixedLambda{0.025};
  std::uint64_t seed = 0;

  static GenSpec normal(Index m, std::uint64_t seed);
  static GenSpec poor(Index m, std::uint64_t seed);
  static GenSpec large_scale(Index n, std::uint64_t seed, Index m = 1024);

  double lambda() const;
  void validate() const;
};

struct GeneratedProblem {
  ProblemInstance problem;
  Vector true_coeffs;
  std::uint64_t seed = 0;
};

/// m x n, i.i.d. N(0, 1/(2n)).
Matrix gen_gaussian_design(Index m, Index n, std::uint64_t seed);

/// Exactly round(density*n) entries (half to even) set to +-1 at uniformly
/// chosen positions.
Vector gen_sparse_coeffs(Index n, double density, std::uint64_t seed);

/// U diag(1, 1/2, ..., 1/r) V^T from the thin SVD of a, r = min(m, n).
Matrix impose_power_law_spectrum(const Matrix& a);

GeneratedProblem generate(const GenSpec& spec);

/// i.i.d. standard normal starting point for solvers.
Vector random_initial_coeffs(Index n, std::uint64_t seed);

}  // namespace dal
