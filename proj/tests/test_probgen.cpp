#include "dal/baselines.hpp"
#include "dal/dal.hpp"
#include "dal/errors.hpp"
#include "dal/kernels.hpp"
#include "dal/probgen.hpp"
#include "dal/rng.hpp"

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace dal {
namespace {

TEST(CounterRng, PureFunctionOfSeedStreamCounter) {
  const CounterRng a(42, 0);
  const CounterRng b(42, 0);
  const CounterRng other_stream(42, 1);
  const CounterRng other_seed(43, 0);
  int same_stream = 0;
  int same_seed = 0;
  for (std::uint64_t c = 0; c < 1000; ++c) {
    EXPECT_EQ(a.bits(c), b.bits(c));
    same_stream += a.bits(c) == other_stream.bits(c);
    same_seed += a.bits(c) == other_seed.bits(c);
    const double u = a.uniform(c);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(a.below(c, 7), 7u);
    EXPECT_TRUE(std::isfinite(a.normal(c)));
  }
  EXPECT_EQ(same_stream, 0);
  EXPECT_EQ(same_seed, 0);
}

TEST(CounterRng, NormalMoments) {
  const CounterRng rng(9, 0);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal(static_cast<std::uint64_t>(i));
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  EXPECT_LE(std::abs(mean), 3.0 / std::sqrt(n));
  EXPECT_NEAR(sq / n - mean * mean, 1.0, 0.02);
}

TEST(GaussianDesign, DeterministicPerSeed) {
  const Matrix a = gen_gaussian_design(128, 512, 5);
  EXPECT_EQ(a, gen_gaussian_design(128, 512, 5));
  EXPECT_NE(a, gen_gaussian_design(128, 512, 6));
}

TEST(GaussianDesign, EntryStatistics) {
  const Index m = 200;
  const Index n = 800;
  const Matrix a = gen_gaussian_design(m, n, 3);
  const double count = static_cast<double>(m * n);
  const double var = 1.0 / (2.0 * static_cast<double>(n));
  const double mean = a.mean();
  EXPECT_LE(std::abs(mean), 3.0 * std::sqrt(var / count));
  const double sample_var = (a.array() - mean).square().sum() / (count - 1.0);
  EXPECT_NEAR(sample_var, var, 0.05 * var);
}

TEST(GaussianDesign, LargestSingularValueNearOne) {
  const Matrix a = gen_gaussian_design(512, 2048, 11);
  const double sigma = std::sqrt(spectral_norm_sq_estimate(a));
  EXPECT_GE(sigma, 0.8);
  EXPECT_LE(sigma, 1.2);
}

TEST(SparseCoeffs, CountsAndValues) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Vector w = gen_sparse_coeffs(100, 0.04, seed);
    EXPECT_EQ((w.array() != 0.0).count(), 4);
    for (Index j = 0; j < w.size(); ++j) EXPECT_TRUE(w(j) == 0.0 || std::abs(w(j)) == 1.0);
  }
  const Vector full = gen_sparse_coeffs(37, 1.0, 1);
  EXPECT_EQ((full.array() != 0.0).count(), 37);
  // Round half to even: 0.5 -> 0 is not allowed by density > 0, but 2.5 -> 2 and 3.5 -> 4.
  EXPECT_EQ((gen_sparse_coeffs(10, 0.25, 1).array() != 0.0).count(), 2);
  EXPECT_EQ((gen_sparse_coeffs(10, 0.35, 1).array() != 0.0).count(), 4);
}

TEST(SparseCoeffs, SeedsChangeSupportAndSignsAreBalanced) {
  EXPECT_NE(kernels::support(gen_sparse_coeffs(1000, 0.04, 1)),
            kernels::support(gen_sparse_coeffs(1000, 0.04, 2)));
  EXPECT_EQ(gen_sparse_coeffs(1000, 0.04, 1), gen_sparse_coeffs(1000, 0.04, 1));
  const Vector w = gen_sparse_coeffs(20000, 0.5, 4);
  const double positives = static_cast<double>((w.array() > 0.0).count());
  EXPECT_NEAR(positives / 10000.0, 0.5, 0.03);
}

TEST(PowerLaw, SpectrumAndConditionNumber) {
  const Matrix a = impose_power_law_spectrum(gen_gaussian_design(64, 256, 2));
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& s = svd.singularValues();
  ASSERT_EQ(s.size(), 64);
  for (Index k = 0; k < s.size(); ++k) {
    EXPECT_NEAR(s(k), 1.0 / static_cast<double>(k + 1), 1e-8 / static_cast<double>(k + 1));
  }
  EXPECT_NEAR(s(0) / s(63), 64.0, 64.0 * 1e-6);

  const Matrix tall = impose_power_law_spectrum(gen_gaussian_design(30, 12, 2));
  Eigen::JacobiSVD<Matrix> svd_tall(tall);
  EXPECT_NEAR(svd_tall.singularValues()(0) / svd_tall.singularValues()(11), 12.0, 12.0 * 1e-6);
}

TEST(PowerLaw, ScalarMatrix) {
  Matrix a(1, 1);
  a << -0.37;
  EXPECT_NEAR(std::abs(impose_power_law_spectrum(a)(0, 0)), 1.0, 1e-15);
  a(0, 0) = std::nan("");
  EXPECT_THROW(impose_power_law_spectrum(a), NumericError);
}

TEST(Generate, FamilyDefaults) {
  const GeneratedProblem normal = generate(GenSpec::normal(128, 7));
  EXPECT_EQ(normal.problem.rows(), 128);
  EXPECT_EQ(normal.problem.cols(), 512);
  EXPECT_EQ(normal.problem.lambda(), 0.025);
  EXPECT_EQ(normal.seed, 7u);
  EXPECT_EQ((normal.true_coeffs.array() != 0.0).count(), 20);  // round(0.04 * 512) = 20.48 -> 20

  const GenSpec ls = GenSpec::large_scale(4096, 1);
  EXPECT_EQ(ls.m, 1024);
  EXPECT_DOUBLE_EQ(ls.lambda(), 0.025);

  const GeneratedProblem poor = generate(GenSpec::poor(32, 3));
  EXPECT_EQ(poor.problem.cols(), 128);
  EXPECT_EQ(poor.problem.lambda(), 0.0003);
  const Vector resid = poor.problem.observations() - poor.problem.design() * poor.true_coeffs;
  EXPECT_LE(resid.norm(), 1e-14 * poor.problem.observations().norm());

  const Vector noise = normal.problem.observations() - normal.problem.design() * normal.true_coeffs;
  EXPECT_NEAR(noise.squaredNorm() / 128.0, 1e-4, 0.4e-4);
}

TEST(Generate, Deterministic) {
  for (const GenSpec& spec : {GenSpec::normal(32, 5), GenSpec::poor(32, 5), GenSpec::large_scale(256, 5, 16)}) {
    const GeneratedProblem a = generate(spec);
    const GeneratedProblem b = generate(spec);
    EXPECT_EQ(a.problem.design(), b.problem.design());
    EXPECT_EQ(a.problem.observations(), b.problem.observations());
    EXPECT_EQ(a.problem.lambda(), b.problem.lambda());
    EXPECT_EQ(a.true_coeffs, b.true_coeffs);
  }
}

TEST(Generate, SpecValidation) {
  GenSpec s = GenSpec::normal(8, 1);
  s.density = 0.0;
  EXPECT_THROW(generate(s), ArgumentError);
  s = GenSpec::normal(8, 1);
  s.noise_variance = -1.0;
  EXPECT_THROW(generate(s), ArgumentError);
  EXPECT_THROW(generate(GenSpec::poor(kMaxSvdRows + 1, 1)), ArgumentError);
  EXPECT_THROW(generate(GenSpec::normal(0, 1)), ArgumentError);
  EXPECT_EQ(family_from_string("poor"), Family::PoorConditioning);
  EXPECT_EQ(to_string(Family::LargeScale), "largescale");
  EXPECT_THROW(family_from_string("gaussian"), ArgumentError);
}

TEST(Generate, SupportRecovery) {
  // At lambda = 0.025 the lasso over-selects, so only recall of the planted
  // support is a stable property.
  double recall = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GeneratedProblem g = generate(GenSpec::normal(256, seed));
    const SolveReport r = solve(g.problem, SolverConfig{});
    ASSERT_TRUE(r.converged);
    const IndexSet est = kernels::support(r.w_final);
    const IndexSet truth = kernels::support(g.true_coeffs);
    IndexSet both;
    std::set_intersection(est.begin(), est.end(), truth.begin(), truth.end(), std::back_inserter(both));
    recall += static_cast<double>(both.size()) / static_cast<double>(truth.size());
  }
  EXPECT_GE(recall / 10.0, 0.95);
}

TEST(InitialCoeffs, DeterministicStandardNormal) {
  const Vector w = random_initial_coeffs(5000, 3);
  EXPECT_EQ(w, random_initial_coeffs(5000, 3));
  EXPECT_LE(std::abs(w.mean()), 3.0 / std::sqrt(5000.0));
  EXPECT_NE(w, random_initial_coeffs(5000, 4));
}

}  // namespace
}  // namespace dal
