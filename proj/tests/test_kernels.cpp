#include "dal/kernels.hpp"

#include "oracle.hpp"

#include <gtest/gtest.h>
#include <omp.h>

#include <numeric>

namespace dal {
namespace {

using testing::random_vector;

struct Shape {
  Index m;
  Index n;
};

class KernelShapes : public ::testing::TestWithParam<Shape> {};

IndexSet every_third(Index n) {
  IndexSet cols;
  for (Index j = 0; j < n; j += 3) cols.push_back(j);
  return cols;
}

TEST_P(KernelShapes, ParallelMatchesSerialReference) {
  const auto [m, n] = GetParam();
  std::mt19937_64 gen(m * 131 + n);
  const Matrix a = Matrix::NullaryExpr(m, n, [&] { return std::normal_distribution<double>()(gen); });
  const Vector y = random_vector(m, gen);
  const IndexSet cols = every_third(n);
  const Vector coef = random_vector(static_cast<Index>(cols.size()), gen);

  Vector par, ref;
  kernels::adjoint(a, y, par);
  kernels::serial::adjoint(a, y, ref);
  EXPECT_LE((par - ref).norm(), 1e-12 * (1.0 + ref.norm()));

  kernels::adjoint_subset(a, cols, y, par);
  kernels::serial::adjoint_subset(a, cols, y, ref);
  EXPECT_LE((par - ref).norm(), 1e-12 * (1.0 + ref.norm()));

  kernels::forward_subset(a, cols, coef, par);
  kernels::serial::forward_subset(a, cols, coef, ref);
  EXPECT_LE((par - ref).norm(), 1e-12 * (1.0 + ref.norm()));

  kernels::row_sq_sums_subset(a, cols, par);
  kernels::serial::row_sq_sums_subset(a, cols, ref);
  EXPECT_LE((par - ref).norm(), 1e-12 * (1.0 + ref.norm()));

  if (m <= 512) {
    const Matrix h = kernels::shifted_gram_subset(a, cols, 0.7);
    const Matrix h_ref = kernels::serial::shifted_gram_subset(a, cols, 0.7);
    EXPECT_LE((h - h_ref).norm(), 1e-11 * (1.0 + h_ref.norm()));
    EXPECT_EQ(h, h.transpose());
  }
}

INSTANTIATE_TEST_SUITE_P(Shapes, KernelShapes,
                         ::testing::Values(Shape{1, 1}, Shape{3, 7}, Shape{64, 256}, Shape{300, 900},
                                           Shape{1030, 600}));

TEST(Kernels, BitwiseIdenticalAcrossThreadCounts) {
  std::mt19937_64 gen(7);
  const Index m = 777;
  const Index n = 1500;
  const Matrix a = Matrix::NullaryExpr(m, n, [&] { return std::normal_distribution<double>()(gen); });
  const Vector y = random_vector(m, gen);
  const IndexSet cols = every_third(n);
  const Vector coef = random_vector(static_cast<Index>(cols.size()), gen);

  const int saved = omp_get_max_threads();
  std::vector<Vector> adj, fwd, sq;
  std::vector<Matrix> gram;
  for (int threads : {1, 2, 3, 8}) {
    omp_set_num_threads(threads);
    Vector out;
    kernels::adjoint(a, y, out);
    adj.push_back(out);
    kernels::forward_subset(a, cols, coef, out);
    fwd.push_back(out);
    kernels::row_sq_sums_subset(a, cols, out);
    sq.push_back(out);
    gram.push_back(kernels::shifted_gram_subset(a, cols, 2.0));
  }
  omp_set_num_threads(saved);
  for (std::size_t t = 1; t < adj.size(); ++t) {
    EXPECT_EQ(adj[t], adj[0]);
    EXPECT_EQ(fwd[t], fwd[0]);
    EXPECT_EQ(sq[t], sq[0]);
    EXPECT_EQ(gram[t], gram[0]);
  }
}

TEST(Kernels, CountersTrackColumnsTouched) {
  const Matrix a = Matrix::Ones(5, 10);
  const Vector y = Vector::Ones(5);
  const IndexSet cols{1, 4, 9};
  auto& c = kernels::column_counters();
  c.reset();
  Vector out;
  kernels::adjoint(a, y, out);
  EXPECT_EQ(c.adjoint.load(), 10u);
  kernels::adjoint_subset(a, cols, y, out);
  EXPECT_EQ(c.adjoint.load(), 13u);
  EXPECT_EQ(c.forward.load(), 0u);
  kernels::forward_subset(a, cols, Vector::Ones(3), out);
  EXPECT_EQ(c.forward.load(), 3u);
  c.reset();
  kernels::serial::adjoint(a, y, out);
  EXPECT_EQ(c.adjoint.load(), 0u);
}

TEST(Kernels, EmptySubsets) {
  const Matrix a = Matrix::Ones(4, 6);
  Vector out;
  kernels::forward_subset(a, {}, Vector(), out);
  EXPECT_EQ(out, Vector::Zero(4));
  kernels::adjoint_subset(a, {}, Vector::Ones(4), out);
  EXPECT_EQ(out.size(), 0);
  EXPECT_EQ(kernels::shifted_gram_subset(a, {}, 5.0), Matrix::Identity(4, 4));
}

TEST(Kernels, Support) {
  Vector w(5);
  w << 0.0, -1e-300, 0.0, 2.0, -0.0;
  EXPECT_EQ(kernels::support(w), (IndexSet{1, 3}));
}

}  // namespace
}  // namespace dal
