#pragma once

// Dense matrix-vector kernels restricted to column subsets.
//
// The top-level functions are the OpenMP versions used by the solvers. Every
// kernel partitions work so that each output entry is accumulated by a single
// thread in a fixed order, so results do not depend on the thread count.
// The `serial` namespace holds straightforward loop implementations kept as
// the reference for tests and the benchmark.

#include "dal/linalg.hpp"

#include <atomic>
#include <cstdint>

namespace dal::kernels {

/// Columns of the design matrix read by the kernels since the last reset.
/// `forward` counts columns used in A*x products, `adjoint` counts columns
/// used in A^T*y products.
struct ColumnAccessCounters {
  std::atomic<std::uint64_t> forward{0};
  std::atomic<std::uint64_t> adjoint{0};

  void reset() {
    forward.store(0, std::memory_order_relaxed);
    adjoint.store(0, std::memory_order_relaxed);
  }
};

ColumnAccessCounters& column_counters();

/// out = A^T y over all columns.
void adjoint(const Matrix& a, const Vector& y, Vector& out);

/// out = A_J^T y, compact: out(k) = <A(:, cols[k]), y>.
void adjoint_subset(const Matrix& a, IndexSpan cols, const Vector& y, Vector& out);

/// out = sum_k A(:, cols[k]) * coef(k), with coef compact (length |J|).
void forward_subset(const Matrix& a, IndexSpan cols, const Vector& coef, Vector& out);

/// out(i) = sum_{j in J} A(i, j)^2.
void row_sq_sums_subset(const Matrix& a, IndexSpan cols, Vector& out);

/// I_m + scale * A_J A_J^T, both triangles filled.
Matrix shifted_gram_subset(const Matrix& a, IndexSpan cols, double scale);

/// Indices with nonzero entries, ascending.
IndexSet support(const Vector& w);

namespace serial {

void adjoint(const Matrix& a, const Vector& y, Vector& out);
void adjoint_subset(const Matrix& a, IndexSpan cols, const Vector& y, Vector& out);
void forward_subset(const Matrix& a, IndexSpan cols, const Vector& coef, Vector& out);
void row_sq_sums_subset(const Matrix& a, IndexSpan cols, Vector& out);
Matrix shifted_gram_subset(const Matrix& a, IndexSpan cols, double scale);

}  // namespace serial

}  // namespace dal::kernels
