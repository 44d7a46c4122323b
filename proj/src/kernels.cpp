#include "dal/kernels.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cstddef>

namespace dal::kernels {
namespace {

// Below this many multiply-adds a parallel region costs more than it saves.
constexpr std::int64_t kParallelWork = 1 << 15;
constexpr Index kRowBlock = 256;
constexpr Index kGatherBlock = 256;

}  // namespace

ColumnAccessCounters& column_counters() {
  static ColumnAccessCounters counters;
  return counters;
}

void adjoint(const Matrix& a, const Vector& y, Vector& out) {
  const Index n = a.cols();
  out.resize(n);
  const bool par = static_cast<std::int64_t>(a.rows()) * n > kParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (Index j = 0; j < n; ++j) {
    out(j) = a.col(j).dot(y);
  }
  column_counters().adjoint.fetch_add(static_cast<std::uint64_t>(n), std::memory_order_relaxed);
}

void adjoint_subset(const Matrix& a, IndexSpan cols, const Vector& y, Vector& out) {
  const auto k = static_cast<Index>(cols.size());
  out.resize(k);
  const bool par = static_cast<std::int64_t>(a.rows()) * k > kParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (Index t = 0; t < k; ++t) {
    out(t) = a.col(cols[static_cast<std::size_t>(t)]).dot(y);
  }
  column_counters().adjoint.fetch_add(cols.size(), std::memory_order_relaxed);
}

void forward_subset(const Matrix& a, IndexSpan cols, const Vector& coef, Vector& out) {
  const Index m = a.rows();
  const auto k = static_cast<Index>(cols.size());
  out.setZero(m);
  const Index blocks = (m + kRowBlock - 1) / kRowBlock;
  const bool par = blocks > 1 && static_cast<std::int64_t>(m) * k > kParallelWork;
  // Row blocks: every out(i) is summed by one thread in column order.
#pragma omp parallel for schedule(static) if (par)
  for (Index blk = 0; blk < blocks; ++blk) {
    const Index r0 = blk * kRowBlock;
    const Index len = std::min(kRowBlock, m - r0);
    auto dst = out.segment(r0, len);
    for (Index t = 0; t < k; ++t) {
      const double c = coef(t);
      if (c != 0.0) dst.noalias() += c * a.col(cols[static_cast<std::size_t>(t)]).segment(r0, len);
    }
  }
  column_counters().forward.fetch_add(cols.size(), std::memory_order_relaxed);
}

void row_sq_sums_subset(const Matrix& a, IndexSpan cols, Vector& out) {
  const Index m = a.rows();
  const auto k = static_cast<Index>(cols.size());
  out.setZero(m);
  const Index blocks = (m + kRowBlock - 1) / kRowBlock;
  const bool par = blocks > 1 && static_cast<std::int64_t>(m) * k > kParallelWork;
#pragma omp parallel for schedule(static) if (par)
  for (Index blk = 0; blk < blocks; ++blk) {
    const Index r0 = blk * kRowBlock;
    const Index len = std::min(kRowBlock, m - r0);
    auto dst = out.segment(r0, len);
    for (Index t = 0; t < k; ++t) {
      dst += a.col(cols[static_cast<std::size_t>(t)]).segment(r0, len).cwiseAbs2();
    }
  }
  column_counters().forward.fetch_add(cols.size(), std::memory_order_relaxed);
}

Matrix shifted_gram_subset(const Matrix& a, IndexSpan cols, double scale) {
  const Index m = a.rows();
  const auto k = static_cast<Index>(cols.size());
  Matrix h = Matrix::Zero(m, m);
  // Gather bounded column blocks instead of materializing A_J.
  Matrix block(m, std::min(k, kGatherBlock));
  for (Index start = 0; start < k; start += kGatherBlock) {
    const Index len = std::min(kGatherBlock, k - start);
    if (block.cols() != len) block.resize(m, len);
#pragma omp parallel for schedule(static) if (static_cast<std::int64_t>(m) * len > kParallelWork)
    for (Index t = 0; t < len; ++t) {
      block.col(t) = a.col(cols[static_cast<std::size_t>(start + t)]);
    }
    h.selfadjointView<Eigen::Lower>().rankUpdate(block, scale);
  }
  h.triangularView<Eigen::StrictlyUpper>() = h.transpose();
  h.diagonal().array() += 1.0;
  column_counters().forward.fetch_add(cols.size(), std::memory_order_relaxed);
  return h;
}

IndexSet support(const Vector& w) {
  IndexSet idx;
  for (Index j = 0; j < w.size(); ++j) {
    if (w(j) != 0.0) idx.push_back(j);
  }
  return idx;
}

}  // namespace dal::kernels
