#include "dal/kernels.hpp"

#include <cstddef>

namespace dal::kernels::serial {

void adjoint(const Matrix& a, const Vector& y, Vector& out) {
  const Index m = a.rows();
  const Index n = a.cols();
  out.resize(n);
  for (Index j = 0; j < n; ++j) {
    double s = 0.0;
    for (Index i = 0; i < m; ++i) s += a(i, j) * y(i);
    out(j) = s;
  }
}

void adjoint_subset(const Matrix& a, IndexSpan cols, const Vector& y, Vector& out) {
  const Index m = a.rows();
  out.resize(static_cast<Index>(cols.size()));
  for (std::size_t t = 0; t < cols.size(); ++t) {
    double s = 0.0;
    for (Index i = 0; i < m; ++i) s += a(i, cols[t]) * y(i);
    out(static_cast<Index>(t)) = s;
  }
}

void forward_subset(const Matrix& a, IndexSpan cols, const Vector& coef, Vector& out) {
  const Index m = a.rows();
  out.setZero(m);
  for (std::size_t t = 0; t < cols.size(); ++t) {
    const double c = coef(static_cast<Index>(t));
    for (Index i = 0; i < m; ++i) out(i) += a(i, cols[t]) * c;
  }
}

void row_sq_sums_subset(const Matrix& a, IndexSpan cols, Vector& out) {
  const Index m = a.rows();
  out.setZero(m);
  for (const Index j : cols) {
    for (Index i = 0; i < m; ++i) out(i) += a(i, j) * a(i, j);
  }
}

Matrix shifted_gram_subset(const Matrix& a, IndexSpan cols, double scale) {
  const Index m = a.rows();
  Matrix h = Matrix::Identity(m, m);
  for (Index c = 0; c < m; ++c) {
    for (Index r = c; r < m; ++r) {
      double s = 0.0;
      for (const Index j : cols) s += a(r, j) * a(c, j);
      h(r, c) += scale * s;
      if (r != c) h(c, r) = h(r, c);
    }
  }
  return h;
}

}  // namespace dal::kernels::serial
