#include "core/matrix.hpp"

#include <cmath>
#include <cstring>

#include "core/error.hpp"

namespace tabguard {

bool Matrix::bit_equal(const Matrix& o) const {
  if (!same_shape(o)) return false;
  return std::memcmp(data_.data(), o.data_.data(), data_.size() * sizeof(double)) == 0;
}

void Matrix::fill(double v) {
  for (double& x : data_) x = v;
}

void matmul(const Matrix& a, const Matrix& b, Matrix& out) {
  if (a.cols() != b.rows()) raise_internal("matmul shape mismatch");
  const std::size_t r = a.rows(), k = a.cols(), c = b.cols();
  if (out.rows() != r || out.cols() != c) out = Matrix(r, c);
  out.fill(0.0);
  const double* ap = a.data();
  const double* bp = b.data();
  double* op = out.data();
  // ikj order: the inner loop is a contiguous axpy over the output row,
  // which vectorizes cleanly.
  for (std::size_t i = 0; i < r; ++i) {
    const double* arow = ap + i * k;
    double* orow = op + i * c;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double av = arow[kk];
      const double* brow = bp + kk * c;
      for (std::size_t j = 0; j < c; ++j) orow[j] += av * brow[j];
    }
  }
}

void matmul_bt(const Matrix& a, const Matrix& b, Matrix& out) {
  if (a.cols() != b.cols()) raise_internal("matmul_bt shape mismatch");
  const std::size_t r = a.rows(), k = a.cols(), c = b.rows();
  if (out.rows() != r || out.cols() != c) out = Matrix(r, c);
  const double* ap = a.data();
  const double* bp = b.data();
  double* op = out.data();
  // Rows of both operands are contiguous, so each output cell is a dot
  // product over contiguous spans.
  for (std::size_t i = 0; i < r; ++i) {
    const double* arow = ap + i * k;
    double* orow = op + i * c;
    for (std::size_t j = 0; j < c; ++j) {
      const double* brow = bp + j * k;
      double acc = 0.0;
      for (std::size_t kk = 0; kk < k; ++kk) acc += arow[kk] * brow[kk];
      orow[j] = acc;
    }
  }
}

void matmul_at_accum(const Matrix& a, const Matrix& b, Matrix& out) {
  if (a.rows() != b.rows()) raise_internal("matmul_at_accum shape mismatch");
  const std::size_t r = a.rows(), k = a.cols(), c = b.cols();
  if (out.rows() != k || out.cols() != c) raise_internal("matmul_at_accum output shape mismatch");
  const double* ap = a.data();
  const double* bp = b.data();
  double* op = out.data();
  for (std::size_t i = 0; i < r; ++i) {
    const double* arow = ap + i * k;
    const double* brow = bp + i * c;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double av = arow[kk];
      double* orow = op + kk * c;
      for (std::size_t j = 0; j < c; ++j) orow[j] += av * brow[j];
    }
  }
}

bool all_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace tabguard
