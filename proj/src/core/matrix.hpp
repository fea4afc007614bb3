#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tabguard {

// Dense row-major matrix of doubles. The whole engine works on batches small
// enough (batch x 300 at most) that a flat vector with hand-written kernels
// is faster than anything fancier.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(const Matrix&) = default;
  Matrix& operator=(const Matrix&) = default;
  // Moved-from matrices report 0 x 0, so they are never mistaken for a
  // correctly sized output buffer.
  Matrix(Matrix&& o) noexcept : rows_(o.rows_), cols_(o.cols_), data_(std::move(o.data_)) {
    o.rows_ = o.cols_ = 0;
  }
  Matrix& operator=(Matrix&& o) noexcept {
    rows_ = o.rows_;
    cols_ = o.cols_;
    data_ = std::move(o.data_);
    o.rows_ = o.cols_ = 0;
    return *this;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> flat() { return {data_.data(), data_.size()}; }
  std::span<const double> flat() const { return {data_.data(), data_.size()}; }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
  bool bit_equal(const Matrix& o) const;

  void fill(double v);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// out = a (r x k) * b (k x c)
void matmul(const Matrix& a, const Matrix& b, Matrix& out);

// out = a (r x k) * b^T where b is (c x k); used for dX = dY * W^T.
void matmul_bt(const Matrix& a, const Matrix& b, Matrix& out);

// out += a^T (k x r)^T... i.e. out (k x c) += a(r x k)^T * b(r x c); used for dW += X^T dY.
void matmul_at_accum(const Matrix& a, const Matrix& b, Matrix& out);

bool all_finite(std::span<const double> values);

}  // namespace tabguard
