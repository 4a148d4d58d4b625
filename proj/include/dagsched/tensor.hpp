#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dagsched {

// Row-major dense matrix of 64-bit floats. A 1xN row vector doubles as a
// plain vector where needed.
class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, fill) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative tensor shape");
  }
  static Tensor2 from(int rows, int cols, std::vector<double> data) {
    if (data.size() != std::size_t(rows) * cols)
      throw std::invalid_argument("tensor data length does not match shape");
    Tensor2 t;
    t.rows_ = rows;
    t.cols_ = cols;
    t.data_ = std::move(data);
    return t;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool same_shape(const Tensor2& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  double& at(int r, int c) { return data_[std::size_t(r) * cols_ + c]; }
  double at(int r, int c) const { return data_[std::size_t(r) * cols_ + c]; }
  double* row(int r) { return data_.data() + std::size_t(r) * cols_; }
  const double* row(int r) const { return data_.data() + std::size_t(r) * cols_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  const std::vector<double>& vec() const { return data_; }

  void zero() { std::fill(data_.begin(), data_.end(), 0.0); }
  bool all_finite() const;

  friend bool operator==(const Tensor2&, const Tensor2&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// out = a * b
Tensor2 matmul(const Tensor2& a, const Tensor2& b);
// out += a * b^T
void add_matmul_bt(const Tensor2& a, const Tensor2& b, Tensor2& out);
// out += a^T * b
void add_matmul_at(const Tensor2& a, const Tensor2& b, Tensor2& out);
// out (1 x cols) += column sums of a
void add_colsum(const Tensor2& a, Tensor2& out);
// 1 x cols vector of column sums
Tensor2 colsum(const Tensor2& a);

}  // namespace dagsched
