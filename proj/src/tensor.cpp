#include "dagsched/tensor.hpp"

#include <cmath>

#include "dagsched/kernels.hpp"

namespace dagsched {

bool Tensor2::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

Tensor2 matmul(const Tensor2& a, const Tensor2& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dims disagree");
  Tensor2 out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    double* out_row = out.row(i);
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a.at(i, k);
      if (aik != 0.0) kernels::axpy(aik, b.row(k), out_row, std::size_t(b.cols()));
    }
  }
  return out;
}

void add_matmul_bt(const Tensor2& a, const Tensor2& b, Tensor2& out) {
  if (a.cols() != b.cols()) throw std::invalid_argument("add_matmul_bt: inner dims disagree");
  if (out.rows() != a.rows() || out.cols() != b.rows())
    throw std::invalid_argument("add_matmul_bt: output shape mismatch");
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.rows(); ++j)
      out.at(i, j) += kernels::dot(a.row(i), b.row(j), std::size_t(a.cols()));
}

void add_matmul_at(const Tensor2& a, const Tensor2& b, Tensor2& out) {
  if (a.rows() != b.rows()) throw std::invalid_argument("add_matmul_at: row counts disagree");
  if (out.rows() != a.cols() || out.cols() != b.cols())
    throw std::invalid_argument("add_matmul_at: output shape mismatch");
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a.at(i, k);
      if (aik != 0.0) kernels::axpy(aik, b.row(i), out.row(k), std::size_t(b.cols()));
    }
}

void add_colsum(const Tensor2& a, Tensor2& out) {
  if (out.rows() != 1 || out.cols() != a.cols())
    throw std::invalid_argument("add_colsum: output shape mismatch");
  for (int i = 0; i < a.rows(); ++i)
    kernels::vadd(out.row(0), a.row(i), out.row(0), std::size_t(a.cols()));
}

Tensor2 colsum(const Tensor2& a) {
  Tensor2 out(1, a.cols());
  add_colsum(a, out);
  return out;
}

}  // namespace dagsched
