// SPDX-License-Identifier: Apache-2.0
//
// beamsim - beamspace entropy analysis for sparse mm-wave MIMO channels

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace beamsim {

using cxd = std::complex<double>;

/// Dense complex matrix, row-major. Just enough linear algebra for
/// codebooks, channel matrices and Gram products; nothing clever.
class CMatrix {
 public:
  CMatrix() = default;

  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cxd(0.0, 0.0)) {}

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = cxd(1.0, 0.0);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  cxd& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cxd& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<cxd>& data() const { return data_; }
  std::vector<cxd>& data() { return data_; }

  CMatrix adjoint() const {
    CMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  CMatrix& operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  CMatrix scaled(double s) const {
    CMatrix out = *this;
    out *= s;
    return out;
  }

  double frobenius_norm() const {
    double acc = 0.0;
    for (const auto& v : data_) acc += std::norm(v);
    return std::sqrt(acc);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  bool all_finite() const {
    for (const auto& v : data_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  friend bool operator==(const CMatrix& a, const CMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cxd> data_;
};

// Hand-rolled complex MAC in the product kernel; the i-k-j order streams
// both operand rows, which is what keeps the 256x256 codebook products fast.
inline CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw std::domain_error("CMatrix multiply: dimension mismatch");
  const std::size_t n = a.rows(), k_dim = a.cols(), m = b.cols();
  CMatrix out(n, m);
  const cxd* bp = b.data().data();
  cxd* op = out.data().data();
  for (std::size_t i = 0; i < n; ++i) {
    cxd* orow = op + i * m;
    for (std::size_t k = 0; k < k_dim; ++k) {
      const cxd aik = a(i, k);
      const double ar = aik.real(), ai = aik.imag();
      if (ar == 0.0 && ai == 0.0) continue;
      const cxd* brow = bp + k * m;
      for (std::size_t j = 0; j < m; ++j) {
        const double br = brow[j].real(), bi = brow[j].imag();
        orow[j] += cxd(ar * br - ai * bi, ar * bi + ai * br);
      }
    }
  }
  return out;
}

/// a^H * b without materializing the adjoint.
inline CMatrix adjoint_times(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows()) throw std::domain_error("CMatrix adjoint_times: dimension mismatch");
  const std::size_t n = a.cols(), k_dim = a.rows(), m = b.cols();
  CMatrix out(n, m);
  cxd* op = out.data().data();
  const cxd* bp = b.data().data();
  for (std::size_t k = 0; k < k_dim; ++k) {
    const cxd* brow = bp + k * m;
    for (std::size_t i = 0; i < n; ++i) {
      const cxd aki = std::conj(a(k, i));
      const double ar = aki.real(), ai = aki.imag();
      if (ar == 0.0 && ai == 0.0) continue;
      cxd* orow = op + i * m;
      for (std::size_t j = 0; j < m; ++j) {
        const double br = brow[j].real(), bi = brow[j].imag();
        orow[j] += cxd(ar * br - ai * bi, ar * bi + ai * br);
      }
    }
  }
  return out;
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::domain_error("CMatrix max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace beamsim
