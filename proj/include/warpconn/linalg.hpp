#pragma once

// Small dense containers over a generic scalar (double or Jet). The charts
// handled here have a handful of dimensions, so everything is a flat vector.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "warpconn/error.hpp"
#include "warpconn/jet.hpp"

namespace warpconn {

template <class S>
using Vec = std::vector<S>;

/// Square n×n matrix, row-major.
template <class S>
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, const S& fill = S(0.0)) : n_(n), a_(n * n, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1.0);
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  S& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  Matrix transposed() const {
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix c(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t j = 0; j < a.n_; ++j) {
        S acc = 0.0;
        for (std::size_t k = 0; k < a.n_; ++k) acc = acc + a(i, k) * b(k, j);
        c(i, j) = acc;
      }
    return c;
  }

 private:
  std::size_t n_ = 0;
  std::vector<S> a_;
};

/// n×n×n array indexed (k, i, j); used for connection coefficients Γᵏᵢⱼ with
/// i the differentiation direction and j the argument.
template <class S>
class Array3 {
 public:
  Array3() = default;
  explicit Array3(std::size_t n, const S& fill = S(0.0)) : n_(n), a_(n * n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  S& operator()(std::size_t k, std::size_t i, std::size_t j) { return a_[(k * n_ + i) * n_ + j]; }
  const S& operator()(std::size_t k, std::size_t i, std::size_t j) const { return a_[(k * n_ + i) * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<S> a_;
};

template <class S>
Vec<S> mat_vec(const Matrix<S>& m, const Vec<S>& v) {
  Vec<S> r(m.size(), S(0.0));
  for (std::size_t i = 0; i < m.size(); ++i) {
    S acc = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) acc = acc + m(i, j) * v[j];
    r[i] = acc;
  }
  return r;
}

/// Σ a_i M_ij b_j
template <class S>
S bilinear(const Matrix<S>& m, const Vec<S>& a, const Vec<S>& b) {
  S acc = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) acc = acc + a[i] * m(i, j) * b[j];
  return acc;
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline std::vector<double> sub(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  return max_abs(sub(a, b));
}

/// Inverse of a symmetric positive-definite matrix through its Cholesky
/// factor. Positivity is judged on values; jets ride along, so derivatives of
/// the inverse come out as −g⁻¹(∂g)g⁻¹ without being written down.
template <class S>
Matrix<S> spd_inverse(const Matrix<S>& a) {
  using std::sqrt;
  const std::size_t n = a.size();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(value_of(a(i, i))));
  Matrix<S> l(n);
  for (std::size_t j = 0; j < n; ++j) {
    S d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d = d - l(j, k) * l(j, k);
    const double dv = value_of(d);
    if (!(dv > 0.0)) {
      throw GeometryError("metric is not positive-definite (pivot " + std::to_string(j) + " = " +
                          std::to_string(dv) + ")");
    }
    if (dv <= 1e-14 * scale) throw GeometryError("metric is numerically singular");
    l(j, j) = sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      S s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s = s - l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  // Invert L (lower triangular), then A⁻¹ = L⁻ᵀ L⁻¹.
  Matrix<S> li(n);
  for (std::size_t i = 0; i < n; ++i) {
    li(i, i) = S(1.0) / l(i, i);
    for (std::size_t j = 0; j < i; ++j) {
      S s = 0.0;
      for (std::size_t k = j; k < i; ++k) s = s + l(i, k) * li(k, j);
      li(i, j) = -s / l(i, i);
    }
  }
  Matrix<S> inv(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      S s = 0.0;
      for (std::size_t k = i; k < n; ++k) s = s + li(k, i) * li(k, j);
      inv(i, j) = s;
      inv(j, i) = s;
    }
  return inv;
}

}  // namespace warpconn
