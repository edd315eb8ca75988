#pragma once

// Truncated Taylor scalars: value, gradient and (optionally) Hessian carried
// through arithmetic. Order 0 is plain real arithmetic.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace warpconn {

class Jet {
 public:
  /// A shapeless constant. It adopts the shape of whatever jet it is combined
  /// with, which lets generic code write `S x = 0.0`.
  Jet(double value = 0.0) noexcept : value_(value) {}  // NOLINT(implicit)

  /// A constant with explicit dimension and order (all derivatives zero).
  Jet(double value, std::size_t dim, int order)
      : order_(check_order(order)), dim_(dim), value_(value), d_(storage(dim, order_), 0.0) {}

  /// The coordinate function x_index, evaluated at `value`.
  static Jet variable(double value, std::size_t dim, std::size_t index, int order) {
    Jet j(value, dim, order);
    if (index >= dim) throw std::out_of_range("Jet::variable: index out of range");
    if (j.order_ >= 1) j.d_[index] = 1.0;
    return j;
  }

  /// Build a jet directly from its parts. `hess` is row-major dim×dim and is
  /// symmetrized on the way in.
  static Jet from_parts(double value, std::vector<double> grad, std::vector<double> hess = {}) {
    const std::size_t n = grad.size();
    const int order = hess.empty() ? 1 : 2;
    if (order == 2 && hess.size() != n * n) throw std::invalid_argument("Jet::from_parts: Hessian shape");
    Jet j(value, n, order);
    for (std::size_t i = 0; i < n; ++i) j.d_[i] = grad[i];
    if (order == 2) {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          j.d_[n + a * n + b] = 0.5 * (hess[a * n + b] + hess[b * n + a]);
    }
    return j;
  }

  double value() const noexcept { return value_; }
  int order() const noexcept { return order_; }
  std::size_t dim() const noexcept { return dim_; }
  bool shapeless() const noexcept { return dim_ == 0; }

  double grad(std::size_t i) const noexcept { return order_ >= 1 ? d_[i] : 0.0; }
  std::span<const double> gradient() const noexcept {
    return order_ >= 1 ? std::span<const double>(d_.data(), dim_) : std::span<const double>();
  }
  double hess(std::size_t i, std::size_t j) const noexcept {
    return order_ >= 2 ? d_[dim_ + i * dim_ + j] : 0.0;
  }

  /// Drop derivative information above `order`.
  Jet truncated(int order) const {
    if (order >= order_) return *this;
    Jet j(value_, dim_, order);
    for (std::size_t k = 0; k < j.d_.size(); ++k) j.d_[k] = d_[k];
    return j;
  }

  /// The first-order jet of ∂_k of this jet: value ∂_k f, gradient ∂_k∂_· f.
  /// Requires order 2.
  Jet partial(std::size_t k) const {
    if (order_ < 2) throw std::logic_error("Jet::partial needs a second-order jet");
    Jet j(d_[k], dim_, 1);
    for (std::size_t i = 0; i < dim_; ++i) j.d_[i] = hess(k, i);
    return j;
  }

  Jet operator-() const {
    Jet r = *this;
    r.value_ = -r.value_;
    for (double& x : r.d_) x = -x;
    return r;
  }

  Jet& operator+=(const Jet& b) { return *this = *this + b; }
  Jet& operator-=(const Jet& b) { return *this = *this - b; }
  Jet& operator*=(const Jet& b) { return *this = *this * b; }
  Jet& operator/=(const Jet& b) { return *this = *this / b; }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r = merged_shape(a, b);
    r.value_ = a.value_ + b.value_;
    for (std::size_t k = 0; k < r.d_.size(); ++k) r.d_[k] = a.at(k) + b.at(k);
    return r;
  }

  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r = merged_shape(a, b);
    r.value_ = a.value_ - b.value_;
    for (std::size_t k = 0; k < r.d_.size(); ++k) r.d_[k] = a.at(k) - b.at(k);
    return r;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r = merged_shape(a, b);
    r.value_ = a.value_ * b.value_;
    const std::size_t n = r.dim_;
    if (r.order_ >= 1) {
      for (std::size_t i = 0; i < n; ++i) r.d_[i] = a.value_ * b.at(i) + b.value_ * a.at(i);
    }
    if (r.order_ >= 2) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const std::size_t k = n + i * n + j;
          r.d_[k] = a.value_ * b.at(k) + b.value_ * a.at(k) + a.at(i) * b.at(j) + b.at(i) * a.at(j);
        }
      }
    }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

  friend Jet operator+(const Jet& a, double b) { return a + Jet(b); }
  friend Jet operator+(double a, const Jet& b) { return Jet(a) + b; }
  friend Jet operator-(const Jet& a, double b) { return a - Jet(b); }
  friend Jet operator-(double a, const Jet& b) { return Jet(a) - b; }
  friend Jet operator*(const Jet& a, double b) { return a * Jet(b); }
  friend Jet operator*(double a, const Jet& b) { return Jet(a) * b; }
  friend Jet operator/(const Jet& a, double b) { return a * Jet(1.0 / b); }
  friend Jet operator/(double a, const Jet& b) { return Jet(a) * reciprocal(b); }

  /// f∘a given f(a), f'(a), f''(a).
  friend Jet chain(const Jet& a, double f0, double f1, double f2) {
    Jet r = a;
    r.value_ = f0;
    const std::size_t n = r.dim_;
    if (r.order_ >= 2) {
      // Upper triangle, mirrored, so the Hessian stays exactly symmetric.
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
          const std::size_t k = n + i * n + j;
          r.d_[k] = f1 * a.d_[k] + f2 * (a.d_[i] * a.d_[j]);
          r.d_[n + j * n + i] = r.d_[k];
        }
    }
    if (r.order_ >= 1) {
      for (std::size_t i = 0; i < n; ++i) r.d_[i] = f1 * a.d_[i];
    }
    return r;
  }

  friend Jet reciprocal(const Jet& a) {
    const double v = a.value_;
    return chain(a, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
  }

 private:
  static int check_order(int order) {
    if (order < 0 || order > 2) throw std::invalid_argument("Jet order must be 0, 1 or 2");
    return order;
  }
  static std::size_t storage(std::size_t dim, int order) {
    return order == 0 ? 0 : order == 1 ? dim : dim + dim * dim;
  }
  // Derivative slot k, zero past the stored order.
  double at(std::size_t k) const noexcept { return k < d_.size() ? d_[k] : 0.0; }

  static Jet merged_shape(const Jet& a, const Jet& b) {
    if (a.shapeless()) return Jet(0.0, b.dim_, b.order_);
    if (b.shapeless()) return Jet(0.0, a.dim_, a.order_);
    if (a.dim_ != b.dim_) throw std::logic_error("Jet dimension mismatch");
    return Jet(0.0, a.dim_, std::min(a.order_, b.order_));
  }

  int order_ = 0;
  std::size_t dim_ = 0;
  double value_ = 0.0;
  std::vector<double> d_;  // gradient, then row-major Hessian
};

inline double value_of(double x) noexcept { return x; }
inline double value_of(const Jet& x) noexcept { return x.value(); }

inline Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return chain(a, s, c, -s);
}
inline Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return chain(a, c, -s, -c);
}
inline Jet tan(const Jet& a) {
  const double t = std::tan(a.value());
  const double d = 1.0 + t * t;
  return chain(a, t, d, 2.0 * t * d);
}
inline Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return chain(a, e, e, e);
}
inline Jet log(const Jet& a) {
  const double v = a.value();
  return chain(a, std::log(v), 1.0 / v, -1.0 / (v * v));
}
inline Jet sqrt(const Jet& a) {
  const double v = a.value();
  const double s = std::sqrt(v);
  return chain(a, s, 0.5 / s, -0.25 / (s * v));
}
inline Jet sinh(const Jet& a) {
  const double sh = std::sinh(a.value()), ch = std::cosh(a.value());
  return chain(a, sh, ch, sh);
}
inline Jet cosh(const Jet& a) {
  const double sh = std::sinh(a.value()), ch = std::cosh(a.value());
  return chain(a, ch, sh, ch);
}
inline Jet tanh(const Jet& a) {
  const double t = std::tanh(a.value());
  const double d = 1.0 - t * t;
  return chain(a, t, d, -2.0 * t * d);
}

/// a^c for a real constant c (a > 0 unless c is integral; caller checks).
inline Jet pow_real(const Jet& a, double c) {
  const double v = a.value();
  return chain(a, std::pow(v, c), c * std::pow(v, c - 1.0), c * (c - 1.0) * std::pow(v, c - 2.0));
}

/// a^k by repeated squaring; negative k goes through the reciprocal.
inline Jet pow_int(const Jet& a, long k) {
  if (k < 0) return reciprocal(pow_int(a, -k));
  Jet result = Jet(1.0);
  Jet base = a;
  bool first = true;
  while (k > 0) {
    if (k & 1) {
      result = first ? base : result * base;
      first = false;
    }
    k >>= 1;
    if (k > 0) base = base * base;
  }
  if (first) return Jet(1.0, a.dim(), a.order());
  return result;
}

}  // namespace warpconn
