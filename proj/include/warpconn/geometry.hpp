#pragma once

// Pointwise Riemannian machinery on one coordinate chart.
//
// Index conventions: vectors are contravariant component lists, a (1,1)
// tensor φ is stored as φ(k, i) = φᵏᵢ (output index first), and connection
// coefficients Γ(k, i, j) = Γᵏᵢⱼ give (∇_X Y)ᵏ = Xⁱ∂ᵢYᵏ + Γᵏᵢⱼ Xⁱ Yʲ.

#include <cstddef>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "warpconn/error.hpp"
#include "warpconn/expr.hpp"
#include "warpconn/jet.hpp"
#include "warpconn/linalg.hpp"

namespace warpconn {

inline std::string format_point(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += detail::format_number(p[i]);
  }
  return s + ")";
}

namespace detail {

inline void require_vars(const VarList& expected, const ScalarExpr& e, const char* what) {
  if (e.empty()) throw GeometryError(std::string(what) + ": empty expression");
  if (!same_vars(expected, e.vars()))
    throw GeometryError(std::string(what) + ": expression '" + e.str() + "' is over different coordinates");
}

}  // namespace detail

/// X = Xⁱ∂ᵢ with expression components.
class VectorField {
 public:
  VectorField() = default;
  VectorField(VarList vars, std::vector<ScalarExpr> components)
      : vars_(std::move(vars)), c_(std::move(components)) {
    if (c_.size() != vars_->size())
      throw GeometryError("vector field has " + std::to_string(c_.size()) + " components on a " +
                          std::to_string(vars_->size()) + "-dimensional chart");
    for (const auto& e : c_) detail::require_vars(vars_, e, "vector field");
  }

  static VectorField from_strings(const VarList& vars, const std::vector<std::string>& text) {
    std::vector<ScalarExpr> c;
    for (const auto& t : text) c.push_back(parse(t, vars));
    return VectorField(vars, std::move(c));
  }
  static VectorField zero(const VarList& vars) {
    return VectorField(vars, std::vector<ScalarExpr>(vars->size(), ScalarExpr::constant(vars, 0.0)));
  }
  /// ∂_index
  static VectorField coordinate(const VarList& vars, std::size_t index) {
    std::vector<ScalarExpr> c;
    for (std::size_t i = 0; i < vars->size(); ++i) c.push_back(ScalarExpr::constant(vars, i == index ? 1.0 : 0.0));
    return VectorField(vars, std::move(c));
  }

  std::size_t dim() const noexcept { return c_.size(); }
  const VarList& vars() const noexcept { return vars_; }
  const ScalarExpr& operator[](std::size_t i) const { return c_[i]; }
  const std::vector<ScalarExpr>& components() const noexcept { return c_; }

  /// f·X
  friend VectorField operator*(const ScalarExpr& f, const VectorField& x) {
    std::vector<ScalarExpr> c;
    for (const auto& e : x.c_) c.push_back(f * e);
    return VectorField(x.vars_, std::move(c));
  }
  friend VectorField operator+(const VectorField& a, const VectorField& b) {
    std::vector<ScalarExpr> c;
    for (std::size_t i = 0; i < a.dim(); ++i) c.push_back(a.c_[i] + b.c_[i]);
    return VectorField(a.vars_, std::move(c));
  }

 private:
  VarList vars_;
  std::vector<ScalarExpr> c_;
};

/// A (1,1) tensor field φ; entry (k, i) is φᵏᵢ, so (φX)ᵏ = φᵏᵢXⁱ.
class Tensor11Field {
 public:
  Tensor11Field() = default;
  Tensor11Field(VarList vars, std::vector<ScalarExpr> row_major) : vars_(std::move(vars)), e_(std::move(row_major)) {
    const std::size_t n = vars_->size();
    if (e_.size() != n * n) throw GeometryError("(1,1) tensor field must have dim×dim entries");
    for (const auto& e : e_) detail::require_vars(vars_, e, "tensor field");
  }

  static Tensor11Field from_strings(const VarList& vars, const std::vector<std::vector<std::string>>& rows) {
    std::vector<ScalarExpr> e;
    if (rows.size() != vars->size()) throw GeometryError("(1,1) tensor field must have dim rows");
    for (const auto& row : rows) {
      if (row.size() != vars->size()) throw GeometryError("(1,1) tensor field must have dim columns");
      for (const auto& t : row) e.push_back(parse(t, vars));
    }
    return Tensor11Field(vars, std::move(e));
  }
  static Tensor11Field diagonal(const VarList& vars, double d) {
    const std::size_t n = vars->size();
    std::vector<ScalarExpr> e;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) e.push_back(ScalarExpr::constant(vars, k == i ? d : 0.0));
    return Tensor11Field(vars, std::move(e));
  }
  static Tensor11Field identity(const VarList& vars) { return diagonal(vars, 1.0); }
  static Tensor11Field zero(const VarList& vars) { return diagonal(vars, 0.0); }

  std::size_t dim() const noexcept { return vars_ ? vars_->size() : 0; }
  const VarList& vars() const noexcept { return vars_; }
  const ScalarExpr& operator()(std::size_t k, std::size_t i) const { return e_[k * dim() + i]; }
  const std::vector<ScalarExpr>& entries() const noexcept { return e_; }

 private:
  VarList vars_;
  std::vector<ScalarExpr> e_;
};

/// A chart with a symmetric matrix of metric components. Only the upper
/// triangle is stored; the lower one mirrors it.
class ChartMetric {
 public:
  ChartMetric() = default;

  /// `rows` is the full dim×dim matrix. Entries below the diagonal must print
  /// identically to their mirror (or be empty expressions).
  ChartMetric(VarList vars, const std::vector<std::vector<ScalarExpr>>& rows) : vars_(std::move(vars)) {
    const std::size_t n = vars_->size();
    if (rows.size() != n) throw GeometryError("metric must have one row per coordinate");
    for (const auto& row : rows)
      if (row.size() != n) throw GeometryError("metric must be square");
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        detail::require_vars(vars_, rows[i][j], "metric");
        upper_.push_back(rows[i][j]);
        if (j > i && !rows[j][i].empty() && rows[j][i].str() != rows[i][j].str())
          throw GeometryError("metric is not symmetric at (" + std::to_string(j) + ", " + std::to_string(i) + ")");
      }
    }
  }

  static ChartMetric from_strings(const VarList& vars, const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::vector<ScalarExpr>> e;
    for (const auto& row : rows) {
      std::vector<ScalarExpr> r;
      for (const auto& t : row) r.push_back(parse(t, vars));
      e.push_back(std::move(r));
    }
    return ChartMetric(vars, e);
  }

  static ChartMetric diagonal(const VarList& vars, const std::vector<ScalarExpr>& diag) {
    const std::size_t n = vars->size();
    if (diag.size() != n) throw GeometryError("diagonal metric needs one entry per coordinate");
    std::vector<std::vector<ScalarExpr>> rows(n, std::vector<ScalarExpr>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) rows[i][j] = i == j ? diag[i] : ScalarExpr::constant(vars, 0.0);
    return ChartMetric(vars, rows);
  }

  std::size_t dim() const noexcept { return vars_ ? vars_->size() : 0; }
  const VarList& vars() const noexcept { return vars_; }
  const std::vector<std::string>& names() const { return *vars_; }

  const ScalarExpr& operator()(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    const std::size_t n = dim();
    return upper_[i * n - i * (i - 1) / 2 + (j - i)];
  }

 private:
  VarList vars_;
  std::vector<ScalarExpr> upper_;
};

// ---------------------------------------------------------------------------
// Generic scalar plumbing. Construction code is written once over S and run
// with S = double (values) or S = Jet (values plus first derivatives).

template <class S>
struct ScalarKind;

template <>
struct ScalarKind<double> {
  static constexpr int order = 0;
  static double value(const Jet& j) { return j.value(); }
  static double partial(const Jet& j, std::size_t k) { return j.grad(k); }
};

template <>
struct ScalarKind<Jet> {
  static constexpr int order = 1;
  static Jet value(const Jet& j) { return j.truncated(1); }
  static Jet partial(const Jet& j, std::size_t k) { return j.partial(k); }
};

template <class S>
S eval_as(const ScalarExpr& e, const Point& p) {
  return ScalarKind<S>::value(e.eval_jet(p, ScalarKind<S>::order));
}

template <class S>
Vec<S> eval_as(const VectorField& x, const Point& p) {
  Vec<S> v;
  v.reserve(x.dim());
  for (const auto& c : x.components()) v.push_back(eval_as<S>(c, p));
  return v;
}

template <class S>
Matrix<S> eval_as(const Tensor11Field& t, const Point& p) {
  Matrix<S> m(t.dim());
  for (std::size_t k = 0; k < t.dim(); ++k)
    for (std::size_t i = 0; i < t.dim(); ++i) m(k, i) = eval_as<S>(t(k, i), p);
  return m;
}

/// Metric, inverse metric and first partials at one point.
template <class S>
struct MetricSample {
  Matrix<S> g, ginv;
  std::vector<Matrix<S>> dg;  // dg[k](i, j) = ∂_k g_ij
};

template <class S>
MetricSample<S> sample_metric(const ChartMetric& m, const Point& p) {
  const std::size_t n = m.dim();
  if (p.size() != n) throw GeometryError("point dimension does not match the chart");
  MetricSample<S> s{Matrix<S>(n), Matrix<S>(n), std::vector<Matrix<S>>(n, Matrix<S>(n))};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const Jet e = m(i, j).eval_jet(p, ScalarKind<S>::order + 1);
      s.g(i, j) = s.g(j, i) = ScalarKind<S>::value(e);
      for (std::size_t k = 0; k < n; ++k) s.dg[k](i, j) = s.dg[k](j, i) = ScalarKind<S>::partial(e, k);
    }
  }
  try {
    s.ginv = spd_inverse(s.g);
  } catch (const GeometryError& err) {
    throw GeometryError(std::string(err.what()) + " at " + format_point(p));
  }
  return s;
}

/// Γᵏᵢⱼ = ½ gᵏˡ(∂ᵢgⱼₗ + ∂ⱼgᵢₗ − ∂ₗgᵢⱼ)
template <class S>
Array3<S> christoffel(const MetricSample<S>& s) {
  const std::size_t n = s.g.size();
  std::vector<S> lowered(n * n * n, S(0.0));  // [l][i][j]
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        lowered[(l * n + i) * n + j] = lowered[(l * n + j) * n + i] =
            0.5 * (s.dg[i](j, l) + s.dg[j](i, l) - s.dg[l](i, j));
  Array3<S> gamma(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        S acc = 0.0;
        for (std::size_t l = 0; l < n; ++l) acc = acc + s.ginv(k, l) * lowered[(l * n + i) * n + j];
        gamma(k, i, j) = acc;
        gamma(k, j, i) = acc;
      }
  return gamma;
}

/// Φ = g(φ·, ·) split into symmetric and skew parts, plus the (1,1) tensors
/// φ₁, φ₂ they correspond to.
template <class S>
struct SymSkewSplit {
  Matrix<S> Phi1, Phi2;  // (0,2), indices (i, j)
  Matrix<S> phi1, phi2;  // (1,1), indices (k, i)
};

template <class S>
SymSkewSplit<S> sym_skew_split(const Matrix<S>& g, const Matrix<S>& ginv, const Matrix<S>& phi) {
  const std::size_t n = g.size();
  Matrix<S> Phi(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      S acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc = acc + g(k, j) * phi(k, i);
      Phi(i, j) = acc;
    }
  SymSkewSplit<S> out{Matrix<S>(n), Matrix<S>(n), Matrix<S>(n), Matrix<S>(n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      out.Phi1(i, j) = 0.5 * (Phi(i, j) + Phi(j, i));
      out.Phi2(i, j) = 0.5 * (Phi(i, j) - Phi(j, i));
    }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      S a = 0.0, b = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        a = a + ginv(k, j) * out.Phi1(i, j);
        b = b + ginv(k, j) * out.Phi2(i, j);
      }
      out.phi1(k, i) = a;
      out.phi2(k, i) = b;
    }
  return out;
}

/// A connection, represented by its coefficient field. Coefficients can be
/// requested as values or as first-order jets (values plus ∂ₘΓᵏᵢⱼ).
class Connection {
 public:
  using ValueFn = std::function<Array3<double>(const Point&)>;
  using JetFn = std::function<Array3<Jet>(const Point&)>;

  Connection(std::size_t dim, ValueFn values, JetFn jets)
      : dim_(dim), values_(std::move(values)), jets_(std::move(jets)) {}

  /// `build` is callable as build(point, std::type_identity<S>{}) for
  /// S = double and S = Jet, returning Array3<S>.
  template <class Builder>
  static Connection generic(std::size_t dim, Builder build) {
    return Connection(
        dim, [build](const Point& p) { return build(p, std::type_identity<double>{}); },
        [build](const Point& p) { return build(p, std::type_identity<Jet>{}); });
  }

  std::size_t dim() const noexcept { return dim_; }
  Array3<double> coefficients(const Point& p) const { return values_(p); }
  Array3<Jet> coefficient_jets(const Point& p) const { return jets_(p); }

 private:
  std::size_t dim_;
  ValueFn values_;
  JetFn jets_;
};

inline Connection levi_civita(const ChartMetric& m) {
  return Connection::generic(m.dim(), [m](const Point& p, auto tag) {
    using S = typename decltype(tag)::type;
    return christoffel(sample_metric<S>(m, p));
  });
}

// ---------------------------------------------------------------------------
// Kernels over evaluated data. Fields are first-order jets so that their
// partial derivatives are at hand.

using FieldJets = std::vector<Jet>;

inline FieldJets eval_field(const VectorField& x, const Point& p, int order = 1) {
  FieldJets v;
  v.reserve(x.dim());
  for (const auto& c : x.components()) v.push_back(c.eval_jet(p, order));
  return v;
}

inline std::vector<double> values(const FieldJets& x) {
  std::vector<double> v;
  v.reserve(x.size());
  for (const auto& j : x) v.push_back(j.value());
  return v;
}

/// Constant jets for a fixed vector (e.g. a coordinate basis field).
inline FieldJets constant_field(const std::vector<double>& v, int order = 1) {
  FieldJets f;
  for (double x : v) f.emplace_back(x, v.size(), order);
  return f;
}

/// X·f for a scalar jet f.
inline double directional(const std::vector<double>& x, const Jet& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * f.grad(i);
  return acc;
}

/// (X·Y)ᵏ = Xⁱ∂ᵢYᵏ
inline std::vector<double> directional(const FieldJets& x, const FieldJets& y) {
  const std::vector<double> xv = values(x);
  std::vector<double> r(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) r[k] = directional(xv, y[k]);
  return r;
}

inline std::vector<double> lie_bracket(const FieldJets& x, const FieldJets& y) {
  return sub(directional(x, y), directional(y, x));
}

inline std::vector<double> contract(const Array3<double>& gamma, const std::vector<double>& x,
                                    const std::vector<double>& y) {
  const std::size_t n = gamma.size();
  std::vector<double> r(n, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r[k] += gamma(k, i, j) * x[i] * y[j];
  return r;
}

/// (∇_X Y)ᵏ = Xⁱ∂ᵢYᵏ + Γᵏᵢⱼ Xⁱ Yʲ
inline std::vector<double> cov_deriv(const Array3<double>& gamma, const FieldJets& x, const FieldJets& y) {
  std::vector<double> r = directional(x, y);
  const std::vector<double> c = contract(gamma, values(x), values(y));
  for (std::size_t k = 0; k < r.size(); ++k) r[k] += c[k];
  return r;
}

inline std::vector<double> torsion(const Array3<double>& gamma, const FieldJets& x, const FieldJets& y) {
  return sub(sub(cov_deriv(gamma, x, y), cov_deriv(gamma, y, x)), lie_bracket(x, y));
}

/// g_ij as first-order jets.
inline Matrix<Jet> metric_jets(const MetricSample<double>& s) {
  const std::size_t n = s.g.size();
  Matrix<Jet> m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> grad(n);
      for (std::size_t k = 0; k < n; ++k) grad[k] = s.dg[k](i, j);
      m(i, j) = Jet::from_parts(s.g(i, j), std::move(grad));
    }
  return m;
}

/// The scalar field g(Y, Z) as a first-order jet.
inline Jet metric_pairing(const Matrix<Jet>& gj, const FieldJets& y, const FieldJets& z) {
  Jet acc = 0.0;
  for (std::size_t i = 0; i < gj.size(); ++i)
    for (std::size_t j = 0; j < gj.size(); ++j) acc = acc + gj(i, j) * y[i].truncated(1) * z[j].truncated(1);
  return acc;
}

/// (∇_X g)(Y, Z) = X·g(Y,Z) − g(∇_X Y, Z) − g(Y, ∇_X Z)
inline double nonmetricity(const Array3<double>& gamma, const MetricSample<double>& s, const Matrix<Jet>& gj,
                           const FieldJets& x, const FieldJets& y, const FieldJets& z) {
  const Jet gyz = metric_pairing(gj, y, z);
  const std::vector<double> xv = values(x);
  return directional(xv, gyz) - bilinear(s.g, cov_deriv(gamma, x, y), values(z)) -
         bilinear(s.g, values(y), cov_deriv(gamma, x, z));
}

inline double nonmetricity(const Array3<double>& gamma, const MetricSample<double>& s, const FieldJets& x,
                           const FieldJets& y, const FieldJets& z) {
  return nonmetricity(gamma, s, metric_jets(s), x, y, z);
}

/// Six-term right-hand side of 2g(∇̊_X Y, Z).
inline double koszul_rhs(const Matrix<Jet>& gj, const FieldJets& x, const FieldJets& y, const FieldJets& z) {
  const std::vector<double> xv = values(x), yv = values(y), zv = values(z);
  Matrix<double> g(gj.size());
  for (std::size_t i = 0; i < gj.size(); ++i)
    for (std::size_t j = 0; j < gj.size(); ++j) g(i, j) = gj(i, j).value();
  return directional(xv, metric_pairing(gj, y, z)) + directional(yv, metric_pairing(gj, x, z)) -
         directional(zv, metric_pairing(gj, x, y)) - bilinear(g, xv, lie_bracket(y, z)) -
         bilinear(g, yv, lie_bracket(x, z)) + bilinear(g, zv, lie_bracket(x, y));
}

/// Rˡₖᵢⱼ = ∂ᵢΓˡⱼₖ − ∂ⱼΓˡᵢₖ + ΓˡᵢₘΓᵐⱼₖ − ΓˡⱼₘΓᵐᵢₖ, stored flat as [l][k][i][j].
class Riemann {
 public:
  explicit Riemann(const Array3<Jet>& g) : n_(g.size()), r_(n_ * n_ * n_ * n_, 0.0) {
    for (std::size_t l = 0; l < n_; ++l)
      for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t i = 0; i < n_; ++i)
          for (std::size_t j = 0; j < n_; ++j) {
            double v = g(l, j, k).grad(i) - g(l, i, k).grad(j);
            for (std::size_t m = 0; m < n_; ++m)
              v += g(l, i, m).value() * g(m, j, k).value() - g(l, j, m).value() * g(m, i, k).value();
            (*this)(l, k, i, j) = v;
          }
  }

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t l, std::size_t k, std::size_t i, std::size_t j) {
    return r_[((l * n_ + k) * n_ + i) * n_ + j];
  }
  double operator()(std::size_t l, std::size_t k, std::size_t i, std::size_t j) const {
    return r_[((l * n_ + k) * n_ + i) * n_ + j];
  }
  double max_abs() const { return warpconn::max_abs(r_); }

  /// R(X, Y)Z
  std::vector<double> apply(const std::vector<double>& x, const std::vector<double>& y,
                            const std::vector<double>& z) const {
    std::vector<double> out(n_, 0.0);
    for (std::size_t l = 0; l < n_; ++l)
      for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t i = 0; i < n_; ++i)
          for (std::size_t j = 0; j < n_; ++j) out[l] += (*this)(l, k, i, j) * x[i] * y[j] * z[k];
    return out;
  }

 private:
  std::size_t n_;
  std::vector<double> r_;
};

// ---------------------------------------------------------------------------
// Pointwise operations on expression-valued inputs.

struct MetricAt {
  Matrix<double> g, ginv;
};

inline MetricAt metric_at(const ChartMetric& m, const Point& p) {
  auto s = sample_metric<double>(m, p);
  return {std::move(s.g), std::move(s.ginv)};
}

inline Array3<double> christoffel_at(const ChartMetric& m, const Point& p) {
  return christoffel(sample_metric<double>(m, p));
}

inline void require_same_chart(const VarList& chart, const VectorField& x) {
  if (!same_vars(chart, x.vars())) throw GeometryError("vector field is defined on a different chart");
}

inline std::vector<double> lie_bracket_at(const VectorField& x, const VectorField& y, const Point& p) {
  if (!same_vars(x.vars(), y.vars())) throw GeometryError("bracket of fields on different charts");
  return lie_bracket(eval_field(x, p), eval_field(y, p));
}

inline std::vector<double> cov_deriv_at(const Connection& c, const VectorField& x, const VectorField& y,
                                        const Point& p) {
  if (x.dim() != c.dim() || y.dim() != c.dim()) throw GeometryError("field dimension does not match connection");
  return cov_deriv(c.coefficients(p), eval_field(x, p), eval_field(y, p));
}

/// (grad h)ⁱ = gⁱʲ∂ⱼh
inline std::vector<double> gradient_at(const ChartMetric& m, const ScalarExpr& h, const Point& p) {
  detail::require_vars(m.vars(), h, "gradient");
  const auto s = sample_metric<double>(m, p);
  const Jet hj = h.eval_jet(p, 1);
  std::vector<double> dh(hj.gradient().begin(), hj.gradient().end());
  return mat_vec(s.ginv, dh);
}

inline SymSkewSplit<double> sym_skew_split_at(const ChartMetric& m, const Tensor11Field& phi, const Point& p) {
  if (!same_vars(m.vars(), phi.vars())) throw GeometryError("tensor field is defined on a different chart");
  const auto s = sample_metric<double>(m, p);
  return sym_skew_split(s.g, s.ginv, eval_as<double>(phi, p));
}

inline std::vector<double> torsion_at(const Connection& c, const VectorField& x, const VectorField& y,
                                      const Point& p) {
  return torsion(c.coefficients(p), eval_field(x, p), eval_field(y, p));
}

inline double nonmetricity_at(const Connection& c, const ChartMetric& m, const VectorField& x, const VectorField& y,
                              const VectorField& z, const Point& p) {
  return nonmetricity(c.coefficients(p), sample_metric<double>(m, p), eval_field(x, p), eval_field(y, p),
                      eval_field(z, p));
}

inline Riemann riemann_at(const Connection& c, const Point& p) { return Riemann(c.coefficient_jets(p)); }

inline std::vector<double> curvature_at(const Connection& c, const VectorField& x, const VectorField& y,
                                        const VectorField& z, const Point& p) {
  return riemann_at(c, p).apply(values(eval_field(x, p, 0)), values(eval_field(y, p, 0)),
                                values(eval_field(z, p, 0)));
}

/// g(R(X,Y)Y, X) / (g(X,X)g(Y,Y) − g(X,Y)²)
inline double sectional_curvature_at(const Connection& c, const ChartMetric& m, const VectorField& x,
                                     const VectorField& y, const Point& p) {
  const auto g = metric_at(m, p).g;
  const auto xv = values(eval_field(x, p, 0)), yv = values(eval_field(y, p, 0));
  const auto r = riemann_at(c, p).apply(xv, yv, yv);
  const double gxy = bilinear(g, xv, yv);
  return bilinear(g, r, xv) / (bilinear(g, xv, xv) * bilinear(g, yv, yv) - gxy * gxy);
}

/// Levi-Civita ∇̊_X Y from the Koszul formula alone (no Christoffel symbols):
/// 2 g(∇̊_X Y, ∂ₗ) is the six-term expansion with Z = ∂ₗ.
inline std::vector<double> koszul_levi_civita_at(const ChartMetric& m, const VectorField& x, const VectorField& y,
                                                 const Point& p) {
  const std::size_t n = m.dim();
  const auto s = sample_metric<double>(m, p);
  const auto gj = metric_jets(s);
  const auto xj = eval_field(x, p), yj = eval_field(y, p);
  std::vector<double> lowered(n);
  for (std::size_t l = 0; l < n; ++l) {
    std::vector<double> e(n, 0.0);
    e[l] = 1.0;
    lowered[l] = 0.5 * koszul_rhs(gj, xj, yj, constant_field(e));
  }
  return mat_vec(s.ginv, lowered);
}

}  // namespace warpconn
