#pragma once

// The Tripathi connection family
//
//   ∇_X Y = ∇̊_X Y + u(Y)φ₁X − u(X)φ₂Y − Φ₁(X,Y)P
//           − f₁{u₁(X)Y + u₁(Y)X − g(X,Y)P₁} − f₂ g(X,Y)P₂
//
// with u = g(P,·), u₁ = g(P₁,·), u₂ = g(P₂,·), and φ₁/φ₂ the g-symmetric and
// g-skew parts of φ.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "warpconn/error.hpp"
#include "warpconn/expr.hpp"
#include "warpconn/geometry.hpp"

namespace warpconn {

struct TripathiData {
  ScalarExpr f1, f2;
  VectorField P, P1, P2;
  Tensor11Field phi;

  static TripathiData zero(const VarList& vars) {
    const auto z = ScalarExpr::constant(vars, 0.0);
    return {z, z, VectorField::zero(vars), VectorField::zero(vars), VectorField::zero(vars),
            Tensor11Field::zero(vars)};
  }

  const VarList& vars() const noexcept { return P.vars(); }

  /// Throws unless every field lives on the chart of `m`.
  void check_chart(const ChartMetric& m) const {
    const auto& v = m.vars();
    auto bad = [&](const char* what) { throw GeometryError(std::string("connection data field ") + what +
                                                           " is not defined on the metric's chart"); };
    if (f1.empty() || !same_vars(f1.vars(), v)) bad("f1");
    if (f2.empty() || !same_vars(f2.vars(), v)) bad("f2");
    if (!same_vars(P.vars(), v)) bad("P");
    if (!same_vars(P1.vars(), v)) bad("P1");
    if (!same_vars(P2.vars(), v)) bad("P2");
    if (!same_vars(phi.vars(), v)) bad("phi");
  }
};

/// Data values (or jets) at one point.
template <class S>
struct TripathiSample {
  S f1, f2;
  Vec<S> P, P1, P2;
  Matrix<S> phi;
};

template <class S>
TripathiSample<S> sample_data(const TripathiData& d, const Point& p) {
  return {eval_as<S>(d.f1, p), eval_as<S>(d.f2, p), eval_as<S>(d.P, p), eval_as<S>(d.P1, p),
          eval_as<S>(d.P2, p), eval_as<S>(d.phi, p)};
}

/// vᵢ = gᵢⱼVʲ
template <class S>
Vec<S> lower(const Matrix<S>& g, const Vec<S>& v) {
  return mat_vec(g, v);
}

template <class S>
Array3<S> tripathi_coefficients(const MetricSample<S>& s, const TripathiSample<S>& d) {
  const std::size_t n = s.g.size();
  Array3<S> gamma = christoffel(s);
  const auto sp = sym_skew_split(s.g, s.ginv, d.phi);
  const Vec<S> u = lower(s.g, d.P), u1 = lower(s.g, d.P1);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        S t = u[j] * sp.phi1(k, i) - u[i] * sp.phi2(k, j) - sp.Phi1(i, j) * d.P[k];
        S f1_part = s.g(i, j) * (-d.P1[k]);
        if (k == j) f1_part = f1_part + u1[i];
        if (k == i) f1_part = f1_part + u1[j];
        t = t - d.f1 * f1_part - d.f2 * s.g(i, j) * d.P2[k];
        gamma(k, i, j) = gamma(k, i, j) + t;
      }
  return gamma;
}

inline Connection tripathi_connection(const ChartMetric& m, const TripathiData& d) {
  d.check_chart(m);
  return Connection::generic(m.dim(), [m, d](const Point& p, auto tag) {
    using S = typename decltype(tag)::type;
    return tripathi_coefficients(sample_metric<S>(m, p), sample_data<S>(d, p));
  });
}

inline Array3<double> coefficients_at(const ChartMetric& m, const TripathiData& d, const Point& p) {
  d.check_chart(m);
  return tripathi_coefficients(sample_metric<double>(m, p), sample_data<double>(d, p));
}

struct OneForms {
  std::vector<double> u, u1, u2;
};

inline OneForms one_forms_at(const ChartMetric& m, const TripathiData& d, const Point& p) {
  d.check_chart(m);
  const auto g = metric_at(m, p).g;
  return {lower(g, eval_as<double>(d.P, p)), lower(g, eval_as<double>(d.P1, p)), lower(g, eval_as<double>(d.P2, p))};
}

/// Everything the operator-form expressions need at one point.
struct TripathiPoint {
  Matrix<double> g, ginv;
  double f1 = 0.0, f2 = 0.0;
  std::vector<double> P, P1, P2;
  Matrix<double> phi;
  SymSkewSplit<double> split;
  std::vector<double> u, u1, u2;

  TripathiPoint(const MetricSample<double>& s, const TripathiSample<double>& d)
      : g(s.g), ginv(s.ginv), f1(d.f1), f2(d.f2), P(d.P), P1(d.P1), P2(d.P2), phi(d.phi),
        split(sym_skew_split(s.g, s.ginv, d.phi)), u(lower(g, P)), u1(lower(g, P1)), u2(lower(g, P2)) {}

  static TripathiPoint at(const ChartMetric& m, const TripathiData& d, const Point& p) {
    d.check_chart(m);
    return TripathiPoint(sample_metric<double>(m, p), sample_data<double>(d, p));
  }

  static double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
  }

  double metric(const std::vector<double>& x, const std::vector<double>& y) const { return bilinear(g, x, y); }
  double Phi(const std::vector<double>& x, const std::vector<double>& y) const {
    return metric(mat_vec(phi, x), y);
  }
  double Phi1(const std::vector<double>& x, const std::vector<double>& y) const { return bilinear(split.Phi1, x, y); }
  double Phi2(const std::vector<double>& x, const std::vector<double>& y) const { return bilinear(split.Phi2, x, y); }

  /// The data part of the connection: ∇_X Y − ∇̊_X Y.
  std::vector<double> difference(const std::vector<double>& x, const std::vector<double>& y) const {
    const std::size_t n = x.size();
    const auto phi1x = mat_vec(split.phi1, x), phi2y = mat_vec(split.phi2, y);
    const double uy = dot(u, y), ux = dot(u, x), u1x = dot(u1, x), u1y = dot(u1, y);
    const double gxy = metric(x, y), phi1xy = Phi1(x, y);
    std::vector<double> r(n);
    for (std::size_t k = 0; k < n; ++k)
      r[k] = uy * phi1x[k] - ux * phi2y[k] - phi1xy * P[k] - f1 * (u1x * y[k] + u1y * x[k] - gxy * P1[k]) -
             f2 * gxy * P2[k];
    return r;
  }
};

/// u(Y)φX − u(X)φY
inline std::vector<double> torsion_claimed_at(const ChartMetric& m, const TripathiData& d, const VectorField& x,
                                              const VectorField& y, const Point& p) {
  const auto t = TripathiPoint::at(m, d, p);
  const auto xv = eval_as<double>(x, p), yv = eval_as<double>(y, p);
  const double uy = TripathiPoint::dot(t.u, yv), ux = TripathiPoint::dot(t.u, xv);
  const auto px = mat_vec(t.phi, xv), py = mat_vec(t.phi, yv);
  std::vector<double> r(xv.size());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = uy * px[k] - ux * py[k];
  return r;
}

/// 2f₁u₁(X)g(Y,Z) + f₂{u₂(Y)g(X,Z) + u₂(Z)g(X,Y)}
inline double nonmetricity_claimed_at(const ChartMetric& m, const TripathiData& d, const VectorField& x,
                                      const VectorField& y, const VectorField& z, const Point& p) {
  const auto t = TripathiPoint::at(m, d, p);
  const auto xv = eval_as<double>(x, p), yv = eval_as<double>(y, p), zv = eval_as<double>(z, p);
  using T = TripathiPoint;
  return 2.0 * t.f1 * T::dot(t.u1, xv) * t.metric(yv, zv) +
         t.f2 * (T::dot(t.u2, yv) * t.metric(xv, zv) + T::dot(t.u2, zv) * t.metric(xv, yv));
}

/// ∇_X Y evaluated term by term: the Koszul route for ∇̊ plus the data part.
/// Shares no code with the coefficient construction beyond metric sampling.
inline std::vector<double> operator_form_at(const ChartMetric& m, const TripathiData& d, const VectorField& x,
                                            const VectorField& y, const Point& p) {
  const auto t = TripathiPoint::at(m, d, p);
  auto r = koszul_levi_civita_at(m, x, y, p);
  const auto dxy = t.difference(eval_as<double>(x, p), eval_as<double>(y, p));
  for (std::size_t k = 0; k < r.size(); ++k) r[k] += dxy[k];
  return r;
}

// ---------------------------------------------------------------------------
// Presets

enum class PresetId {
  levi_civita,
  semi_symmetric_metric,
  semi_symmetric_non_metric,
  quarter_symmetric_metric,
  quarter_symmetric_non_metric,
};

struct PresetInfo {
  PresetId id;
  std::string_view name;
  std::string_view fixed;     // fields the preset pins down
  std::string_view required;  // fields the caller must supply
  std::string_view torsion;
  std::string_view nonmetricity;
};

inline const std::array<PresetInfo, 5>& preset_catalog() {
  static const std::array<PresetInfo, 5> catalog{{
      {PresetId::levi_civita, "levi_civita", "f1=f2=0, P=P1=P2=0, phi=0", "(none)", "0", "0"},
      {PresetId::semi_symmetric_metric, "semi_symmetric_metric", "f1=f2=0, phi=Id, P1=P2=0", "P",
       "u(Y)X - u(X)Y", "0"},
      {PresetId::semi_symmetric_non_metric, "semi_symmetric_non_metric", "f1=0, f2=-1, phi=Id, P1=0, P2=P", "P",
       "u(Y)X - u(X)Y", "-u(Y)g(X,Z) - u(Z)g(X,Y)"},
      {PresetId::quarter_symmetric_metric, "quarter_symmetric_metric", "f1=f2=0, P1=P2=0", "P, phi",
       "u(Y)phiX - u(X)phiY", "0"},
      {PresetId::quarter_symmetric_non_metric, "quarter_symmetric_non_metric", "f1=0, P1=0, phi g-skew",
       "P, P2, f2 (nonzero), phi", "u(Y)phiX - u(X)phiY", "f2{u2(Y)g(X,Z) + u2(Z)g(X,Y)}"},
  }};
  return catalog;
}

inline std::string_view to_string(PresetId id) {
  for (const auto& info : preset_catalog())
    if (info.id == id) return info.name;
  return "unknown";
}

inline std::optional<PresetId> preset_from_string(std::string_view name) {
  for (const auto& info : preset_catalog())
    if (info.name == name) return info.id;
  return std::nullopt;
}

/// The fields a preset leaves free. Anything unset is absent.
struct PresetParams {
  std::optional<ScalarExpr> f1, f2;
  std::optional<VectorField> P, P1, P2;
  std::optional<Tensor11Field> phi;
};

namespace detail {

struct FieldRule {
  const char* name;
  bool present;
  bool allowed;
};

inline void check_params(PresetId id, std::initializer_list<FieldRule> rules) {
  for (const auto& r : rules) {
    if (r.present && !r.allowed)
      throw ConfigError("preset " + std::string(to_string(id)) + " fixes " + r.name + "; it cannot be supplied");
    if (!r.present && r.allowed)
      throw ConfigError("preset " + std::string(to_string(id)) + " requires " + r.name);
  }
}

}  // namespace detail

/// Build the data of a named special case. `validation` points are used to
/// check conditions that can only be judged numerically (φ₁ = 0 for the
/// quarter-symmetric non-metric case).
inline TripathiData preset(PresetId id, const PresetParams& params, const ChartMetric& m,
                           std::span<const Point> validation = {}) {
  const VarList& vars = m.vars();
  TripathiData d = TripathiData::zero(vars);
  const bool f1 = params.f1.has_value(), f2 = params.f2.has_value(), P = params.P.has_value(),
             P1 = params.P1.has_value(), P2 = params.P2.has_value(), phi = params.phi.has_value();
  using detail::check_params;
  switch (id) {
    case PresetId::levi_civita:
      check_params(id, {{"f1", f1, false}, {"f2", f2, false}, {"P", P, false}, {"P1", P1, false},
                        {"P2", P2, false}, {"phi", phi, false}});
      break;
    case PresetId::semi_symmetric_metric:
      check_params(id, {{"f1", f1, false}, {"f2", f2, false}, {"P", P, true}, {"P1", P1, false},
                        {"P2", P2, false}, {"phi", phi, false}});
      d.P = *params.P;
      d.phi = Tensor11Field::identity(vars);
      break;
    case PresetId::semi_symmetric_non_metric:
      check_params(id, {{"f1", f1, false}, {"f2", f2, false}, {"P", P, true}, {"P1", P1, false},
                        {"P2", P2, false}, {"phi", phi, false}});
      d.P = *params.P;
      d.P2 = *params.P;  // u₂ = u
      d.f2 = ScalarExpr::constant(vars, -1.0);
      d.phi = Tensor11Field::identity(vars);
      break;
    case PresetId::quarter_symmetric_metric:
      check_params(id, {{"f1", f1, false}, {"f2", f2, false}, {"P", P, true}, {"P1", P1, false},
                        {"P2", P2, false}, {"phi", phi, true}});
      d.P = *params.P;
      d.phi = *params.phi;
      break;
    case PresetId::quarter_symmetric_non_metric:
      check_params(id, {{"f1", f1, false}, {"f2", f2, true}, {"P", P, true}, {"P1", P1, false},
                        {"P2", P2, true}, {"phi", phi, true}});
      if (params.f2->is_literal_zero())
        throw ConfigError("preset quarter_symmetric_non_metric needs f2 != 0 (use quarter_symmetric_metric)");
      d.P = *params.P;
      d.P2 = *params.P2;
      d.f2 = *params.f2;
      d.phi = *params.phi;
      break;
  }
  d.check_chart(m);

  if (id == PresetId::quarter_symmetric_non_metric) {
    for (const Point& p : validation) {
      const auto s = sample_metric<double>(m, p);
      const auto sp = sym_skew_split(s.g, s.ginv, eval_as<double>(d.phi, p));
      double sym = 0.0, all = 0.0;
      for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) {
          sym = std::max(sym, std::abs(sp.Phi1(i, j)));
          all = std::max(all, std::abs(sp.Phi1(i, j) + sp.Phi2(i, j)));
        }
      if (sym > 1e-12 * std::max(1.0, all))
        throw ConfigError("preset quarter_symmetric_non_metric needs phi with vanishing symmetric part; "
                          "g(phi X, Y) has symmetric part of size " + detail::format_number(sym) + " at " +
                          format_point(p));
    }
  }
  return d;
}

namespace detail {

// Symbolic determinant by cofactor expansion along the first row; the blocks
// this is used on are tiny.
inline ScalarExpr det_expr(const std::vector<std::vector<ScalarExpr>>& a, const VarList& vars) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
  ScalarExpr acc = ScalarExpr::constant(vars, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::vector<ScalarExpr>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<ScalarExpr> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(a[r][k]);
      minor.push_back(std::move(row));
    }
    const ScalarExpr term = a[0][c] * det_expr(minor, vars);
    acc = c % 2 == 0 ? acc + term : acc - term;
  }
  return acc;
}

}  // namespace detail

/// A (1,1) field φ with g(φX, Y) = A(X, Y) for a skew matrix A of
/// expressions, i.e. φᵏᵢ = gᵏˡAᵢₗ. The inverse metric is formed symbolically
/// (adjugate over determinant), block by block along `blocks` so that the
/// result keeps the metric's block structure.
inline Tensor11Field skew_endomorphism(const ChartMetric& m, const std::vector<std::vector<ScalarExpr>>& A,
                                       const std::vector<std::size_t>& blocks) {
  const std::size_t n = m.dim();
  const VarList& vars = m.vars();
  if (A.size() != n) throw GeometryError("skew matrix must be dim x dim");
  std::vector<ScalarExpr> e(n * n, ScalarExpr::constant(vars, 0.0));
  std::size_t start = 0;
  for (std::size_t b : blocks) {
    std::vector<std::vector<ScalarExpr>> g(b, std::vector<ScalarExpr>(b));
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < b; ++j) g[i][j] = m(start + i, start + j);
    const ScalarExpr det = detail::det_expr(g, vars);
    // inverse(k, l) = cofactor(l, k) / det
    auto inverse = [&](std::size_t k, std::size_t l) {
      if (b == 1) return ScalarExpr::constant(vars, 1.0) / det;
      std::vector<std::vector<ScalarExpr>> minor;
      for (std::size_t r = 0; r < b; ++r) {
        if (r == l) continue;
        std::vector<ScalarExpr> row;
        for (std::size_t c = 0; c < b; ++c)
          if (c != k) row.push_back(g[r][c]);
        minor.push_back(std::move(row));
      }
      const ScalarExpr cof = detail::det_expr(minor, vars);
      return ((k + l) % 2 == 0 ? cof : -cof) / det;
    };
    for (std::size_t k = 0; k < b; ++k)
      for (std::size_t i = 0; i < b; ++i) {
        ScalarExpr acc = ScalarExpr::constant(vars, 0.0);
        for (std::size_t l = 0; l < b; ++l) acc = acc + inverse(k, l) * A[start + i][start + l];
        e[(start + k) * n + start + i] = acc;
      }
    start += b;
  }
  if (start != n) throw GeometryError("block sizes must add up to the chart dimension");
  return Tensor11Field(vars, std::move(e));
}

}  // namespace warpconn
