#pragma once

// Numerical audit of the identities satisfied by the Tripathi connection on a
// warped product. The ground truth for every vector identity is the
// coefficient form of the connection on the assembled chart; stated
// right-hand sides are claims under test.
//
// Check ids follow the statement they test: thm1.* (torsion, non-metricity,
// operator/coefficient agreement), lemma21 (gradient of a lift), prop22.N
// (Levi-Civita decomposition), prop31.N / prop32.N (data horizontal /
// vertical), cor4K.N (special cases). Items whose stated form differs from
// the hand expansion in docs/derivations.md ship as an as-printed and an
// as-derived variant.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "warpconn/error.hpp"
#include "warpconn/expr.hpp"
#include "warpconn/geometry.hpp"
#include "warpconn/random.hpp"
#include "warpconn/tripathi.hpp"
#include "warpconn/warped.hpp"

namespace warpconn {

enum class Placement { horizontal, vertical };
enum class Variant { as_printed, as_derived };

inline std::string_view to_string(Placement p) { return p == Placement::horizontal ? "horizontal" : "vertical"; }
inline std::string_view to_string(Variant v) { return v == Variant::as_printed ? "as-printed" : "as-derived"; }

inline std::optional<Placement> placement_from_string(std::string_view s) {
  if (s == "horizontal") return Placement::horizontal;
  if (s == "vertical") return Placement::vertical;
  return std::nullopt;
}

inline std::optional<Variant> variant_from_string(std::string_view s) {
  if (s == "as-printed") return Variant::as_printed;
  if (s == "as-derived") return Variant::as_derived;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Field battery

namespace detail {

/// Polynomial of degree ≤ 2 with coefficients drawn uniformly from (−1, 1),
/// as expression text. With a box, each coordinate enters rescaled to
/// (−1, 1) over its interval so that values stay of order one.
inline std::string random_polynomial(const std::vector<std::string>& names, std::span<const Interval> box,
                                     Rng& rng) {
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (box.empty()) {
      vars.push_back(names[i]);
      continue;
    }
    const double mid = 0.5 * (box[i].lo + box[i].hi), half = 0.5 * (box[i].hi - box[i].lo);
    const std::string shifted = mid == 0.0 ? names[i]
                                : mid > 0.0 ? names[i] + " - " + format_number(mid)
                                            : names[i] + " + " + format_number(-mid);
    vars.push_back("((" + shifted + ")/" + format_number(half) + ")");
  }
  std::vector<std::string> monomials{""};
  for (std::size_t i = 0; i < vars.size(); ++i) monomials.push_back(vars[i]);
  for (std::size_t i = 0; i < vars.size(); ++i)
    for (std::size_t j = i; j < vars.size(); ++j)
      monomials.push_back(i == j ? vars[i] + "^2" : vars[i] + "*" + vars[j]);
  std::string text;
  for (const auto& mono : monomials) {
    const double c = rng.uniform(-1.0, 1.0);
    std::string term = format_number(std::abs(c));
    if (!mono.empty()) term += "*" + mono;
    if (text.empty())
      text = c < 0 ? "-" + term : term;
    else
      text += (c < 0 ? " - " : " + ") + term;
  }
  return text;
}

}  // namespace detail

/// Random polynomial scalar; `box` (empty, or one interval per coordinate)
/// sets the rescaling.
inline ScalarExpr random_scalar(const VarList& vars, std::span<const Interval> box, Rng& rng) {
  if (!box.empty() && box.size() != vars->size()) throw ConfigError("box does not match the chart");
  return parse(detail::random_polynomial(*vars, box, rng), vars);
}

inline VectorField random_field(const VarList& vars, std::span<const Interval> box, Rng& rng) {
  std::vector<ScalarExpr> c;
  for (std::size_t i = 0; i < vars->size(); ++i) c.push_back(random_scalar(vars, box, rng));
  return VectorField(vars, std::move(c));
}

/// Coordinate fields of each factor plus one random polynomial field per
/// factor, and a few base scalars for the gradient-lift check.
struct Battery {
  std::vector<VectorField> base, fiber;                 // on the factor charts
  std::vector<VectorField> base_lifted, fiber_lifted;  // on the assembled chart
  std::vector<ScalarExpr> base_scalars;

  std::vector<VectorField> all_lifted() const {
    auto v = base_lifted;
    v.insert(v.end(), fiber_lifted.begin(), fiber_lifted.end());
    return v;
  }
};

/// `box` covers the assembled coordinates (or is empty).
inline Battery make_battery(const WarpedProduct& wp, std::span<const Interval> box, Rng& rng) {
  Battery b;
  for (Side side : {Side::base, Side::fiber}) {
    const VarList& vars = wp.factor(side).vars();
    const auto factor_box = box.empty() ? box : box.subspan(wp.offset(side), vars->size());
    auto& fields = side == Side::base ? b.base : b.fiber;
    for (std::size_t i = 0; i < vars->size(); ++i) fields.push_back(VectorField::coordinate(vars, i));
    fields.push_back(random_field(vars, factor_box, rng));
    auto& lifted = side == Side::base ? b.base_lifted : b.fiber_lifted;
    for (const auto& f : fields) lifted.push_back(lift(wp, side, f));
  }
  const VarList& bv = wp.base().vars();
  for (std::size_t i = 0; i < bv->size(); ++i) b.base_scalars.push_back(ScalarExpr::coordinate(bv, i));
  b.base_scalars.push_back(wp.warping());
  b.base_scalars.push_back(random_scalar(bv, box.empty() ? box : box.subspan(0, bv->size()), rng));
  return b;
}

// ---------------------------------------------------------------------------
// Random connection data

namespace detail {

inline VectorField placed_field(const WarpedProduct& wp, std::optional<Placement> placement,
                                std::span<const Interval> box, Rng& rng) {
  const VarList& vars = wp.assembled().vars();
  std::vector<ScalarExpr> c;
  for (std::size_t i = 0; i < wp.dim(); ++i) {
    const bool keep = !placement || (*placement == Placement::horizontal) == wp.is_base_index(i);
    c.push_back(keep ? random_scalar(vars, box, rng) : ScalarExpr::constant(vars, 0.0));
  }
  return VectorField(vars, std::move(c));
}

}  // namespace detail

/// A random (1,1) field on the assembled chart; block-preserving when
/// `block_preserving` is set.
inline Tensor11Field random_tensor(const WarpedProduct& wp, bool block_preserving, std::span<const Interval> box,
                                   Rng& rng) {
  const VarList& vars = wp.assembled().vars();
  std::vector<ScalarExpr> e;
  for (std::size_t k = 0; k < wp.dim(); ++k)
    for (std::size_t i = 0; i < wp.dim(); ++i) {
      const bool keep = !block_preserving || wp.is_base_index(k) == wp.is_base_index(i);
      e.push_back(keep ? random_scalar(vars, box, rng) : ScalarExpr::constant(vars, 0.0));
    }
  return Tensor11Field(vars, std::move(e));
}

/// Random data for the full connection. With a placement, P, P₁, P₂ only
/// have components on that side and φ is block-preserving.
inline TripathiData random_connection_data(const WarpedProduct& wp, std::optional<Placement> placement,
                                           std::span<const Interval> box, Rng& rng) {
  const VarList& vars = wp.assembled().vars();
  TripathiData d;
  d.f1 = random_scalar(vars, box, rng);
  d.f2 = random_scalar(vars, box, rng);
  d.P = detail::placed_field(wp, placement, box, rng);
  d.P1 = detail::placed_field(wp, placement, box, rng);
  d.P2 = detail::placed_field(wp, placement, box, rng);
  d.phi = random_tensor(wp, placement.has_value(), box, rng);
  return d;
}

/// The free parameters of a preset, drawn at random for a placement.
inline TripathiData random_preset(const WarpedProduct& wp, PresetId id, Placement placement,
                                  std::span<const Interval> box, Rng& rng) {
  const ChartMetric& m = wp.assembled();
  const VarList& vars = m.vars();
  PresetParams params;
  switch (id) {
    case PresetId::levi_civita:
      break;
    case PresetId::semi_symmetric_metric:
    case PresetId::semi_symmetric_non_metric:
      params.P = detail::placed_field(wp, placement, box, rng);
      break;
    case PresetId::quarter_symmetric_metric:
      params.P = detail::placed_field(wp, placement, box, rng);
      params.phi = random_tensor(wp, true, box, rng);
      break;
    case PresetId::quarter_symmetric_non_metric: {
      params.P = detail::placed_field(wp, placement, box, rng);
      params.P2 = detail::placed_field(wp, placement, box, rng);
      params.f2 = ScalarExpr::constant(vars, rng.uniform(0.5, 1.5));
      std::vector<std::vector<ScalarExpr>> A(wp.dim(), std::vector<ScalarExpr>(wp.dim(), ScalarExpr::constant(vars, 0.0)));
      for (std::size_t i = 0; i < wp.dim(); ++i)
        for (std::size_t j = i + 1; j < wp.dim(); ++j)
          if (wp.is_base_index(i) == wp.is_base_index(j)) {
            A[i][j] = random_scalar(vars, box, rng);
            A[j][i] = -A[i][j];
          }
      params.phi = skew_endomorphism(m, A, {wp.base_dim(), wp.fiber_dim()});
      break;
    }
  }
  return preset(id, params, m);
}

// ---------------------------------------------------------------------------
// Sampling

/// `n` uniform points in `box` (base intervals first, then fiber), each
/// checked for F > 0 and a positive-definite metric.
inline std::vector<Point> sample_points(const WarpedProduct& wp, const Box& box, std::size_t n, std::uint64_t seed) {
  if (box.size() != wp.dim())
    throw ConfigError("sampling box has " + std::to_string(box.size()) + " intervals, chart has " +
                      std::to_string(wp.dim()) + " coordinates");
  if (n == 0) throw ConfigError("sample count must be at least 1");
  for (std::size_t i = 0; i < box.size(); ++i)
    if (!(box[i].lo < box[i].hi) || !std::isfinite(box[i].lo) || !std::isfinite(box[i].hi))
      throw ConfigError("sampling interval for '" + wp.assembled().names()[i] + "' is empty or not finite");
  Rng rng(seed);
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> c;
    for (const auto& iv : box) c.push_back(rng.uniform(iv.lo, iv.hi));
    Point p(std::move(c));
    const double f = wp.warping().evaluate(wp.base_part(p));
    if (!(f > 0.0))
      throw GeometryError("sampled point " + format_point(p) + ": warping function is not positive (value " +
                          detail::format_number(f) + ")");
    sample_metric<double>(wp.assembled(), p);  // throws with the point on failure
    pts.push_back(std::move(p));
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Pointwise evaluation context

namespace detail {

inline TripathiData restrict_data(const WarpedProduct& wp, Side side, const TripathiData& d, const Point& p) {
  const ChartMetric& f = wp.factor(side);
  const std::size_t off = wp.offset(side), n = f.dim();
  std::vector<std::variant<std::size_t, double>> map;
  for (std::size_t i = 0; i < wp.dim(); ++i) {
    if (i >= off && i < off + n)
      map.emplace_back(i - off);
    else
      map.emplace_back(p[i]);
  }
  const VarList& vars = f.vars();
  auto field = [&](const VectorField& x) {
    std::vector<ScalarExpr> c;
    for (std::size_t i = 0; i < n; ++i) c.push_back(x[off + i].rebind(vars, map));
    return VectorField(vars, std::move(c));
  };
  std::vector<ScalarExpr> phi;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) phi.push_back(d.phi(off + k, off + i).rebind(vars, map));
  return {d.f1.rebind(vars, map), d.f2.rebind(vars, map), field(d.P), field(d.P1), field(d.P2),
          Tensor11Field(vars, std::move(phi))};
}

using Vector = std::vector<double>;

inline Vector scaled(const Vector& v, double a) {
  Vector r(v);
  for (double& x : r) x *= a;
  return r;
}

/// y + a·x
inline Vector axpy(Vector y, double a, const Vector& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
  return y;
}

}  // namespace detail

/// The factor connections at a point: the base connection built from g₁ and
/// the base block of the data with fiber coordinates frozen, and the fiber
/// connection built from the induced metric F(x)²g₂ and the fiber block.
struct FactorConnections {
  Array3<double> base, fiber, base_levi_civita, fiber_levi_civita;
};

inline FactorConnections factor_connections_at(const WarpedProduct& wp, const TripathiData& d, const Point& p) {
  const Point bp = wp.base_part(p), fp = wp.fiber_part(p);
  const ChartMetric fiber_metric = wp.induced_fiber_metric(bp);
  return {coefficients_at(wp.base(), detail::restrict_data(wp, Side::base, d, p), bp),
          coefficients_at(fiber_metric, detail::restrict_data(wp, Side::fiber, d, p), fp),
          christoffel_at(wp.base(), bp), christoffel_at(wp.fiber(), fp)};
}

/// Everything a check needs at one sample point, computed once.
class PointContext {
 public:
  using Vector = std::vector<double>;

  PointContext(const WarpedProduct& wp, const TripathiData& d, const Battery& battery, const Point& p,
               bool with_factors)
      : wp_(wp), data_(d), battery_(battery), p_(p), s_(sample_metric<double>(wp.assembled(), p)),
        gj_(metric_jets(s_)), gamma_(tripathi_coefficients(s_, sample_data<double>(d, p))),
        lc_(christoffel(s_)), t_(s_, sample_data<double>(d, p)) {
    const Jet fj = wp.warping_lifted().eval_jet(p, 1);
    F_ = fj.value();
    dF_.assign(fj.gradient().begin(), fj.gradient().end());
    gradF_ = mat_vec(s_.ginv, dF_);
    const Point bp = wp.base_part(p), fp = wp.fiber_part(p);
    for (const auto& x : battery.base_lifted) X_.push_back(eval_field(x, p));
    for (const auto& v : battery.fiber_lifted) V_.push_back(eval_field(v, p));
    for (const auto& x : battery.base) Xb_.push_back(eval_field(x, bp));
    for (const auto& v : battery.fiber) Vf_.push_back(eval_field(v, fp));
    if (with_factors) factors_ = factor_connections_at(wp, d, p);
  }

  const WarpedProduct& wp() const noexcept { return wp_; }
  const TripathiData& data() const noexcept { return data_; }
  const Battery& battery() const noexcept { return battery_; }
  const Point& point() const noexcept { return p_; }
  const MetricSample<double>& metric() const noexcept { return s_; }
  const Array3<double>& coefficients() const noexcept { return gamma_; }
  const Array3<double>& levi_civita() const noexcept { return lc_; }
  const TripathiPoint& data_at() const noexcept { return t_; }
  double F() const noexcept { return F_; }
  const Vector& grad_F() const noexcept { return gradF_; }

  const std::vector<FieldJets>& X() const noexcept { return X_; }
  const std::vector<FieldJets>& V() const noexcept { return V_; }
  std::vector<FieldJets> all() const {
    auto a = X_;
    a.insert(a.end(), V_.begin(), V_.end());
    return a;
  }

  Vector nabla(const FieldJets& a, const FieldJets& b) const { return cov_deriv(gamma_, a, b); }
  Vector nabla_lc(const FieldJets& a, const FieldJets& b) const { return cov_deriv(lc_, a, b); }

  /// Operator form of ∇_a b: Koszul formula for ∇̊ plus the data part.
  Vector operator_form(const FieldJets& a, const FieldJets& b) const {
    const std::size_t n = a.size();
    Vector lowered(n);
    for (std::size_t l = 0; l < n; ++l) {
      Vector e(n, 0.0);
      e[l] = 1.0;
      lowered[l] = 0.5 * koszul_rhs(gj_, a, b, constant_field(e));
    }
    return detail::axpy(mat_vec(s_.ginv, lowered), 1.0, t_.difference(values(a), values(b)));
  }

  double nonmetricity(const FieldJets& x, const FieldJets& y, const FieldJets& z) const {
    return warpconn::nonmetricity(gamma_, s_, gj_, x, y, z);
  }

  double g(const Vector& a, const Vector& b) const { return bilinear(s_.g, a, b); }
  double u(const Vector& a) const { return TripathiPoint::dot(t_.u, a); }
  double u1(const Vector& a) const { return TripathiPoint::dot(t_.u1, a); }
  double u2(const Vector& a) const { return TripathiPoint::dot(t_.u2, a); }
  double f1() const { return t_.f1; }
  double f2() const { return t_.f2; }
  const Vector& P() const { return t_.P; }
  const Vector& P1() const { return t_.P1; }
  const Vector& P2() const { return t_.P2; }
  Vector phi(const Vector& a) const { return mat_vec(t_.phi, a); }
  Vector phi1(const Vector& a) const { return mat_vec(t_.split.phi1, a); }
  Vector phi2(const Vector& a) const { return mat_vec(t_.split.phi2, a); }
  double Phi(const Vector& a, const Vector& b) const { return t_.Phi(a, b); }
  double Phi1(const Vector& a, const Vector& b) const { return t_.Phi1(a, b); }
  double Phi2(const Vector& a, const Vector& b) const { return t_.Phi2(a, b); }

  /// X·F / F
  double log_derivative_F(const Vector& x) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * dF_[i];
    return acc / F_;
  }

  /// −(g(V,W)/F) grad F
  Vector normal_curvature(const Vector& v, const Vector& w) const { return detail::scaled(gradF_, -g(v, w) / F_); }

  Vector nor(const Vector& v) const { return warpconn::nor(wp_, v); }
  Vector tan(const Vector& v) const { return warpconn::tan(wp_, v); }

  /// Lifts of the factor covariant derivatives of battery fields a, b.
  Vector base_lift(std::size_t a, std::size_t b, bool levi_civita = false) const {
    const auto& c = levi_civita ? factors().base_levi_civita : factors().base;
    return embed(wp_, Side::base, cov_deriv(c, Xb_[a], Xb_[b]));
  }
  Vector fiber_lift(std::size_t a, std::size_t b, bool levi_civita = false) const {
    const auto& c = levi_civita ? factors().fiber_levi_civita : factors().fiber;
    return embed(wp_, Side::fiber, cov_deriv(c, Vf_[a], Vf_[b]));
  }

 private:
  const FactorConnections& factors() const {
    if (!factors_) throw Error("factor connections were not prepared for this check");
    return *factors_;
  }

  const WarpedProduct& wp_;
  const TripathiData& data_;
  const Battery& battery_;
  Point p_;
  MetricSample<double> s_;
  Matrix<Jet> gj_;
  Array3<double> gamma_, lc_;
  TripathiPoint t_;
  double F_ = 1.0;
  Vector dF_, gradF_;
  std::vector<FieldJets> X_, V_, Xb_, Vf_;
  std::optional<FactorConnections> factors_;
};

// ---------------------------------------------------------------------------
// Check catalog

/// Residuals of one check at one point, one entry per battery combination.
using CheckFn = std::function<std::vector<double>(const PointContext&, Variant)>;

struct CheckSpec {
  std::string id;
  Variant variant = Variant::as_printed;
  bool paired = false;                   // the other variant exists too
  std::optional<Placement> placement;    // required placement, if any
  std::optional<PresetId> preset;        // special case the formula assumes
  std::string note;
  CheckFn fn;

  std::string name() const { return paired ? id + "." + std::string(to_string(variant)) : id; }
};

namespace detail {

using Ctx = PointContext;
using Vector = std::vector<double>;

// Combinators over the battery.

template <class F>
std::vector<double> over_pairs(const std::vector<FieldJets>& a, const std::vector<FieldJets>& b, F f) {
  std::vector<double> r;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r.push_back(f(i, j));
  return r;
}

inline double diff(const Vector& a, const Vector& b) { return max_abs_diff(a, b); }

// Published right-hand sides. Each takes the variant where the two forms
// differ; the others ignore it.

// ∇_X Y is the lift of the base connection.
inline std::vector<double> lift_base_full(const Ctx& c, Variant) {
  return over_pairs(c.X(), c.X(), [&](std::size_t a, std::size_t b) {
    return diff(c.nabla(c.X()[a], c.X()[b]), c.base_lift(a, b));
  });
}

// nor ∇_X Y is the lift of the base connection.
inline std::vector<double> lift_base_nor(const Ctx& c, Variant) {
  return over_pairs(c.X(), c.X(), [&](std::size_t a, std::size_t b) {
    return diff(c.nor(c.nabla(c.X()[a], c.X()[b])), c.base_lift(a, b));
  });
}

// tan ∇_V W is the lift of the fiber connection.
inline std::vector<double> lift_fiber_tan(const Ctx& c, Variant) {
  return over_pairs(c.V(), c.V(), [&](std::size_t a, std::size_t b) {
    return diff(c.tan(c.nabla(c.V()[a], c.V()[b])), c.fiber_lift(a, b));
  });
}

/// ∇_X V and ∇_V X against two expected vectors.
template <class F>
std::vector<double> mixed(const Ctx& c, F expected) {
  return over_pairs(c.X(), c.V(), [&](std::size_t a, std::size_t b) {
    const auto& xj = c.X()[a];
    const auto& vj = c.V()[b];
    const auto [xv_rhs, vx_rhs] = expected(values(xj), values(vj));
    return std::max(diff(c.nabla(xj, vj), xv_rhs), diff(c.nabla(vj, xj), vx_rhs));
  });
}

/// tan ∇_X Y against an expected vector.
template <class F>
std::vector<double> tan_xy(const Ctx& c, F expected) {
  return over_pairs(c.X(), c.X(), [&](std::size_t a, std::size_t b) {
    const Vector x = values(c.X()[a]), y = values(c.X()[b]);
    return diff(c.tan(c.nabla(c.X()[a], c.X()[b])), expected(x, y));
  });
}

/// tan ∇_X V and nor ∇_X V against two expected vectors.
template <class F>
std::vector<double> split_xv(const Ctx& c, F expected) {
  return over_pairs(c.X(), c.V(), [&](std::size_t a, std::size_t b) {
    const Vector x = values(c.X()[a]), v = values(c.V()[b]);
    const Vector lhs = c.nabla(c.X()[a], c.V()[b]);
    const auto [tan_rhs, nor_rhs] = expected(x, v);
    return std::max(diff(c.tan(lhs), tan_rhs), diff(c.nor(lhs), nor_rhs));
  });
}

/// ∇_V X against an expected vector.
template <class F>
std::vector<double> vx(const Ctx& c, F expected) {
  return over_pairs(c.X(), c.V(), [&](std::size_t a, std::size_t b) {
    const Vector x = values(c.X()[a]), v = values(c.V()[b]);
    return diff(c.nabla(c.V()[b], c.X()[a]), expected(x, v));
  });
}

/// nor ∇_V W against an expected vector.
template <class F>
std::vector<double> nor_vw(const Ctx& c, F expected) {
  return over_pairs(c.V(), c.V(), [&](std::size_t a, std::size_t b) {
    const Vector v = values(c.V()[a]), w = values(c.V()[b]);
    return diff(c.nor(c.nabla(c.V()[a], c.V()[b])), expected(v, w));
  });
}

inline Vector zeros(std::size_t n) { return Vector(n, 0.0); }

// -- data horizontal ---------------------------------------------------------

inline std::vector<double> h_mixed(const Ctx& c, Variant) {
  return mixed(c, [&](const Vector& x, const Vector& v) {
    Vector xv = scaled(v, c.log_derivative_F(x));
    xv = axpy(xv, -c.u(x), c.phi2(v));
    xv = axpy(xv, -c.f1() * c.u1(x), v);
    return std::pair{xv, axpy(xv, c.u(x), c.phi(v))};
  });
}

inline std::vector<double> h_normal(const Ctx& c, Variant variant) {
  return nor_vw(c, [&](const Vector& v, const Vector& w) {
    const double gvw = c.g(v, w);
    Vector r = c.normal_curvature(v, w);
    r = axpy(r, c.Phi2(v, w), c.P());
    r = axpy(r, c.f1() * gvw, c.P1());
    r = axpy(r, -c.Phi(v, w), c.P());
    if (variant == Variant::as_derived) r = axpy(r, -c.f2() * gvw, c.P2());
    return r;
  });
}

// -- data vertical -----------------------------------------------------------

inline std::vector<double> v_tan_xy(const Ctx& c, Variant) {
  return tan_xy(c, [&](const Vector& x, const Vector& y) {
    const double gxy = c.g(x, y);
    Vector r = scaled(c.P(), -c.Phi1(x, y));
    r = axpy(r, c.f1() * gxy, c.P1());
    return axpy(r, -c.f2() * gxy, c.P2());
  });
}

inline std::vector<double> v_split_xv(const Ctx& c, Variant variant) {
  const bool printed = variant == Variant::as_printed;
  return split_xv(c, [&](const Vector& x, const Vector& v) {
    Vector t = scaled(v, c.log_derivative_F(x));
    t = axpy(t, -c.u(x), c.phi2(v));
    t = axpy(t, -c.f1() * (printed ? c.u(x) : c.u1(x)), v);
    Vector n = scaled(c.phi1(x), c.u(v));
    n = axpy(n, -c.f1() * c.u1(v), x);
    if (printed) n = axpy(n, c.f2() * c.u2(v), x);
    return std::pair{t, n};
  });
}

inline std::vector<double> v_vx(const Ctx& c, Variant variant) {
  const bool printed = variant == Variant::as_printed;
  return vx(c, [&](const Vector& x, const Vector& v) {
    Vector r = scaled(v, c.log_derivative_F(x));
    r = axpy(r, -c.u(x), c.phi2(v));
    r = axpy(r, -c.f1() * (printed ? c.u(x) : c.u1(x)), v);
    r = axpy(r, c.u(v), c.phi1(x));
    r = axpy(r, -c.f1() * c.u1(v), x);
    if (printed) r = axpy(r, c.f2() * c.u2(v), x);
    r = axpy(r, -c.u(v), c.phi(x));
    return axpy(r, c.u(x), c.phi(v));
  });
}

inline std::vector<double> v_normal(const Ctx& c, Variant variant) {
  return nor_vw(c, [&](const Vector& v, const Vector& w) {
    Vector r = c.normal_curvature(v, w);
    if (variant == Variant::as_printed) {
      r = axpy(r, c.Phi2(v, w), c.P());
      r = axpy(r, c.f1() * c.g(v, w), c.P());
      r = axpy(r, -c.Phi(v, w), c.P());
    }
    return r;
  });
}

// -- special cases -----------------------------------------------------------

// ∇_X V = (XF/F)V and ∇_V X = (XF/F)V + u(X)φV
inline std::vector<double> ss_h_mixed(const Ctx& c, Variant) {
  return mixed(c, [&](const Vector& x, const Vector& v) {
    const Vector xv = scaled(v, c.log_derivative_F(x));
    return std::pair{xv, axpy(xv, c.u(x), c.phi(v))};
  });
}

// nor ∇_V W = −(g(V,W)/F) grad F
inline std::vector<double> plain_normal(const Ctx& c, Variant) {
  return nor_vw(c, [&](const Vector& v, const Vector& w) { return c.normal_curvature(v, w); });
}

// tan ∇_X V = (XF/F)V and nor ∇_X V = u(V)X
inline std::vector<double> ss_v_split_xv(const Ctx& c, Variant) {
  return split_xv(c, [&](const Vector& x, const Vector& v) {
    return std::pair{scaled(v, c.log_derivative_F(x)), scaled(x, c.u(v))};
  });
}

// ∇_V X = (XF/F)V
inline std::vector<double> plain_vx(const Ctx& c, Variant) {
  return vx(c, [&](const Vector& x, const Vector& v) { return scaled(v, c.log_derivative_F(x)); });
}

}  // namespace detail

namespace detail {

inline std::vector<CheckSpec> build_catalog() {
  std::vector<CheckSpec> cat;
  using P = Placement;
  const auto H = std::optional<P>(P::horizontal), Vt = std::optional<P>(P::vertical);
  auto single = [&](std::string id, std::optional<P> pl, std::optional<PresetId> pre, CheckFn fn,
                    std::string note = {}) {
    cat.push_back({std::move(id), Variant::as_printed, false, pl, pre, std::move(note), std::move(fn)});
  };
  auto paired = [&](const std::string& id, std::optional<P> pl, std::optional<PresetId> pre, const CheckFn& fn,
                    const std::string& note = {}) {
    cat.push_back({id, Variant::as_printed, true, pl, pre, note, fn});
    cat.push_back({id, Variant::as_derived, true, pl, pre, note, fn});
  };

  // Torsion identity over all ordered pairs of battery fields.
  single("thm1.torsion", std::nullopt, std::nullopt, [](const Ctx& c, Variant) {
    const auto all = c.all();
    return over_pairs(all, all, [&](std::size_t a, std::size_t b) {
      const Vector x = values(all[a]), y = values(all[b]);
      Vector claimed = scaled(c.phi(x), c.u(y));
      claimed = axpy(claimed, -c.u(x), c.phi(y));
      return diff(torsion(c.coefficients(), all[a], all[b]), claimed);
    });
  });
  single("thm1.nonmetricity", std::nullopt, std::nullopt, [](const Ctx& c, Variant) {
    const auto all = c.all();
    std::vector<double> r;
    for (const auto& x : all)
      for (const auto& y : all)
        for (const auto& z : all) {
          const Vector xv = values(x), yv = values(y), zv = values(z);
          const double claimed = 2.0 * c.f1() * c.u1(xv) * c.g(yv, zv) +
                                 c.f2() * (c.u2(yv) * c.g(xv, zv) + c.u2(zv) * c.g(xv, yv));
          r.push_back(std::abs(c.nonmetricity(x, y, z) - claimed));
        }
    return r;
  });
  single("thm1.uniqueness", std::nullopt, std::nullopt, [](const Ctx& c, Variant) {
    const auto all = c.all();
    return over_pairs(all, all,
                      [&](std::size_t a, std::size_t b) { return diff(c.operator_form(all[a], all[b]), c.nabla(all[a], all[b])); });
  });

  single("lemma21", std::nullopt, std::nullopt, [](const Ctx& c, Variant) {
    std::vector<double> r;
    for (const auto& h : c.battery().base_scalars) r.push_back(grad_lift_check(c.wp(), h, c.point()));
    return r;
  });

  // Levi-Civita decomposition.
  single("prop22.1", std::nullopt, std::nullopt, [](const Ctx& c, Variant) {
    return over_pairs(c.X(), c.X(), [&](std::size_t a, std::size_t b) {
      return diff(c.nabla_lc(c.X()[a], c.X()[b]), c.base_lift(a, b, true));
    });
  });
  single("prop22.2", std::nullopt, std::nullopt, [](const Ctx& c, Variant) {
    return over_pairs(c.X(), c.V(), [&](std::size_t a, std::size_t b) {
      const auto& xj = c.X()[a];
      const auto& vj = c.V()[b];
      const Vector expected = scaled(values(vj), c.log_derivative_F(values(xj)));
      return std::max(diff(c.nabla_lc(xj, vj), expected), diff(c.nabla_lc(vj, xj), expected));
    });
  });
  single("prop22.3", std::nullopt, std::nullopt, [](const Ctx& c, Variant) {
    return over_pairs(c.V(), c.V(), [&](std::size_t a, std::size_t b) {
      return diff(c.nor(c.nabla_lc(c.V()[a], c.V()[b])), c.normal_curvature(values(c.V()[a]), values(c.V()[b])));
    });
  });
  single("prop22.4", std::nullopt, std::nullopt, [](const Ctx& c, Variant) {
    return over_pairs(c.V(), c.V(), [&](std::size_t a, std::size_t b) {
      return diff(c.tan(c.nabla_lc(c.V()[a], c.V()[b])), c.fiber_lift(a, b, true));
    });
  });

  // Data horizontal.
  single("prop31.1", H, std::nullopt, lift_base_full);
  single("prop31.2", H, std::nullopt, h_mixed);
  paired("prop31.3", H, std::nullopt, h_normal, "as-derived adds -f2 g(V,W) P2");
  single("prop31.4", H, std::nullopt, lift_fiber_tan, "printed nabla_X Y read as nabla_V W");

  // Data vertical.
  single("prop32.1", Vt, std::nullopt, lift_base_nor);
  single("prop32.2", Vt, std::nullopt, v_tan_xy);
  paired("prop32.3", Vt, std::nullopt, v_split_xv, "as-derived: u1 in the f1 term, no f2 u2(V) X term");
  paired("prop32.4", Vt, std::nullopt, v_vx, "as-derived: u1 in the f1 term, no f2 u2(V) X term");
  paired("prop32.5", Vt, std::nullopt, v_normal, "as-derived: -(g(V,W)/F) grad F only");
  single("prop32.6", Vt, std::nullopt, lift_fiber_tan, "fiber connection uses the induced metric F^2 g2");

  using enum PresetId;
  const std::string U = "U read as P";
  const std::string U2 = "U2 read as P2, U read as P";

  // Semi-symmetric metric.
  single("cor41.1", H, semi_symmetric_metric, lift_base_full);
  single("cor41.2", H, semi_symmetric_metric, ss_h_mixed);
  single("cor41.3", H, semi_symmetric_metric, [](const Ctx& c, Variant) {
    return nor_vw(c, [&](const Vector& v, const Vector& w) { return axpy(c.normal_curvature(v, w), -c.g(v, w), c.P()); });
  });
  single("cor41.4", H, semi_symmetric_metric, lift_fiber_tan);

  single("cor42.1", Vt, semi_symmetric_metric, lift_base_nor);
  single("cor42.2", Vt, semi_symmetric_metric, [](const Ctx& c, Variant) {
    return tan_xy(c, [&](const Vector& x, const Vector& y) { return scaled(c.P(), -c.g(x, y)); });
  });
  single("cor42.3", Vt, semi_symmetric_metric, ss_v_split_xv, U);
  single("cor42.4", Vt, semi_symmetric_metric, plain_vx);
  single("cor42.5", Vt, semi_symmetric_metric, plain_normal);
  single("cor42.6", Vt, semi_symmetric_metric, lift_fiber_tan);

  // Semi-symmetric non-metric.
  single("cor43.1", H, semi_symmetric_non_metric, lift_base_full);
  single("cor43.2", H, semi_symmetric_non_metric, ss_h_mixed);
  single("cor43.3", H, semi_symmetric_non_metric, plain_normal);
  single("cor43.4", H, semi_symmetric_non_metric, lift_fiber_tan);

  single("cor44.1", Vt, semi_symmetric_non_metric, lift_base_full);
  single("cor44.2", Vt, semi_symmetric_non_metric, ss_v_split_xv);
  single("cor44.3", Vt, semi_symmetric_non_metric, plain_vx);
  single("cor44.4", Vt, semi_symmetric_non_metric, plain_normal);
  single("cor44.5", Vt, semi_symmetric_non_metric, lift_fiber_tan);

  // Quarter-symmetric metric.
  single("cor45.1", H, quarter_symmetric_metric, lift_base_full);
  single("cor45.2", H, quarter_symmetric_metric, [](const Ctx& c, Variant) {
    return mixed(c, [&](const Vector& x, const Vector& v) {
      const Vector xv = axpy(scaled(v, c.log_derivative_F(x)), -c.u(x), c.phi2(v));
      return std::pair{xv, axpy(xv, c.u(x), c.phi(v))};
    });
  });
  paired("cor45.3", H, quarter_symmetric_metric,
         [](const Ctx& c, Variant variant) {
           return nor_vw(c, [&](const Vector& v, const Vector& w) {
             const double coeff = variant == Variant::as_printed ? c.Phi(v, w) : c.Phi1(v, w);
             return axpy(c.normal_curvature(v, w), -coeff, c.P());
           });
         },
         "as-derived: g(phi1 V, W) in place of g(phi V, W)");
  single("cor45.4", H, quarter_symmetric_metric, lift_fiber_tan);

  single("cor46.1", Vt, quarter_symmetric_metric, lift_base_nor);
  single("cor46.2", Vt, quarter_symmetric_metric, [](const Ctx& c, Variant) {
    return tan_xy(c, [&](const Vector& x, const Vector& y) { return scaled(c.P(), -c.Phi1(x, y)); });
  });
  single("cor46.3", Vt, quarter_symmetric_metric,
         [](const Ctx& c, Variant) {
           return split_xv(c, [&](const Vector& x, const Vector& v) {
             return std::pair{axpy(scaled(v, c.log_derivative_F(x)), -c.u(x), c.phi2(v)), scaled(c.phi1(x), c.u(v))};
           });
         },
         U);
  single("cor46.4", Vt, quarter_symmetric_metric,
         [](const Ctx& c, Variant) {
           return vx(c, [&](const Vector& x, const Vector& v) {
             Vector r = axpy(scaled(v, c.log_derivative_F(x)), -c.u(x), c.phi2(v));
             r = axpy(r, c.u(v), c.phi1(x));
             r = axpy(r, -c.u(v), c.phi(x));
             return axpy(r, c.u(x), c.phi(v));
           });
         },
         U);
  paired("cor46.5", Vt, quarter_symmetric_metric,
         [](const Ctx& c, Variant variant) {
           return nor_vw(c, [&](const Vector& v, const Vector& w) {
             Vector r = c.normal_curvature(v, w);
             if (variant == Variant::as_printed) r = axpy(r, c.Phi2(v, w) - c.Phi(v, w), c.P());
             return r;
           });
         },
         U + "; as-derived: -(g(V,W)/F) grad F only");
  single("cor46.6", Vt, quarter_symmetric_metric, lift_fiber_tan);

  // Quarter-symmetric non-metric.
  single("cor47.1", H, quarter_symmetric_non_metric, lift_base_full);
  single("cor47.2", H, quarter_symmetric_non_metric, [](const Ctx& c, Variant) {
    return mixed(c, [&](const Vector& x, const Vector& v) {
      const Vector plain = scaled(v, c.log_derivative_F(x));
      return std::pair{axpy(plain, -c.u(x), c.phi(v)), plain};
    });
  });
  paired("cor47.3", H, quarter_symmetric_non_metric,
         [](const Ctx& c, Variant variant) {
           return nor_vw(c, [&](const Vector& v, const Vector& w) {
             Vector r = c.normal_curvature(v, w);
             if (variant == Variant::as_printed) {
               r = axpy(r, c.Phi2(v, w), c.P1());
               r = axpy(r, -c.Phi(v, w), c.P());
             } else {
               r = axpy(r, -c.f2() * c.g(v, w), c.P2());
             }
             return r;
           });
         },
         "as-derived: -(g(V,W)/F) grad F - f2 g(V,W) P2");
  single("cor47.4", H, quarter_symmetric_non_metric, lift_fiber_tan);

  single("cor48.1", Vt, quarter_symmetric_non_metric, lift_base_nor);
  single("cor48.2", Vt, quarter_symmetric_non_metric, [](const Ctx& c, Variant) {
    return tan_xy(c, [&](const Vector& x, const Vector& y) { return scaled(c.P2(), -c.f2() * c.g(x, y)); });
  });
  paired("cor48.3", Vt, quarter_symmetric_non_metric,
         [](const Ctx& c, Variant variant) {
           return split_xv(c, [&](const Vector& x, const Vector& v) {
             const Vector t = axpy(scaled(v, c.log_derivative_F(x)), -c.u(x), c.phi(v));
             const Vector n = variant == Variant::as_printed ? scaled(x, c.f2() * c.u2(v)) : zeros(x.size());
             return std::pair{t, n};
           });
         },
         U2 + "; as-derived: nor part 0");
  paired("cor48.4", Vt, quarter_symmetric_non_metric,
         [](const Ctx& c, Variant variant) {
           return vx(c, [&](const Vector& x, const Vector& v) {
             Vector r = scaled(v, c.log_derivative_F(x));
             if (variant == Variant::as_printed) {
               r = axpy(r, -c.u(x), c.phi(v));
               r = axpy(r, c.f2() * c.u2(v), x);
               r = axpy(r, -c.u(v), c.phi(x));
               return axpy(r, c.u(x), c.phi(v));
             }
             return axpy(r, -c.u(v), c.phi(x));
           });
         },
         U2 + "; as-derived: (XF/F)V - u(V) phi X");
  single("cor48.5", Vt, quarter_symmetric_non_metric,
         [](const Ctx& c, Variant) {
           return nor_vw(c, [&](const Vector& v, const Vector& w) {
             return axpy(c.normal_curvature(v, w), c.Phi2(v, w) - c.Phi(v, w), c.P());
           });
         },
         U);
  single("cor48.6", Vt, quarter_symmetric_non_metric, lift_fiber_tan);
  return cat;
}

}  // namespace detail

inline const std::vector<CheckSpec>& check_catalog() {
  static const std::vector<CheckSpec> catalog = detail::build_catalog();
  return catalog;
}

inline const CheckSpec* find_check(std::string_view name) {
  for (const auto& c : check_catalog())
    if (c.name() == name) return &c;
  return nullptr;
}

namespace detail {

inline bool matches(const CheckSpec& c, std::string_view pattern) {
  if (pattern == "all" || pattern == "*") return true;
  const std::string name = c.name();
  if (!pattern.empty() && pattern.back() == '*') {
    const auto prefix = pattern.substr(0, pattern.size() - 1);
    return std::string_view(name).substr(0, prefix.size()) == prefix;
  }
  if (name == pattern || c.id == pattern) return true;
  // "prop31" selects every item of prop31.
  return c.id.size() > pattern.size() && std::string_view(c.id).substr(0, pattern.size()) == pattern &&
         c.id[pattern.size()] == '.';
}

}  // namespace detail

/// Resolve selection patterns (exact names, bare ids selecting both variants,
/// group names like "prop31", trailing-* prefixes, or "all") to catalog
/// entries in catalog order.
inline std::vector<const CheckSpec*> select_checks(std::span<const std::string> patterns) {
  std::vector<bool> chosen(check_catalog().size(), false);
  for (const auto& pat : patterns) {
    bool any = false;
    for (std::size_t i = 0; i < check_catalog().size(); ++i)
      if (detail::matches(check_catalog()[i], pat)) chosen[i] = any = true;
    if (!any) throw ConfigError("unknown check '" + pat + "'");
  }
  std::vector<const CheckSpec*> out;
  for (std::size_t i = 0; i < chosen.size(); ++i)
    if (chosen[i]) out.push_back(&check_catalog()[i]);
  return out;
}

/// Checks that apply to a scenario: the theorem, lemma and Levi-Civita items
/// always; the placement's proposition; the corollary of the preset.
inline std::vector<const CheckSpec*> default_checks(std::optional<Placement> placement,
                                                    std::optional<PresetId> preset_id) {
  std::vector<const CheckSpec*> out;
  for (const auto& c : check_catalog()) {
    bool take = !c.placement;
    if (c.placement && placement && *c.placement == *placement)
      take = !c.preset || (preset_id && *c.preset == *preset_id);
    if (take) out.push_back(&c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Running

struct CheckRecord {
  std::string check;
  Variant variant = Variant::as_printed;
  std::size_t samples = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  Point argmax_point;
};

struct AuditReport {
  std::vector<CheckRecord> records;

  bool all_pass() const {
    return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
  }
  const CheckRecord* find(std::string_view check, Variant variant = Variant::as_printed) const {
    for (const auto& r : records)
      if (r.check == check && r.variant == variant) return &r;
    return nullptr;
  }
};

struct AuditConfig {
  Box box;  // assembled coordinates: base intervals, then fiber
  std::size_t samples = 100;
  std::uint64_t seed = 42;
  double tolerance = 1e-9;
};

namespace detail {

inline void check_placement(const WarpedProduct& wp, const TripathiData& d, Placement placement,
                            const Point& p) {
  const char* names[] = {"P", "P1", "P2"};
  const VectorField* fields[] = {&d.P, &d.P1, &d.P2};
  for (std::size_t f = 0; f < 3; ++f)
    for (std::size_t i = 0; i < wp.dim(); ++i) {
      if ((placement == Placement::horizontal) == wp.is_base_index(i)) continue;
      if ((*fields[f])[i].evaluate(p) != 0.0)
        throw ConfigError(std::string("placement violated: ") + names[f] + " has a nonzero " +
                          (placement == Placement::horizontal ? "fiber" : "base") + " component '" +
                          wp.assembled().names()[i] + "' at " + format_point(p));
    }
  for (std::size_t k = 0; k < wp.dim(); ++k)
    for (std::size_t i = 0; i < wp.dim(); ++i)
      if (wp.is_base_index(k) != wp.is_base_index(i) && d.phi(k, i).evaluate(p) != 0.0)
        throw ConfigError("phi is not block-preserving: component (" + std::to_string(k) + ", " +
                          std::to_string(i) + ") is nonzero at " + format_point(p));
}

}  // namespace detail

/// Seed offsets so that points, battery and random data use separate streams.
inline constexpr std::uint64_t kBatteryStream = 0x9e3779b97f4a7c15ULL;
inline constexpr std::uint64_t kDataStream = 0xbf58476d1ce4e5b9ULL;

inline AuditReport run_audit(const WarpedProduct& wp, const TripathiData& d, std::optional<Placement> placement,
                             std::span<const CheckSpec* const> checks, const AuditConfig& cfg) {
  d.check_chart(wp.assembled());
  bool needs_placement = false, needs_factors = false;
  for (const auto* c : checks) {
    if (c->placement) {
      needs_placement = true;
      if (!placement)
        throw ConfigError("check " + c->name() + " needs a placement (horizontal or vertical) for P, P1, P2");
      if (*c->placement != *placement)
        throw ConfigError("check " + c->name() + " needs " + std::string(to_string(*c->placement)) +
                          " placement, scenario has " + std::string(to_string(*placement)));
    }
    if (c->placement || c->id.starts_with("prop22")) needs_factors = true;
  }

  const auto points = sample_points(wp, cfg.box, cfg.samples, cfg.seed);
  Rng battery_rng(cfg.seed ^ kBatteryStream);
  const Battery battery = make_battery(wp, cfg.box, battery_rng);

  struct Acc {
    double max = 0.0, sum = 0.0;
    bool nan = false;
    std::size_t argmax = 0;
  };
  std::vector<Acc> acc(checks.size());

  for (std::size_t k = 0; k < points.size(); ++k) {
    const Point& p = points[k];
    if (needs_placement) detail::check_placement(wp, d, *placement, p);
    std::optional<PointContext> ctx;
    try {
      ctx.emplace(wp, d, battery, p, needs_factors);
    } catch (const Error& e) {
      throw GeometryError(std::string(e.what()) + " (while preparing sample point " + format_point(p) + ")");
    }
    for (std::size_t c = 0; c < checks.size(); ++c) {
      std::vector<double> r;
      try {
        r = checks[c]->fn(*ctx, checks[c]->variant);
      } catch (const Error& e) {
        throw GeometryError("check " + checks[c]->name() + " at " + format_point(p) + ": " + e.what());
      }
      double m = 0.0;
      bool nan = false;
      for (double x : r) {
        if (std::isnan(x)) nan = true;
        m = std::max(m, x);
      }
      Acc& a = acc[c];
      if (nan && !a.nan) {
        a.nan = true;
        a.argmax = k;
      }
      if (!a.nan && (k == 0 || m > a.max)) {
        a.max = m;
        a.argmax = k;
      }
      a.sum += m;
    }
  }

  AuditReport report;
  for (std::size_t c = 0; c < checks.size(); ++c) {
    const Acc& a = acc[c];
    CheckRecord rec;
    rec.check = checks[c]->id;
    rec.variant = checks[c]->variant;
    rec.samples = points.size();
    rec.max_residual = a.nan ? std::numeric_limits<double>::quiet_NaN() : a.max;
    rec.mean_residual = a.nan ? std::numeric_limits<double>::quiet_NaN() : a.sum / static_cast<double>(points.size());
    rec.tolerance = cfg.tolerance;
    rec.pass = !a.nan && a.max <= cfg.tolerance;
    rec.argmax_point = points[a.argmax];
    report.records.push_back(std::move(rec));
  }
  return report;
}

/// Ids of the corollary matching a preset and placement; for Levi-Civita the
/// Levi-Civita decomposition and the placement's proposition.
inline std::vector<const CheckSpec*> corollary_checks(PresetId id, Placement placement) {
  std::vector<const CheckSpec*> out;
  for (const auto& c : check_catalog()) {
    if (id == PresetId::levi_civita) {
      if (c.id.starts_with("prop22") || (c.placement == placement && !c.preset)) out.push_back(&c);
    } else if (c.preset == id && c.placement == placement) {
      out.push_back(&c);
    }
  }
  return out;
}

/// Run the items of one corollary with the preset's free parameters drawn at
/// random (seeded) for the placement.
inline AuditReport corollary_suite(PresetId id, Placement placement, const WarpedProduct& wp,
                                   const AuditConfig& cfg) {
  Rng rng(cfg.seed ^ kDataStream);
  const TripathiData d = random_preset(wp, id, placement, cfg.box, rng);
  const auto checks = corollary_checks(id, placement);
  return run_audit(wp, d, placement, checks, cfg);
}

}  // namespace warpconn
