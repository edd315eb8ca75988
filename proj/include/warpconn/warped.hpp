#pragma once

// Warped products M₁ ×_F M₂ materialized as one chart: base coordinates come
// first (indices 0..m−1), fiber coordinates after (m..m+p−1), and the metric
// is the block matrix diag(g₁, F²g₂).

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "warpconn/error.hpp"
#include "warpconn/expr.hpp"
#include "warpconn/geometry.hpp"
#include "warpconn/random.hpp"

namespace warpconn {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Per-coordinate sampling intervals.
using Box = std::vector<Interval>;

enum class Side { base, fiber };

class WarpedProduct {
 public:
  const ChartMetric& base() const noexcept { return base_; }
  const ChartMetric& fiber() const noexcept { return fiber_; }
  const ChartMetric& assembled() const noexcept { return assembled_; }
  /// F over the base coordinates.
  const ScalarExpr& warping() const noexcept { return warp_; }
  /// F∘π over the assembled coordinates.
  const ScalarExpr& warping_lifted() const noexcept { return warp_lifted_; }

  std::size_t base_dim() const noexcept { return base_.dim(); }
  std::size_t fiber_dim() const noexcept { return fiber_.dim(); }
  std::size_t dim() const noexcept { return assembled_.dim(); }
  bool is_base_index(std::size_t i) const noexcept { return i < base_dim(); }

  Point base_part(const Point& p) const {
    check_dim(p);
    return Point(std::vector<double>(p.coords().begin(), p.coords().begin() + base_dim()));
  }
  Point fiber_part(const Point& p) const {
    check_dim(p);
    return Point(std::vector<double>(p.coords().begin() + base_dim(), p.coords().end()));
  }
  Point join(const Point& x, const Point& y) const {
    std::vector<double> c(x.coords().begin(), x.coords().end());
    c.insert(c.end(), y.coords().begin(), y.coords().end());
    return Point(std::move(c));
  }

  /// Index of factor coordinate `i` in the assembled chart.
  std::size_t offset(Side side) const noexcept { return side == Side::base ? 0 : base_dim(); }

  const ChartMetric& factor(Side side) const noexcept { return side == Side::base ? base_ : fiber_; }

  /// The metric F(x)²g₂ that the fiber through a point with base part `x`
  /// inherits from the assembled metric.
  ChartMetric induced_fiber_metric(const Point& x) const {
    const double f = warp_.evaluate(x);
    const auto c = ScalarExpr::constant(fiber_.vars(), f * f);
    const std::size_t n = fiber_dim();
    std::vector<std::vector<ScalarExpr>> rows(n, std::vector<ScalarExpr>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) rows[i][j] = c * fiber_(i, j);
    return ChartMetric(fiber_.vars(), rows);
  }

 private:
  friend WarpedProduct build_warped(const ChartMetric&, const ChartMetric&, const ScalarExpr&,
                                    const std::optional<Box>&);

  void check_dim(const Point& p) const {
    if (p.size() != dim()) throw GeometryError("point dimension does not match the warped product");
  }

  ChartMetric base_, fiber_, assembled_;
  ScalarExpr warp_, warp_lifted_;
};

namespace detail {

inline std::vector<std::variant<std::size_t, double>> shift_map(std::size_t n, std::size_t offset) {
  std::vector<std::variant<std::size_t, double>> map;
  for (std::size_t i = 0; i < n; ++i) map.emplace_back(offset + i);
  return map;
}

}  // namespace detail

/// Points used to validate F > 0 when a base box is supplied: the box centre
/// and a fixed set of uniform draws.
inline std::vector<Point> validation_points(const Box& box, std::size_t count = 32) {
  std::vector<Point> pts;
  std::vector<double> mid;
  for (const auto& iv : box) mid.push_back(0.5 * (iv.lo + iv.hi));
  pts.emplace_back(mid);
  Rng rng(0x5eedf00dULL);
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<double> c;
    for (const auto& iv : box) c.push_back(rng.uniform(iv.lo, iv.hi));
    pts.emplace_back(std::move(c));
  }
  return pts;
}

/// Assemble M₁ ×_F M₂. When `base_box` is given, F is checked positive at
/// validation points inside it.
inline WarpedProduct build_warped(const ChartMetric& base, const ChartMetric& fiber, const ScalarExpr& F,
                                  const std::optional<Box>& base_box = std::nullopt) {
  if (!same_vars(F.vars(), base.vars()))
    throw GeometryError("warping function must be written over the base coordinates only");
  for (const auto& a : base.names())
    for (const auto& b : fiber.names())
      if (a == b) throw GeometryError("coordinate name '" + a + "' appears in both base and fiber");

  WarpedProduct wp;
  wp.base_ = base;
  wp.fiber_ = fiber;
  wp.warp_ = F;

  std::vector<std::string> names = base.names();
  names.insert(names.end(), fiber.names().begin(), fiber.names().end());
  const VarList vars = make_vars(std::move(names));
  const std::size_t m = base.dim(), n = vars->size();

  const auto base_map = detail::shift_map(m, 0);
  const auto fiber_map = detail::shift_map(fiber.dim(), m);
  wp.warp_lifted_ = F.rebind(vars, base_map);
  const ScalarExpr f2 = pow(wp.warp_lifted_, ScalarExpr::constant(vars, 2.0));
  const ScalarExpr zero = ScalarExpr::constant(vars, 0.0);

  std::vector<std::vector<ScalarExpr>> rows(n, std::vector<ScalarExpr>(n, zero));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) rows[i][j] = base(i, j).rebind(vars, base_map);
  for (std::size_t i = m; i < n; ++i)
    for (std::size_t j = m; j < n; ++j) rows[i][j] = f2 * fiber(i - m, j - m).rebind(vars, fiber_map);
  wp.assembled_ = ChartMetric(vars, rows);

  if (base_box) {
    if (base_box->size() != m) throw ConfigError("base sampling box must have one interval per base coordinate");
    for (const Point& x : validation_points(*base_box)) {
      const double f = F.evaluate(x);
      if (!(f > 0.0))
        throw GeometryError("warping function '" + F.str() + "' is not positive at " + format_point(x) +
                            " (value " + detail::format_number(f) + ")");
    }
  }
  return wp;
}

/// Scalar h∘π (or h∘σ) on the assembled chart.
inline ScalarExpr lift(const WarpedProduct& wp, Side side, const ScalarExpr& h) {
  const ChartMetric& f = wp.factor(side);
  if (!same_vars(h.vars(), f.vars()))
    throw GeometryError("scalar '" + h.str() + "' is not written over the " +
                        (side == Side::base ? std::string("base") : std::string("fiber")) + " coordinates");
  return h.rebind(wp.assembled().vars(), detail::shift_map(f.dim(), wp.offset(side)));
}

/// Lift of a factor vector field: zero components on the other factor.
inline VectorField lift(const WarpedProduct& wp, Side side, const VectorField& x) {
  const ChartMetric& f = wp.factor(side);
  if (!same_vars(x.vars(), f.vars()))
    throw GeometryError(std::string("vector field does not live on the ") +
                        (side == Side::base ? "base" : "fiber"));
  const VarList& vars = wp.assembled().vars();
  std::vector<ScalarExpr> c(wp.dim(), ScalarExpr::constant(vars, 0.0));
  const auto map = detail::shift_map(f.dim(), wp.offset(side));
  for (std::size_t i = 0; i < f.dim(); ++i) c[wp.offset(side) + i] = x[i].rebind(vars, map);
  return VectorField(vars, std::move(c));
}

/// Embed a factor vector into the assembled tangent space.
inline std::vector<double> embed(const WarpedProduct& wp, Side side, const std::vector<double>& v) {
  std::vector<double> out(wp.dim(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) out[wp.offset(side) + i] = v[i];
  return out;
}

struct Split {
  std::vector<double> nor;  // horizontal part
  std::vector<double> tan;  // vertical part
};

/// Horizontal/vertical projections. The metric is block diagonal, so these
/// are exact component masks and do not depend on the point.
inline Split split(const WarpedProduct& wp, std::span<const double> v) {
  if (v.size() != wp.dim()) throw GeometryError("vector dimension does not match the warped product");
  Split s{std::vector<double>(v.size(), 0.0), std::vector<double>(v.size(), 0.0)};
  for (std::size_t i = 0; i < v.size(); ++i) (wp.is_base_index(i) ? s.nor : s.tan)[i] = v[i];
  return s;
}

inline std::vector<double> nor(const WarpedProduct& wp, std::span<const double> v) { return split(wp, v).nor; }
inline std::vector<double> tan(const WarpedProduct& wp, std::span<const double> v) { return split(wp, v).tan; }

/// max |grad(h∘π) − lift(grad h)| at p.
inline double grad_lift_check(const WarpedProduct& wp, const ScalarExpr& h, const Point& p) {
  const auto lhs = gradient_at(wp.assembled(), lift(wp, Side::base, h), p);
  const auto rhs = embed(wp, Side::base, gradient_at(wp.base(), h, wp.base_part(p)));
  return max_abs_diff(lhs, rhs);
}

/// Residuals of the four Levi-Civita decomposition statements.
struct ONeillResiduals {
  double lift_base = 0.0;   // ∇̊_X Y = lift of the base ∇̊_X Y
  double mixed = 0.0;       // ∇̊_X V = ∇̊_V X = (XF/F)V
  double normal = 0.0;      // nor ∇̊_V W = −(g(V,W)/F) grad F
  double tangential = 0.0;  // tan ∇̊_V W = lift of the fiber ∇̊_V W

  double max() const { return std::max(std::max(lift_base, mixed), std::max(normal, tangential)); }
};

inline ONeillResiduals oneill_residuals_at(const WarpedProduct& wp, const VectorField& x, const VectorField& y,
                                           const VectorField& v, const VectorField& w, const Point& p) {
  const Point bp = wp.base_part(p), fp = wp.fiber_part(p);
  const auto gamma = christoffel_at(wp.assembled(), p);
  const auto s = sample_metric<double>(wp.assembled(), p);

  const auto xl = eval_field(lift(wp, Side::base, x), p), yl = eval_field(lift(wp, Side::base, y), p);
  const auto vl = eval_field(lift(wp, Side::fiber, v), p), wl = eval_field(lift(wp, Side::fiber, w), p);

  const Jet fj = wp.warping_lifted().eval_jet(p, 1);
  const double F = fj.value();
  const double xf_over_f = directional(values(xl), fj) / F;
  const auto grad_f = gradient_at(wp.assembled(), wp.warping_lifted(), p);

  ONeillResiduals r;

  const auto base_cov = cov_deriv(christoffel_at(wp.base(), bp), eval_field(x, bp), eval_field(y, bp));
  r.lift_base = max_abs_diff(cov_deriv(gamma, xl, yl), embed(wp, Side::base, base_cov));

  std::vector<double> expected = values(vl);
  for (double& c : expected) c *= xf_over_f;
  r.mixed = std::max(max_abs_diff(cov_deriv(gamma, xl, vl), expected),
                     max_abs_diff(cov_deriv(gamma, vl, xl), expected));

  const auto vw = cov_deriv(gamma, vl, wl);
  const double gvw = bilinear(s.g, values(vl), values(wl));
  std::vector<double> normal = nor(wp, vw);
  for (std::size_t i = 0; i < normal.size(); ++i) normal[i] += gvw / F * grad_f[i];
  r.normal = max_abs(normal);

  // Levi-Civita is unchanged by the constant rescaling F(x)², so g₂ itself
  // gives the fiber connection.
  const auto fiber_cov = cov_deriv(christoffel_at(wp.fiber(), fp), eval_field(v, fp), eval_field(w, fp));
  r.tangential = max_abs_diff(tan(wp, vw), embed(wp, Side::fiber, fiber_cov));
  return r;
}

}  // namespace warpconn
