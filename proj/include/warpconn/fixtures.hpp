#pragma once

// Warped products with known closed-form geometry, plus sampling boxes that
// keep away from their coordinate singularities.

#include <string>
#include <vector>

#include "warpconn/expr.hpp"
#include "warpconn/geometry.hpp"
#include "warpconn/warped.hpp"

namespace warpconn::fixtures {

struct Fixture {
  std::string name;
  WarpedProduct wp;
  Box base_box, fiber_box;

  /// Base box followed by fiber box, matching the assembled coordinates.
  Box box() const {
    Box b = base_box;
    b.insert(b.end(), fiber_box.begin(), fiber_box.end());
    return b;
  }
};

namespace detail {

inline Fixture line_over_circle(std::string name, const std::string& warping, Interval r_box) {
  const auto base_vars = make_vars({"r"});
  const auto fiber_vars = make_vars({"theta"});
  const auto base = ChartMetric::from_strings(base_vars, {{"1"}});
  const auto fiber = ChartMetric::from_strings(fiber_vars, {{"1"}});
  Box bb{r_box}, fb{{0.0, 6.28}};
  return {std::move(name), build_warped(base, fiber, parse(warping, base_vars), bb), bb, fb};
}

}  // namespace detail

/// Euclidean plane in polar form: diag(1, r²).
inline Fixture polar() { return detail::line_over_circle("polar", "r", {0.5, 3.0}); }

/// Hyperbolic plane: diag(1, e^{2r}), curvature −1.
inline Fixture hyperbolic() { return detail::line_over_circle("hyperbolic", "exp(r)", {-1.0, 1.0}); }

/// Round unit sphere: diag(1, sin²r), curvature +1.
inline Fixture sphere() { return detail::line_over_circle("sphere", "sin(r)", {0.3, 2.8}); }

/// Two-dimensional base and fiber, both non-diagonal, with a warping function
/// depending on both base coordinates. Big enough that skew parts of φ on
/// each factor are nonzero.
inline Fixture generic4d() {
  const auto base_vars = make_vars({"x", "y"});
  const auto fiber_vars = make_vars({"s", "t"});
  const auto base = ChartMetric::from_strings(base_vars, {{"2 + sin(y)", "0.5*x"}, {"0.5*x", "1 + x^2"}});
  const auto fiber = ChartMetric::from_strings(fiber_vars, {{"1", "0.2*cos(t)"}, {"0.2*cos(t)", "1 + s^2"}});
  Box bb{{0.2, 1.2}, {0.0, 3.0}}, fb{{0.1, 1.0}, {0.0, 3.0}};
  return {"generic4d", build_warped(base, fiber, parse("1 + x^2 + 0.5*sin(y)", base_vars), bb), bb, fb};
}

inline std::vector<Fixture> all() { return {polar(), hyperbolic(), sphere(), generic4d()}; }

/// The three surfaces of revolution.
inline std::vector<Fixture> surfaces() { return {polar(), hyperbolic(), sphere()}; }

}  // namespace warpconn::fixtures
