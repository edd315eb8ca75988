#pragma once

// Shared helpers for the unit tests: random expressions with safe domains and
// box sampling.

#include <cmath>
#include <string>
#include <vector>

#include "warpconn/expr.hpp"
#include "warpconn/random.hpp"
#include "warpconn/warped.hpp"

namespace testing_support {

using warpconn::Rng;

/// Random expression text over `vars`. Every subterm stays finite and inside
/// its domain for coordinates of magnitude up to about 3.
inline std::string random_expression(Rng& rng, const std::vector<std::string>& vars, int depth) {
  auto coef = [&] { return warpconn::detail::format_number(std::round(rng.uniform(-2.0, 2.0) * 100.0) / 100.0); };
  auto var = [&] { return vars[static_cast<std::size_t>(rng.uniform(0.0, static_cast<double>(vars.size())))]; };
  if (depth <= 0) return rng.uniform(0.0, 1.0) < 0.6 ? var() : coef();
  const std::string a = random_expression(rng, vars, depth - 1);
  const std::string b = random_expression(rng, vars, depth - 1);
  switch (static_cast<int>(rng.uniform(0.0, 12.0))) {
    case 0: return "(" + a + ") + (" + b + ")";
    case 1: return "(" + a + ") - " + b;
    case 2: return "(" + a + ")*(" + b + ")";
    case 3: return "(" + a + ")/(2 + (" + b + ")^2)";
    case 4: return "sin(" + a + ")";
    case 5: return "cos(" + a + ")*" + coef();
    case 6: return "exp(0.1*sin(" + a + "))";
    case 7: return "log(1.5 + cos(" + a + "))";
    case 8: return "sqrt(1 + (" + b + ")^2)";
    case 9: return "tanh(" + a + ") - sinh(0.2*cos(" + b + "))";
    case 10: return "-(" + a + ")^2 + cosh(0.3*sin(" + b + "))";
    default: return "tan(0.5*sin(" + a + "))^3";
  }
}

inline warpconn::Point random_point(Rng& rng, const warpconn::Box& box) {
  std::vector<double> c;
  for (const auto& iv : box) c.push_back(rng.uniform(iv.lo, iv.hi));
  return warpconn::Point(std::move(c));
}

}  // namespace testing_support
