// Semi-symmetric metric connection on the polar plane, and its torsion.
#include <cstdio>

#include "warpconn/fixtures.hpp"
#include "warpconn/tripathi.hpp"

int main() {
  using namespace warpconn;
  const auto fx = fixtures::polar();
  const ChartMetric& m = fx.wp.assembled();
  const auto& vars = m.vars();

  PresetParams params;
  params.P = VectorField::from_strings(vars, {"1", "0"});
  const TripathiData d = preset(PresetId::semi_symmetric_metric, params, m);

  const Point p{2.0, 1.0};
  const auto gamma = coefficients_at(m, d, p);
  std::printf("Gamma^r_{theta theta} = %g\n", gamma(0, 1, 1));

  const auto dr = VectorField::coordinate(vars, 0), dth = VectorField::coordinate(vars, 1);
  const auto t = torsion_at(tripathi_connection(m, d), dr, dth, p);
  std::printf("T(d_r, d_theta) = (%g, %g)\n", t[0], t[1]);
}
