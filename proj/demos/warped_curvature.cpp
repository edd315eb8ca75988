// Sectional curvature of the three surfaces of revolution.
#include <cstdio>

#include "warpconn/fixtures.hpp"

int main() {
  using namespace warpconn;
  for (const auto& fx : fixtures::surfaces()) {
    const ChartMetric& m = fx.wp.assembled();
    const auto x = VectorField::coordinate(m.vars(), 0), y = VectorField::coordinate(m.vars(), 1);
    const Point p{0.5 * (fx.base_box[0].lo + fx.base_box[0].hi), 1.0};
    std::printf("%-10s K = % .12f\n", fx.name.c_str(), sectional_curvature_at(levi_civita(m), m, x, y, p));
  }
}
