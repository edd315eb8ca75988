#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "support.hpp"
#include "warpconn/fixtures.hpp"
#include "warpconn/geometry.hpp"
#include "warpconn/tripathi.hpp"

using namespace warpconn;
using testing_support::random_expression;

namespace {

const VarList polar_vars = make_vars({"r", "theta"});
const ChartMetric polar_metric = ChartMetric::from_strings(polar_vars, {{"1", "0"}, {"0", "r^2"}});
const ChartMetric hyperbolic_metric = ChartMetric::from_strings(polar_vars, {{"1", "0"}, {"0", "exp(2*r)"}});

VectorField field(const VarList& vars, std::vector<std::string> text) { return VectorField::from_strings(vars, text); }

VectorField random_vector_field(Rng& rng, const std::vector<std::string>& names, const VarList& vars) {
  std::vector<ScalarExpr> c;
  for (std::size_t i = 0; i < vars->size(); ++i) c.push_back(parse(random_expression(rng, names, 2), vars));
  return VectorField(vars, c);
}

// A non-diagonal three-dimensional metric, positive definite on the box.
const VarList xyz = make_vars({"x", "y", "z"});
const ChartMetric curved3 = ChartMetric::from_strings(
    xyz, {{"2 + sin(y)", "0.3*x", "0.1*z"}, {"0.3*x", "1.5 + x^2", "0.2*cos(x*z)"}, {"0.1*z", "0.2*cos(x*z)", "2 + y^2"}});
const Box curved3_box{{-1.0, 1.0}, {-1.0, 1.0}, {-1.0, 1.0}};

}  // namespace

TEST(Metric, PolarValuesAndInverse) {
  const auto m = metric_at(polar_metric, {2.0, 0.3});
  EXPECT_DOUBLE_EQ(m.g(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m.g(1, 1), 4.0);
  EXPECT_DOUBLE_EQ(m.g(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(m.ginv(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m.ginv(1, 1), 0.25);
  EXPECT_DOUBLE_EQ(m.ginv(1, 0), 0.0);
}

TEST(Metric, IdentityIsSelfInverse) {
  const auto id = ChartMetric::from_strings(xyz, {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}});
  const auto m = metric_at(id, {0.4, -3.0, 7.0});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(m.g(i, j), i == j ? 1.0 : 0.0);
      EXPECT_EQ(m.ginv(i, j), i == j ? 1.0 : 0.0);
    }
}

TEST(Metric, DegenerateIsRejected) {
  const auto m = ChartMetric::from_strings(polar_vars, {{"1", "0"}, {"0", "0"}});
  EXPECT_THROW(metric_at(m, {1.0, 1.0}), GeometryError);
  const auto indefinite = ChartMetric::from_strings(polar_vars, {{"1", "2"}, {"2", "1"}});
  EXPECT_THROW(metric_at(indefinite, {1.0, 1.0}), GeometryError);
}

TEST(Metric, AsymmetricInputIsRejected) {
  EXPECT_THROW(ChartMetric::from_strings(polar_vars, {{"1", "r"}, {"theta", "1"}}), GeometryError);
}

TEST(Metric, InverseTimesMetricIsIdentity) {
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    const auto m = metric_at(curved3, testing_support::random_point(rng, curved3_box));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        double acc = 0.0;
        for (std::size_t l = 0; l < 3; ++l) acc += m.g(i, l) * m.ginv(l, j);
        EXPECT_NEAR(acc, i == j ? 1.0 : 0.0, 1e-14);
      }
  }
}

TEST(Christoffel, Polar) {
  const auto G = christoffel_at(polar_metric, {2.0, 1.0});
  EXPECT_DOUBLE_EQ(G(0, 1, 1), -2.0);
  EXPECT_DOUBLE_EQ(G(1, 0, 1), 0.5);
  EXPECT_DOUBLE_EQ(G(1, 1, 0), 0.5);
  EXPECT_EQ(G(0, 0, 0), 0.0);
  EXPECT_EQ(G(0, 0, 1), 0.0);
  EXPECT_EQ(G(0, 1, 0), 0.0);
  EXPECT_EQ(G(1, 0, 0), 0.0);
  EXPECT_EQ(G(1, 1, 1), 0.0);
}

TEST(Christoffel, ConstantMetricIsFlat) {
  const auto m = ChartMetric::from_strings(polar_vars, {{"2", "0.5"}, {"0.5", "3"}});
  const auto G = christoffel_at(m, {1.7, -0.2});
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(G(k, i, j), 0.0);
}

TEST(Christoffel, Hyperbolic) {
  const auto G = christoffel_at(hyperbolic_metric, {0.0, 0.0});
  EXPECT_DOUBLE_EQ(G(0, 1, 1), -1.0);
  EXPECT_DOUBLE_EQ(G(1, 0, 1), 1.0);
}

TEST(Christoffel, SymmetricInLowerIndicesExactly) {
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const auto G = christoffel_at(curved3, testing_support::random_point(rng, curved3_box));
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(G(a, i, j), G(a, j, i));
  }
}

TEST(Bracket, CoordinateFieldsCommute) {
  const auto b = lie_bracket_at(VectorField::coordinate(polar_vars, 0), VectorField::coordinate(polar_vars, 1),
                                {2.0, 1.0});
  EXPECT_EQ(b, (std::vector<double>{0.0, 0.0}));
}

TEST(Bracket, RadialAgainstScaledAngular) {
  const auto b = lie_bracket_at(field(polar_vars, {"1", "0"}), field(polar_vars, {"0", "r"}), {2.0, 1.0});
  EXPECT_DOUBLE_EQ(b[0], 0.0);
  EXPECT_DOUBLE_EQ(b[1], 1.0);
}

TEST(Bracket, Antisymmetric) {
  Rng rng(3);
  const std::vector<std::string> names{"x", "y", "z"};
  for (int k = 0; k < 100; ++k) {
    const auto X = random_vector_field(rng, names, xyz), Y = random_vector_field(rng, names, xyz);
    const Point p = testing_support::random_point(rng, curved3_box);
    const auto a = lie_bracket_at(X, Y, p), b = lie_bracket_at(Y, X, p);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a[i], -b[i]);
  }
}

TEST(CovariantDerivative, PolarRadialOfAngular) {
  const auto v = cov_deriv_at(levi_civita(polar_metric), VectorField::coordinate(polar_vars, 0),
                              VectorField::coordinate(polar_vars, 1), {2.0, 1.0});
  EXPECT_DOUBLE_EQ(v[0], 0.0);
  EXPECT_DOUBLE_EQ(v[1], 0.5);
}

TEST(CovariantDerivative, ZeroFieldGivesZero) {
  Rng rng(4);
  const auto c = levi_civita(curved3);
  const std::vector<std::string> names{"x", "y", "z"};
  const auto v = cov_deriv_at(c, random_vector_field(rng, names, xyz), VectorField::zero(xyz), {0.2, 0.3, -0.4});
  for (double x : v) EXPECT_EQ(x, 0.0);
}

TEST(CovariantDerivative, LeibnizRule) {
  Rng rng(5);
  const std::vector<std::string> names{"x", "y", "z"};
  const auto c = levi_civita(curved3);
  for (int k = 0; k < 50; ++k) {
    const auto X = random_vector_field(rng, names, xyz), Y = random_vector_field(rng, names, xyz);
    const auto f = parse(random_expression(rng, names, 2), xyz);
    const Point p = testing_support::random_point(rng, curved3_box);
    const auto lhs = cov_deriv_at(c, X, f * Y, p);
    const auto plain = cov_deriv_at(c, X, Y, p);
    const double xf = directional(values(eval_field(X, p)), f.eval_jet(p, 1));
    const double fv = f.evaluate(p);
    const auto y = values(eval_field(Y, p));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(lhs[i] - xf * y[i] - fv * plain[i], 0.0, 1e-10);
  }
}

TEST(CovariantDerivative, TensorialInDirection) {
  Rng rng(6);
  const std::vector<std::string> names{"x", "y", "z"};
  const auto c = levi_civita(curved3);
  for (int k = 0; k < 50; ++k) {
    const auto X = random_vector_field(rng, names, xyz), Y = random_vector_field(rng, names, xyz);
    const auto f = parse(random_expression(rng, names, 2), xyz);
    const Point p = testing_support::random_point(rng, curved3_box);
    const auto scaled = cov_deriv_at(c, f * X, Y, p);
    const auto plain = cov_deriv_at(c, X, Y, p);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(scaled[i], f.evaluate(p) * plain[i], 1e-10);
  }
}

TEST(CovariantDerivative, KoszulConsistency) {
  Rng rng(7);
  const std::vector<std::string> names{"x", "y", "z"};
  const auto c = levi_civita(curved3);
  for (int k = 0; k < 50; ++k) {
    const auto X = random_vector_field(rng, names, xyz), Y = random_vector_field(rng, names, xyz),
               Z = random_vector_field(rng, names, xyz);
    const Point p = testing_support::random_point(rng, curved3_box);
    const auto s = sample_metric<double>(curved3, p);
    const double lhs = 2.0 * bilinear(s.g, cov_deriv_at(c, X, Y, p), values(eval_field(Z, p)));
    const double rhs = koszul_rhs(metric_jets(s), eval_field(X, p), eval_field(Y, p), eval_field(Z, p));
    EXPECT_NEAR(lhs, rhs, 1e-9);
  }
}

TEST(Gradient, Examples) {
  const Point p{2.0, 0.4};
  EXPECT_EQ(gradient_at(polar_metric, parse("r", polar_vars), p), (std::vector<double>{1.0, 0.0}));
  const auto gt = gradient_at(polar_metric, parse("theta", polar_vars), p);
  EXPECT_DOUBLE_EQ(gt[0], 0.0);
  EXPECT_DOUBLE_EQ(gt[1], 0.25);
  EXPECT_EQ(gradient_at(polar_metric, parse("3.5", polar_vars), p), (std::vector<double>{0.0, 0.0}));
}

TEST(SymSkewSplit, Examples) {
  const VarList v = make_vars({"a", "b"});
  const auto id = ChartMetric::from_strings(v, {{"1", "0"}, {"0", "1"}});
  const Point p{0.3, 0.4};

  const auto s1 = sym_skew_split_at(curved3, Tensor11Field::identity(xyz), {0.1, 0.2, 0.3});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(s1.phi1(i, j), i == j ? 1.0 : 0.0, 1e-15);
      EXPECT_NEAR(s1.phi2(i, j), 0.0, 1e-15);
    }

  const auto s2 = sym_skew_split_at(id, Tensor11Field::from_strings(v, {{"0", "1"}, {"-1", "0"}}), p);
  EXPECT_EQ(s2.phi1(0, 1), 0.0);
  EXPECT_EQ(s2.phi1(1, 0), 0.0);
  EXPECT_EQ(s2.phi2(0, 1), 1.0);
  EXPECT_EQ(s2.phi2(1, 0), -1.0);

  const auto s3 = sym_skew_split_at(id, Tensor11Field::from_strings(v, {{"0", "1"}, {"0", "0"}}), p);
  EXPECT_EQ(s3.phi1(0, 1), 0.5);
  EXPECT_EQ(s3.phi1(1, 0), 0.5);
  EXPECT_EQ(s3.phi2(0, 1), 0.5);
  EXPECT_EQ(s3.phi2(1, 0), -0.5);
  EXPECT_EQ(s3.phi1(0, 0), 0.0);
  EXPECT_EQ(s3.phi2(1, 1), 0.0);
}

TEST(SymSkewSplit, PartsAreSymmetricSkewAndSumToPhi) {
  Rng rng(8);
  const std::vector<std::string> names{"x", "y", "z"};
  for (int k = 0; k < 100; ++k) {
    std::vector<ScalarExpr> e;
    for (int i = 0; i < 9; ++i) e.push_back(parse(random_expression(rng, names, 2), xyz));
    const Tensor11Field phi(xyz, e);
    const Point p = testing_support::random_point(rng, curved3_box);
    const auto s = sym_skew_split_at(curved3, phi, p);
    const auto ph = eval_as<double>(phi, p);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_NEAR(s.Phi1(i, j), s.Phi1(j, i), 1e-12);
        EXPECT_NEAR(s.Phi2(i, j), -s.Phi2(j, i), 1e-12);
        EXPECT_NEAR(s.phi1(i, j) + s.phi2(i, j), ph(i, j), 1e-12);
      }
  }
}

TEST(Torsion, LeviCivitaIsTorsionFree) {
  Rng rng(9);
  const std::vector<std::string> names{"x", "y", "z"};
  const auto c = levi_civita(curved3);
  for (int k = 0; k < 50; ++k) {
    const auto t = torsion_at(c, random_vector_field(rng, names, xyz), random_vector_field(rng, names, xyz),
                              testing_support::random_point(rng, curved3_box));
    for (double x : t) EXPECT_NEAR(x, 0.0, 1e-10);
  }
}

TEST(Torsion, SemiSymmetricMetricOnPolar) {
  PresetParams params;
  params.P = field(polar_vars, {"1", "0"});
  const auto d = preset(PresetId::semi_symmetric_metric, params, polar_metric);
  const auto t = torsion_at(tripathi_connection(polar_metric, d), VectorField::coordinate(polar_vars, 0),
                            VectorField::coordinate(polar_vars, 1), {2.0, 1.0});
  EXPECT_NEAR(t[0], 0.0, 1e-15);
  EXPECT_NEAR(t[1], -1.0, 1e-15);
}

TEST(Torsion, VanishesOnEqualArguments) {
  Rng rng(10);
  const std::vector<std::string> names{"x", "y", "z"};
  for (int k = 0; k < 50; ++k) {
    TripathiData d = TripathiData::zero(xyz);
    d.P = random_vector_field(rng, names, xyz);
    std::vector<ScalarExpr> e;
    for (int i = 0; i < 9; ++i) e.push_back(parse(random_expression(rng, names, 1), xyz));
    d.phi = Tensor11Field(xyz, e);
    const auto X = random_vector_field(rng, names, xyz);
    const auto t = torsion_at(tripathi_connection(curved3, d), X, X, testing_support::random_point(rng, curved3_box));
    for (double x : t) EXPECT_NEAR(x, 0.0, 1e-12);
  }
}

TEST(NonMetricity, MetricConnectionsGiveZero) {
  Rng rng(11);
  const std::vector<std::string> names{"x", "y", "z"};
  PresetParams params;
  params.P = random_vector_field(rng, names, xyz);
  const auto yano = tripathi_connection(curved3, preset(PresetId::semi_symmetric_metric, params, curved3));
  const auto lc = levi_civita(curved3);
  for (int k = 0; k < 50; ++k) {
    const auto X = random_vector_field(rng, names, xyz), Y = random_vector_field(rng, names, xyz),
               Z = random_vector_field(rng, names, xyz);
    const Point p = testing_support::random_point(rng, curved3_box);
    EXPECT_NEAR(nonmetricity_at(lc, curved3, X, Y, Z, p), 0.0, 1e-10);
    EXPECT_NEAR(nonmetricity_at(yano, curved3, X, Y, Z, p), 0.0, 1e-10);
  }
}

TEST(NonMetricity, SemiSymmetricNonMetricOnPolar) {
  PresetParams params;
  params.P = field(polar_vars, {"1", "0"});
  const auto d = preset(PresetId::semi_symmetric_non_metric, params, polar_metric);
  const auto dr = VectorField::coordinate(polar_vars, 0), dth = VectorField::coordinate(polar_vars, 1);
  EXPECT_NEAR(nonmetricity_at(tripathi_connection(polar_metric, d), polar_metric, dth, dr, dth, {2.0, 1.0}), -4.0,
              1e-14);
}

TEST(Curvature, PolarPlaneIsFlat) {
  Rng rng(12);
  const auto c = levi_civita(polar_metric);
  for (int k = 0; k < 100; ++k) {
    const Point p{rng.uniform(0.5, 3.0), rng.uniform(0.0, 6.28)};
    EXPECT_LE(riemann_at(c, p).max_abs(), 1e-8);
  }
}

TEST(Curvature, HyperbolicAndSphereSectional) {
  const auto dr = VectorField::coordinate(polar_vars, 0), dth = VectorField::coordinate(polar_vars, 1);
  const auto sphere = ChartMetric::from_strings(polar_vars, {{"1", "0"}, {"0", "sin(r)^2"}});
  Rng rng(13);
  for (int k = 0; k < 100; ++k) {
    const double th = rng.uniform(0.0, 6.28);
    const Point ph{rng.uniform(-1.0, 1.0), th}, ps{rng.uniform(0.3, 2.8), th};
    EXPECT_NEAR(sectional_curvature_at(levi_civita(hyperbolic_metric), hyperbolic_metric, dr, dth, ph), -1.0, 1e-8);
    EXPECT_NEAR(sectional_curvature_at(levi_civita(sphere), sphere, dr, dth, ps), 1.0, 1e-8);
  }
}

TEST(Curvature, AntisymmetricInFirstPair) {
  Rng rng(14);
  const std::vector<std::string> names{"x", "y", "z"};
  TripathiData d = TripathiData::zero(xyz);
  d.P = random_vector_field(rng, names, xyz);
  d.f1 = parse("0.3*x", xyz);
  const auto c = tripathi_connection(curved3, d);
  for (int k = 0; k < 30; ++k) {
    const auto X = random_vector_field(rng, names, xyz), Y = random_vector_field(rng, names, xyz),
               Z = random_vector_field(rng, names, xyz);
    const Point p = testing_support::random_point(rng, curved3_box);
    const auto a = curvature_at(c, X, Y, Z, p), b = curvature_at(c, Y, X, Z, p);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(a[i], -b[i], 1e-12);
  }
}

TEST(Curvature, FirstBianchiForLeviCivita) {
  Rng rng(15);
  const std::vector<std::string> names{"x", "y", "z"};
  const auto c = levi_civita(curved3);
  for (int k = 0; k < 30; ++k) {
    const auto X = random_vector_field(rng, names, xyz), Y = random_vector_field(rng, names, xyz),
               Z = random_vector_field(rng, names, xyz);
    const Point p = testing_support::random_point(rng, curved3_box);
    const auto a = curvature_at(c, X, Y, Z, p), b = curvature_at(c, Y, Z, X, p), e = curvature_at(c, Z, X, Y, p);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(a[i] + b[i] + e[i], 0.0, 1e-8);
  }
}

// R(X,Y)Z from the tensor agrees with [∇_X,∇_Y]Z − ∇_[X,Y]Z on coordinate
// fields, where the bracket vanishes; the commutator is formed from
// finite differences of the coefficient values.
TEST(Curvature, TensorMatchesDifferencedCoefficients) {
  const auto c = levi_civita(curved3);
  Rng rng(16);
  for (int k = 0; k < 10; ++k) {
    const Point p = testing_support::random_point(rng, curved3_box);
    const auto R = riemann_at(c, p);
    const auto G = c.coefficients(p);
    const double h = 1e-5;
    for (std::size_t l = 0; l < 3; ++l)
      for (std::size_t kk = 0; kk < 3; ++kk)
        for (std::size_t i = 0; i < 3; ++i)
          for (std::size_t j = 0; j < 3; ++j) {
            const double di = (c.coefficients(p.shifted(i, h))(l, j, kk) - c.coefficients(p.shifted(i, -h))(l, j, kk)) / (2 * h);
            const double dj = (c.coefficients(p.shifted(j, h))(l, i, kk) - c.coefficients(p.shifted(j, -h))(l, i, kk)) / (2 * h);
            double v = di - dj;
            for (std::size_t m = 0; m < 3; ++m) v += G(l, i, m) * G(m, j, kk) - G(l, j, m) * G(m, i, kk);
            EXPECT_NEAR(R(l, kk, i, j), v, 1e-7);
          }
  }
}

TEST(Jets, MetricGradientsMatchCentralDifferences) {
  Rng rng(17);
  for (const auto& fx : fixtures::all()) {
    const ChartMetric& m = fx.wp.assembled();
    const Box box = fx.box();
    for (int k = 0; k < 20; ++k) {
      const Point p = testing_support::random_point(rng, box);
      const auto s = sample_metric<double>(m, p);
      for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
          for (std::size_t a = 0; a < m.dim(); ++a) {
            const double fd = fd_derivative(m(i, j), p, a, 1e-5);
            EXPECT_LE(std::abs(s.dg[a](i, j) - fd), 1e-6 * std::max(1.0, std::abs(fd))) << fx.name;
          }
    }
  }
}
