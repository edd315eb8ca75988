#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "support.hpp"
#include "warpconn/audit.hpp"
#include "warpconn/fixtures.hpp"

using namespace warpconn;

namespace {

AuditConfig config_for(const fixtures::Fixture& fx, std::size_t samples = 100, std::uint64_t seed = 42) {
  AuditConfig cfg;
  cfg.box = fx.box();
  cfg.samples = samples;
  cfg.seed = seed;
  return cfg;
}

std::vector<const CheckSpec*> checks(std::initializer_list<std::string> pats) {
  const std::vector<std::string> v(pats);
  return select_checks(v);
}

const CheckRecord& record(const AuditReport& r, const std::string& check, Variant v = Variant::as_printed) {
  const auto* rec = r.find(check, v);
  if (!rec) throw std::runtime_error("no record for " + check);
  return *rec;
}

}  // namespace

TEST(Sampling, DeterministicAndInsideTheBox) {
  const auto fx = fixtures::polar();
  const Box box{{0.5, 3.0}, {0.0, 6.28}};
  const auto a = sample_points(fx.wp, box, 100, 42), b = sample_points(fx.wp, box, 100, 42);
  ASSERT_EQ(a.size(), 100u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(std::vector<double>(a[k].coords().begin(), a[k].coords().end()),
              std::vector<double>(b[k].coords().begin(), b[k].coords().end()));
    EXPECT_GT(a[k][0], 0.5);
    EXPECT_LT(a[k][0], 3.0);
    EXPECT_GT(a[k][1], 0.0);
    EXPECT_LT(a[k][1], 6.28);
  }
  const auto c = sample_points(fx.wp, box, 100, 43);
  EXPECT_NE(a[0][0], c[0][0]);
}

TEST(Sampling, NonPositiveWarpingNamesThePoint) {
  const auto fx = fixtures::polar();
  try {
    sample_points(fx.wp, {{-1.0, 3.0}, {0.0, 6.28}}, 100, 42);
    FAIL();
  } catch (const GeometryError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("not positive"), std::string::npos);
    EXPECT_NE(msg.find("("), std::string::npos);
  }
}

TEST(Sampling, BadBoxes) {
  const auto fx = fixtures::polar();
  EXPECT_THROW(sample_points(fx.wp, {{0.5, 3.0}}, 10, 1), ConfigError);
  EXPECT_THROW(sample_points(fx.wp, {{0.5, 3.0}, {1.0, 1.0}}, 10, 1), ConfigError);
  EXPECT_THROW(sample_points(fx.wp, {{0.5, 3.0}, {0.0, INFINITY}}, 10, 1), ConfigError);
  EXPECT_THROW(sample_points(fx.wp, fx.box(), 0, 1), ConfigError);
}

TEST(Catalog, SelectionPatterns) {
  EXPECT_EQ(checks({"all"}).size(), check_catalog().size());
  EXPECT_EQ(checks({"thm1.*"}).size(), 3u);
  EXPECT_EQ(checks({"prop31.3"}).size(), 2u);
  EXPECT_EQ(checks({"prop31.3.as-printed"}).size(), 1u);
  EXPECT_EQ(checks({"prop31"}).size(), 5u);
  EXPECT_EQ(checks({"prop32"}).size(), 9u);
  EXPECT_EQ(checks({"thm1.torsion", "thm1.torsion"}).size(), 1u);
  EXPECT_THROW(checks({"prop99"}), ConfigError);
  EXPECT_THROW(checks({"prop3"}), ConfigError);
  ASSERT_NE(find_check("cor45.3.as-derived"), nullptr);
  EXPECT_EQ(find_check("cor45.3.as-derived")->variant, Variant::as_derived);
  EXPECT_EQ(find_check("lemma21.as-printed"), nullptr);
  EXPECT_EQ(find_check("lemma21")->name(), "lemma21");
}

TEST(Catalog, EveryIdIsPresent) {
  std::vector<std::string> ids{"thm1.torsion", "thm1.nonmetricity", "thm1.uniqueness", "lemma21"};
  for (int i = 1; i <= 4; ++i) ids.push_back("prop22." + std::to_string(i));
  for (int i = 1; i <= 4; ++i) ids.push_back("prop31." + std::to_string(i));
  for (int i = 1; i <= 6; ++i) ids.push_back("prop32." + std::to_string(i));
  const int items[] = {4, 6, 4, 5, 4, 6, 4, 6};
  for (int c = 0; c < 8; ++c)
    for (int i = 1; i <= items[c]; ++i) ids.push_back("cor4" + std::to_string(c + 1) + "." + std::to_string(i));
  for (const auto& id : ids) EXPECT_FALSE(checks({id}).empty()) << id;
  for (const char* paired : {"prop31.3", "prop32.3", "prop32.4", "prop32.5", "cor45.3", "cor46.5", "cor47.3",
                             "cor48.3", "cor48.4"})
    EXPECT_EQ(checks({paired}).size(), 2u) << paired;
}

TEST(Catalog, DefaultsFollowPlacementAndPreset) {
  auto names = [](const std::vector<const CheckSpec*>& v) {
    std::vector<std::string> out;
    for (const auto* c : v) out.push_back(c->name());
    return out;
  };
  const auto none = names(default_checks(std::nullopt, std::nullopt));
  EXPECT_EQ(none.size(), 8u);  // thm1 x3, lemma, four decomposition items
  const auto h = names(default_checks(Placement::horizontal, PresetId::semi_symmetric_metric));
  EXPECT_NE(std::find(h.begin(), h.end(), "prop31.2"), h.end());
  EXPECT_NE(std::find(h.begin(), h.end(), "cor41.2"), h.end());
  EXPECT_EQ(std::find(h.begin(), h.end(), "cor42.1"), h.end());
  EXPECT_EQ(std::find(h.begin(), h.end(), "prop32.1"), h.end());
}

TEST(Audit, TheoremIdentitiesHoldForRandomData) {
  Rng rng(1);
  for (const auto& fx : fixtures::all()) {
    const auto d = random_connection_data(fx.wp, std::nullopt, fx.box(), rng);
    const auto r = run_audit(fx.wp, d, std::nullopt, checks({"thm1"}), config_for(fx));
    ASSERT_EQ(r.records.size(), 3u);
    for (const auto& rec : r.records) {
      EXPECT_TRUE(rec.pass) << fx.name << " " << rec.check << " " << rec.max_residual;
      EXPECT_LE(rec.max_residual, 1e-9);
      EXPECT_EQ(rec.samples, 100u);
      EXPECT_LE(rec.mean_residual, rec.max_residual);
    }
  }
}

TEST(Audit, HorizontalMixedItemOnPolar) {
  const auto fx = fixtures::polar();
  Rng rng(2);
  const auto d = random_connection_data(fx.wp, Placement::horizontal, fx.box(), rng);
  const auto r = run_audit(fx.wp, d, Placement::horizontal, checks({"prop31.2"}), config_for(fx));
  EXPECT_TRUE(record(r, "prop31.2").pass);
}

// The printed normal part of ∇_V W for horizontal data omits −f₂g(V,W)P₂, so
// per battery pair its residual is |f₂ g(V,W)| · max_k |P₂ᵏ|.
TEST(Audit, PrintedNormalItemMissesExactlyOneTerm) {
  Rng rng(3);
  for (const auto& fx : fixtures::all()) {
    const auto d = random_connection_data(fx.wp, Placement::horizontal, fx.box(), rng);
    Rng brng(9);
    const Battery battery = make_battery(fx.wp, fx.box(), brng);
    const auto* printed = find_check("prop31.3.as-printed");
    const auto* derived = find_check("prop31.3.as-derived");
    for (const auto& p : sample_points(fx.wp, fx.box(), 20, 5)) {
      const PointContext ctx(fx.wp, d, battery, p, true);
      const auto got = printed->fn(ctx, Variant::as_printed);
      const auto fixed = derived->fn(ctx, Variant::as_derived);
      double p2 = 0.0;
      for (double x : ctx.P2()) p2 = std::max(p2, std::abs(x));
      std::size_t k = 0;
      for (const auto& v : ctx.V())
        for (const auto& w : ctx.V()) {
          const double expected = std::abs(ctx.f2() * ctx.g(values(v), values(w))) * p2;
          ASSERT_LT(k, got.size());
          EXPECT_NEAR(got[k], expected, 1e-9) << fx.name;
          EXPECT_LE(fixed[k], 1e-9);
          ++k;
        }
      EXPECT_EQ(k, got.size());
    }
    const auto r = run_audit(fx.wp, d, Placement::horizontal, checks({"prop31.3"}), config_for(fx));
    EXPECT_FALSE(record(r, "prop31.3", Variant::as_printed).pass);
    EXPECT_GT(record(r, "prop31.3", Variant::as_printed).max_residual, 1e-3);
    EXPECT_TRUE(record(r, "prop31.3", Variant::as_derived).pass);
  }
}

TEST(Audit, ProjectionsAndPlacementLemma) {
  Rng rng(4);
  for (const auto& fx : fixtures::all())
    for (Placement pl : {Placement::horizontal, Placement::vertical}) {
      const auto d = random_connection_data(fx.wp, pl, fx.box(), rng);
      Rng brng(10);
      const Battery battery = make_battery(fx.wp, fx.box(), brng);
      for (const auto& p : sample_points(fx.wp, fx.box(), 25, 6)) {
        const PointContext ctx(fx.wp, d, battery, p, false);
        // u, u₁, u₂ vanish on the side the data does not live on.
        const auto& other = pl == Placement::horizontal ? ctx.V() : ctx.X();
        for (const auto& f : other) {
          EXPECT_EQ(ctx.u(values(f)), 0.0);
          EXPECT_EQ(ctx.u1(values(f)), 0.0);
          EXPECT_EQ(ctx.u2(values(f)), 0.0);
        }
        const auto all = ctx.all();
        for (const auto& a : all)
          for (const auto& b : all) {
            const auto lhs = ctx.nabla(a, b);
            const auto t = ctx.tan(lhs), n = ctx.nor(lhs);
            for (std::size_t i = 0; i < lhs.size(); ++i) EXPECT_EQ(t[i] + n[i], lhs[i]);
            // Left-hand sides from the operator route agree with the coefficient route.
            EXPECT_LE(max_abs_diff(ctx.operator_form(a, b), lhs), 1e-11) << fx.name;
          }
      }
    }
}

TEST(Audit, PlacementIsEnforced) {
  const auto fx = fixtures::polar();
  Rng rng(5);
  const auto free = random_connection_data(fx.wp, std::nullopt, fx.box(), rng);
  EXPECT_THROW(run_audit(fx.wp, free, Placement::horizontal, checks({"prop31.1"}), config_for(fx, 5)), ConfigError);
  const auto h = random_connection_data(fx.wp, Placement::horizontal, fx.box(), rng);
  EXPECT_THROW(run_audit(fx.wp, h, Placement::vertical, checks({"prop31.1"}), config_for(fx, 5)), ConfigError);
  EXPECT_THROW(run_audit(fx.wp, h, std::nullopt, checks({"prop31.1"}), config_for(fx, 5)), ConfigError);
  EXPECT_NO_THROW(run_audit(fx.wp, h, Placement::horizontal, checks({"prop31.1"}), config_for(fx, 5)));

  const auto g4 = fixtures::generic4d();
  auto mixed = random_connection_data(g4.wp, Placement::horizontal, g4.box(), rng);
  mixed.phi = random_tensor(g4.wp, false, g4.box(), rng);
  try {
    run_audit(g4.wp, mixed, Placement::horizontal, checks({"prop31.1"}), config_for(g4, 5));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("block-preserving"), std::string::npos);
  }
}

TEST(Audit, EvaluationErrorsNameCheckAndPoint) {
  const auto fx = fixtures::polar();
  const auto& vars = fx.wp.assembled().vars();
  TripathiData d = TripathiData::zero(vars);
  d.f2 = parse("log(r - 1)", vars);
  try {
    run_audit(fx.wp, d, std::nullopt, checks({"thm1.torsion"}), config_for(fx));
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("log(r - 1)"), std::string::npos) << msg;
    EXPECT_NE(msg.find("sample point ("), std::string::npos) << msg;
  }
}

TEST(Audit, ToleranceDecidesPass) {
  const auto fx = fixtures::sphere();
  Rng rng(6);
  const auto d = random_connection_data(fx.wp, Placement::horizontal, fx.box(), rng);
  auto cfg = config_for(fx, 30);
  const auto loose = run_audit(fx.wp, d, Placement::horizontal, checks({"prop31.3.as-printed"}), cfg);
  cfg.tolerance = loose.records[0].max_residual;
  EXPECT_TRUE(run_audit(fx.wp, d, Placement::horizontal, checks({"prop31.3.as-printed"}), cfg).records[0].pass);
  cfg.tolerance = std::nextafter(loose.records[0].max_residual, 0.0);
  EXPECT_FALSE(run_audit(fx.wp, d, Placement::horizontal, checks({"prop31.3.as-printed"}), cfg).records[0].pass);
}

TEST(Audit, Deterministic) {
  const auto fx = fixtures::generic4d();
  Rng r1(7), r2(7);
  const auto d1 = random_connection_data(fx.wp, Placement::vertical, fx.box(), r1);
  const auto d2 = random_connection_data(fx.wp, Placement::vertical, fx.box(), r2);
  const auto sel = default_checks(Placement::vertical, std::nullopt);
  const auto a = run_audit(fx.wp, d1, Placement::vertical, sel, config_for(fx, 20));
  const auto b = run_audit(fx.wp, d2, Placement::vertical, sel, config_for(fx, 20));
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].max_residual, b.records[i].max_residual);
    EXPECT_EQ(a.records[i].mean_residual, b.records[i].mean_residual);
    EXPECT_EQ(a.records[i].argmax_point[0], b.records[i].argmax_point[0]);
  }
}

// Shrinking the sampling box towards its centre does not blow residuals up.
TEST(Audit, ShrinkingTheBoxDoesNotInflateResiduals) {
  Rng rng(8);
  for (const auto& fx : fixtures::all()) {
    const auto d = random_connection_data(fx.wp, Placement::horizontal, fx.box(), rng);
    const auto sel = checks({"thm1", "prop31"});
    const auto full = run_audit(fx.wp, d, Placement::horizontal, sel, config_for(fx));
    auto cfg = config_for(fx);
    for (auto& iv : cfg.box) {
      const double mid = 0.5 * (iv.lo + iv.hi), half = 0.25 * (iv.hi - iv.lo);
      iv = {mid - half, mid + half};
    }
    const auto small = run_audit(fx.wp, d, Placement::horizontal, sel, cfg);
    for (std::size_t i = 0; i < full.records.size(); ++i) {
      const double floor = 64 * std::numeric_limits<double>::epsilon();
      EXPECT_LE(small.records[i].max_residual, 10.0 * std::max(full.records[i].max_residual, floor))
          << fx.name << " " << full.records[i].check;
    }
  }
}

namespace {
bool is_paired(const std::string& id) { return checks({id}).size() == 2; }
}  // namespace

TEST(Corollaries, EveryPresetAndPlacement) {
  for (const auto& fx : fixtures::all())
    for (Placement pl : {Placement::horizontal, Placement::vertical})
      for (const auto& info : preset_catalog()) {
        const auto r = corollary_suite(info.id, pl, fx.wp, config_for(fx, 40));
        EXPECT_FALSE(r.records.empty());
        for (const auto& rec : r.records)
          if (!is_paired(rec.check) || rec.variant == Variant::as_derived) {
            EXPECT_TRUE(rec.pass) << fx.name << " " << to_string(pl) << " " << rec.check << " " << rec.max_residual;
          }
      }
}

TEST(Corollaries, SemiSymmetricNonMetricNormalPart) {
  for (const auto& fx : fixtures::surfaces()) {
    const auto h = corollary_suite(PresetId::semi_symmetric_non_metric, Placement::horizontal, fx.wp, config_for(fx));
    const auto v = corollary_suite(PresetId::semi_symmetric_non_metric, Placement::vertical, fx.wp, config_for(fx));
    EXPECT_TRUE(record(h, "cor43.3").pass) << fx.name;
    EXPECT_TRUE(record(v, "cor44.4").pass) << fx.name;
  }
}

TEST(Corollaries, SemiSymmetricMetricMixedTerm) {
  for (const auto& fx : fixtures::all()) {
    const auto r = corollary_suite(PresetId::semi_symmetric_metric, Placement::horizontal, fx.wp, config_for(fx));
    EXPECT_TRUE(record(r, "cor41.2").pass) << fx.name;
  }
}

TEST(Corollaries, LeviCivitaDegeneratesToDecomposition) {
  for (const auto& fx : fixtures::all())
    for (Placement pl : {Placement::horizontal, Placement::vertical}) {
      const auto r = corollary_suite(PresetId::levi_civita, pl, fx.wp, config_for(fx));
      EXPECT_TRUE(r.all_pass()) << fx.name;
      EXPECT_NE(r.find("prop22.3"), nullptr);
    }
}
