#include <doctest.h>
#include <fellband/config.hpp>

#include "helpers.hpp"

using namespace fellband;
using fellband::testing::pt;

TEST_CASE("rationals parse exactly") {
  const Rational r = parse_rational(std::string("1/3"));
  CHECK(r.exact);
  CHECK(r.num == 1);
  CHECK(r.den == 3);
  const Rational d = parse_rational(std::string("0.25"));
  CHECK(d.exact);  // recognized as 1/4
  CHECK(d.num == 1);
  CHECK(d.den == 4);
  CHECK_THROWS_AS(parse_rational(std::string("1/0")), ConfigError);
  CHECK_THROWS_AS(parse_rational(std::string("x")), ConfigError);
}

TEST_CASE("group specs parse from JSON and shorthand") {
  const GroupModel g1 = parse_group(Json{{"kind", "Zd"}, {"d", 2}});
  CHECK(g1.kind() == GroupModel::Kind::Zd);
  CHECK(g1.coord_count() == 2);

  const GroupModel g2 = parse_group_shorthand("Cyclic:6");
  CHECK(g2.is_finite());
  CHECK(g2.order() == 6);

  const GroupModel g3 = parse_group(
      Json{{"kind", "Product"},
           {"left", Json{{"kind", "Zd"}, {"d", 1}}},
           {"right", Json{{"kind", "Cyclic"}, {"m", 3}}}});
  CHECK(g3.coord_count() == 2);

  const GroupModel g4 =
      parse_group(Json{{"kind", "Cyclic"}, {"m", 4}, {"normalized_measure", true}});
  CHECK(g4.point_mass() == doctest::Approx(0.25));

  CHECK_THROWS_AS(parse_group(Json{{"kind", "Free"}}), ConfigError);
  CHECK_THROWS_AS(parse_group_shorthand("nope"), ConfigError);
}

TEST_CASE("twist specs parse and build compatible systems") {
  auto t1 = parse_twist(Json{{"kind", "nc_torus"}, {"theta", "1/3"}}, GroupModel::zd(2));
  CHECK(t1->theta() == doctest::Approx(1.0 / 3.0));
  auto t2 = parse_twist_shorthand("nc_torus:1/3", GroupModel::zd(2));
  CHECK(t1->compatible(*t2));

  auto t3 = parse_twist_shorthand("pauli", GroupModel::cyclic(2));
  CHECK(t3->fiber_dim() == 2);
  auto t4 = parse_twist_shorthand("perm_diag", GroupModel::cyclic(3));
  CHECK(t4->fiber_dim() == 3);
  CHECK_THROWS_AS(parse_twist_shorthand("nc_torus:1/3", GroupModel::zd(1)), InvalidSpec);
}

TEST_CASE("weight specs parse") {
  const GroupModel g = GroupModel::zd(1);
  auto ball = std::make_shared<CayleyBall>(g, g.standard_generators());
  const Weight w = parse_weight_shorthand("word_power:2", ball);
  CHECK(w(pt({3})) == doctest::Approx(16.0));
  const Weight lf = parse_weight_shorthand(
      "locally_finite:1,2,4",
      std::make_shared<CayleyBall>(GroupModel::direct_sum_z2(6),
                                   GroupModel::direct_sum_z2(6).standard_generators()));
  CHECK(lf(pt({0b10})) == doctest::Approx(4.0));
  CHECK_THROWS_AS(parse_weight_shorthand("fancy", ball), ConfigError);
}

TEST_CASE("section literals round-trip through JSON") {
  auto sys = fellband::testing::torus(1, 3);
  Rng rng(5);
  const CrossSection phi = fellband::testing::random_section(sys, rng, 2, 6, false);
  const Json j = section_to_json(phi);
  const CrossSection back = parse_section(j, sys);
  CrossSection d = back;
  d -= phi;
  CHECK(d.norm_l1() < 1e-14);
}

TEST_CASE("named sections and recipes") {
  auto sys = fellband::testing::z_scalar();
  const CrossSection lap = named_section("laplacian", sys);
  CHECK(lap.support_size() == 2);
  const CrossSection shifted = named_section("shifted_laplacian", sys);
  CHECK(shifted.at(pt({0})).scalar_value() == Complex(2, 0));
  CHECK(shifted.at(pt({1})).scalar_value() == Complex(-0.5, 0));
  CHECK_THROWS_AS(named_section("mystery", sys), ConfigError);

  const Json recipe{{"random", Json{{"radius", 2}, {"points", 5}, {"selfadjoint", true},
                                    {"seed", 11}}}};
  const CrossSection r1 = parse_section(recipe, sys);
  const CrossSection r2 = parse_section(recipe, sys);
  CHECK(is_selfadjoint(r1, 1e-12));
  CrossSection d = r1;
  d -= r2;
  CHECK(d.norm_l1() == 0.0);  // recipes are deterministic in the seed
}

TEST_CASE("section CSV export carries coordinates and entries") {
  auto sys = fellband::testing::z2_scalar();
  CrossSection phi(sys);
  phi.set(pt({1, -2}), Fiber::scalar({0.5, 0.25}));
  const std::string csv = section_to_csv(phi);
  CHECK(csv.find("x0,x1,i,j,re,im") == 0);
  CHECK(csv.find("1,-2,0,0,0.5,0.25") != std::string::npos);
}

TEST_CASE("experiment config defaults") {
  const Json j{{"group", Json{{"kind", "Zd"}, {"d", 2}}},
               {"twist", Json{{"kind", "nc_torus"}, {"theta", "1/2"}}},
               {"op", "spectrum"},
               {"seed", 13}};
  const ExperimentConfig cfg = ExperimentConfig::from_json(j);
  CHECK(cfg.op == "spectrum");
  CHECK(cfg.seed == 13);
  CHECK(cfg.system->theta() == doctest::Approx(0.5));
}
