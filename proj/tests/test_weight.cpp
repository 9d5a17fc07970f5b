#include <doctest.h>
#include <fellband/weight.hpp>

#include "helpers.hpp"

using namespace fellband;
using fellband::testing::pt;

namespace {

std::shared_ptr<CayleyBall> std_ball(const GroupModel& g,
                                     std::size_t budget = CayleyBall::kDefaultBudget) {
  return std::make_shared<CayleyBall>(g, g.standard_generators(), budget);
}

}  // namespace

TEST_CASE("word and power weights on Z") {
  auto ball = std_ball(GroupModel::zd(1));
  WeightSpec word;
  word.kind = WeightSpec::Kind::WordLength;
  const Weight nu = make_weight(ball, word);
  CHECK(nu(pt({5})) == doctest::Approx(6.0));
  CHECK(nu(pt({0})) == doctest::Approx(1.0));
  CHECK(nu.poly_constant_C() == doctest::Approx(1.0));

  WeightSpec pow2;
  pow2.kind = WeightSpec::Kind::PowerOfWordLength;
  pow2.s = 2.0;
  const Weight nu2 = make_weight(ball, pow2);
  CHECK(nu2(pt({3})) == doctest::Approx(16.0));
  CHECK(nu2.poly_constant_C() == doctest::Approx(2.0));
}

TEST_CASE("locally finite chain weight on DirectSumZ2") {
  auto ball = std_ball(GroupModel::direct_sum_z2(10));
  WeightSpec lf;
  lf.kind = WeightSpec::Kind::LocallyFinite;
  for (int n = 0; n <= 10; ++n) lf.chain_m.push_back(std::pow(2.0, n));
  const Weight nu = make_weight(ball, lf);
  CHECK(nu(pt({0})) == doctest::Approx(1.0));
  CHECK(nu(pt({0b1})) == doctest::Approx(2.0));
  CHECK(nu(pt({0b100})) == doctest::Approx(8.0));   // top coordinate 3
  CHECK(nu(pt({0b101})) == doctest::Approx(8.0));
  // nu(xy) <= max{nu(x), nu(y)}
  Rng rng(3);
  const GroupModel& g = ball->group();
  for (int it = 0; it < 200; ++it) {
    const Point x = pt({static_cast<std::int64_t>(rng.below(1024))});
    const Point y = pt({static_cast<std::int64_t>(rng.below(1024))});
    CHECK(nu(g.multiply(x, y)) <= std::max(nu(x), nu(y)) + 1e-12);
  }
}

TEST_CASE("invalid weight specs are rejected") {
  auto ball = std_ball(GroupModel::zd(1));
  WeightSpec bad_power;
  bad_power.kind = WeightSpec::Kind::PowerOfWordLength;
  bad_power.s = 0.5;
  CHECK_THROWS_AS(make_weight(ball, bad_power), InvalidSpec);

  auto dball = std_ball(GroupModel::direct_sum_z2(6));
  WeightSpec bad_chain;
  bad_chain.kind = WeightSpec::Kind::LocallyFinite;
  bad_chain.chain_m = {1.0, 3.0, 2.0};
  CHECK_THROWS_AS(make_weight(dball, bad_chain), InvalidSpec);
  WeightSpec low_chain;
  low_chain.kind = WeightSpec::Kind::LocallyFinite;
  low_chain.chain_m = {0.5, 1.0};
  CHECK_THROWS_AS(make_weight(dball, low_chain), InvalidSpec);
}

TEST_CASE("weight axioms hold exactly on sampled pairs") {
  struct Case {
    GroupModel g;
    WeightSpec spec;
  };
  WeightSpec word;
  word.kind = WeightSpec::Kind::WordLength;
  WeightSpec pow;
  pow.kind = WeightSpec::Kind::PowerOfWordLength;
  pow.s = 2.0;

  for (const GroupModel& g : {GroupModel::zd(2), GroupModel::heis3(), GroupModel::cyclic(7)}) {
    for (const WeightSpec& spec : {word, pow}) {
      auto ball = std_ball(g);
      const Weight nu = make_weight(ball, spec);
      const double C = nu.poly_constant_C();
      const std::vector<Point> pts = ball->ball(4);
      Rng rng(17);
      for (int it = 0; it < 1000; ++it) {
        const Point x = pts[rng.below(pts.size())];
        const Point y = pts[rng.below(pts.size())];
        const double nx = nu(x), ny = nu(y);
        CHECK(nx >= 1.0);
        CHECK(nu(g.inverse(x)) == doctest::Approx(nx).epsilon(1e-12));
        const double nxy = nu(g.multiply(x, y));
        CHECK(nxy <= nx * ny * (1 + 1e-12));
        CHECK(nxy <= C * (nx + ny) * (1 + 1e-12));  // polynomial bound, stored C
      }
    }
  }
}

TEST_CASE("weight integrability partial sums") {
  auto ball = std_ball(GroupModel::zd(1));
  WeightSpec word;
  word.kind = WeightSpec::Kind::WordLength;
  const Weight nu = make_weight(ball, word);

  SUBCASE("p=2 converges to pi^2/3 - 1") {
    const IntegrabilityReport rep = weight_integrability(nu, 2.0, 10000);
    CHECK(rep.converged);
    CHECK(!rep.diverged);
    const double target = kPi * kPi / 3.0 - 1.0;
    CHECK(std::abs(rep.partial_sum + rep.tail_estimate - target) < 1e-3);
  }
  SUBCASE("p=1 diverges") {
    const IntegrabilityReport rep = weight_integrability(nu, 1.0, 4000);
    CHECK(rep.diverged);
    CHECK(!rep.converged);
  }
}

TEST_CASE("Z^2 word weight is (d+2)-integrable") {
  auto ball = std_ball(GroupModel::zd(2));
  WeightSpec word;
  word.kind = WeightSpec::Kind::WordLength;
  const Weight nu = make_weight(ball, word);
  const IntegrabilityReport rep = weight_integrability(nu, 4.0, 600);
  CHECK(rep.converged);
}

TEST_CASE("finite groups exhaust and converge") {
  auto ball = std_ball(GroupModel::cyclic(9));
  WeightSpec word;
  word.kind = WeightSpec::Kind::WordLength;
  const Weight nu = make_weight(ball, word);
  const IntegrabilityReport rep = weight_integrability(nu, 2.0, 64);
  CHECK(rep.exhausted);
  CHECK(rep.converged);
}

TEST_CASE("domination fit against the word weight") {
  auto ball = std_ball(GroupModel::zd(2));
  WeightSpec word;
  word.kind = WeightSpec::Kind::WordLength;
  const Weight nu_k = make_weight(ball, word);

  SUBCASE("self domination is the identity fit") {
    const DominationFit fit = weight_domination_fit(nu_k, 12);
    CHECK(fit.delta == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit.M == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit.max_violation <= 1.0 + 1e-9);
  }
  SUBCASE("squared weight fits with delta = 2") {
    WeightSpec pow;
    pow.kind = WeightSpec::Kind::PowerOfWordLength;
    pow.s = 2.0;
    const Weight nu2 = make_weight(ball, pow);
    const DominationFit fit = weight_domination_fit(nu2, 12);
    CHECK(fit.delta == doctest::Approx(2.0).epsilon(1e-6));
  }
}

TEST_CASE("locally finite weight admits a sampled-ball domination fit") {
  auto ball = std_ball(GroupModel::direct_sum_z2(8));
  WeightSpec lf;
  lf.kind = WeightSpec::Kind::LocallyFinite;
  for (int n = 0; n <= 8; ++n) lf.chain_m.push_back(n + 1.0);
  const Weight nu = make_weight(ball, lf);
  const DominationFit fit = weight_domination_fit(nu, 8);
  CHECK(std::isfinite(fit.delta));
  CHECK(fit.M >= 1.0);
}
