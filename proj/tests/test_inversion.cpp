#include <doctest.h>
#include <fellband/inversion.hpp>
#include <fellband/spectra.hpp>

#include "helpers.hpp"

using namespace fellband;
using namespace fellband::testing;

namespace {

Weight word_weight(const GroupModel& g,
                   std::size_t budget = CayleyBall::kDefaultBudget) {
  auto ball = std::make_shared<CayleyBall>(g, g.standard_generators(), budget);
  WeightSpec spec;
  spec.kind = WeightSpec::Kind::WordLength;
  return make_weight(ball, spec);
}

CrossSection z_test_element(TwistedSystem::Ptr sys) {
  // 2 delta_0 - (delta_1 + delta_{-1})/2, symbol 2 - cos(theta) in [1,3]
  CrossSection phi = scalar_delta(sys, pt({0}), {2, 0});
  phi += scalar_delta(sys, pt({1}), {-0.5, 0});
  phi += scalar_delta(sys, pt({-1}), {-0.5, 0});
  return phi;
}

}  // namespace

TEST_CASE("weight constants on Z at p = 2") {
  const Weight nu = word_weight(GroupModel::zd(1));
  const WeightConstants wc = weight_constants(nu, 2.0, 10000);
  CHECK(std::abs(wc.B - (kPi * kPi / 3.0 - 1.0)) < 1e-3);
  CHECK(wc.A == doctest::Approx(2.0 * std::pow(wc.B, 1.0 / 3.0)));
  CHECK(wc.A == doctest::Approx(2.636).epsilon(2e-3));
  CHECK(wc.C == doctest::Approx(1.0));
  CHECK(wc.D == doctest::Approx(2.0 * wc.A));
  CHECK(wc.theta == doctest::Approx(11.0 / 3.0));
  CHECK(wc.delta == doctest::Approx(1.0));
  CHECK(wc.theta < 4.0);
  CHECK(wc.D >= 1.0);
}

TEST_CASE("theta formula at p = 1 and the trivial-group plug-in") {
  const Weight nu1 = word_weight(GroupModel::cyclic(1));
  const WeightConstants wc1 = weight_constants(nu1, 1.0, 8);
  CHECK(wc1.theta == doctest::Approx(3.5));
  CHECK(wc1.B == doctest::Approx(1.0));  // only the identity contributes
  CHECK(wc1.A == doctest::Approx(2.0));
  CHECK(wc1.D == doctest::Approx(4.0));
}

TEST_CASE("weight constants refuse a divergent integrability sum") {
  const Weight nu = word_weight(GroupModel::zd(1));
  CHECK_THROWS_AS(weight_constants(nu, 1.0, 4000), Diverged);
}

TEST_CASE("weighted submultiplicativity inequality") {
  auto sys = z_scalar();
  const Weight nu = word_weight(sys->group());

  SUBCASE("point mass at the identity") {
    const CrossSection d0 = scalar_delta(sys, pt({0}), {1, 0});
    const SubmultReport rep = weighted_submult_check(d0, d0, nu, nu.poly_constant_C());
    CHECK(rep.pass);
    CHECK(rep.worst_ratio == doctest::Approx(0.5));  // lhs 1, rhs 2C
  }
  SUBCASE("random pairs on Z") {
    Rng rng(3);
    for (int it = 0; it < 200; ++it) {
      const CrossSection phi = random_section(sys, rng, 3, 6, false);
      const CrossSection psi = random_section(sys, rng, 3, 6, false);
      const SubmultReport rep = weighted_submult_check(phi, psi, nu, nu.poly_constant_C());
      CHECK(rep.pass);
    }
  }
  SUBCASE("far-supported point masses on Z^2 drive the ratio toward 1") {
    auto sys2 = z2_scalar();
    const Weight nu2 = word_weight(sys2->group());
    const CrossSection a = scalar_delta(sys2, pt({50, 0}), {1, 0});
    const CrossSection b = scalar_delta(sys2, pt({0, 50}), {1, 0});
    const SubmultReport rep = weighted_submult_check(a, b, nu2, nu2.poly_constant_C());
    CHECK(rep.pass);
    CHECK(rep.worst_ratio > 0.9);
    CHECK(rep.worst_ratio <= 1.0 + 1e-12);
  }
}

TEST_CASE("fourth-power interpolation inequality (E-norm)") {
  auto sys = z_scalar();
  const Weight nu = word_weight(sys->group());
  const WeightConstants wc = weight_constants(nu, 2.0, 10000);

  SUBCASE("unit point mass") {
    const CrossSection d0 = scalar_delta(sys, pt({0}), {1, 0});
    const GendiffReport rep = gendiff_check(d0, nu, wc);
    CHECK(rep.pass);
    CHECK(rep.lhs == doctest::Approx(1.0));
    CHECK(rep.rhs >= 1.0);
  }
  SUBCASE("random sections") {
    Rng rng(5);
    for (int it = 0; it < 200; ++it) {
      const CrossSection phi = random_section(sys, rng, 3, 6, false);
      const GendiffReport rep = gendiff_check(phi, nu, wc);
      INFO("ratio ", rep.ratio);
      CHECK(rep.pass);
    }
  }
  SUBCASE("far point mass stresses the weight side") {
    CrossSection far = scalar_delta(sys, pt({10000}), {3, 0});
    const GendiffReport rep = gendiff_check(far, nu, wc);
    CHECK(rep.pass);
  }
}

TEST_CASE("Neumann inversion of a scaled unit") {
  auto sys = z_scalar();
  const Weight nu = word_weight(sys->group());
  const CrossSection two = scalar_delta(sys, pt({0}), {2, 0});
  const InversionResult inv = invert_neumann(two, 2.0, 0.5, nu);
  CHECK(inv.residual_weighted < 1e-12);
  CHECK(inv.inverse.support_size() == 1);
  CHECK(std::abs(inv.inverse.at(pt({0})).scalar_value() - Complex(0.5, 0)) < 1e-12);
}

TEST_CASE("Neumann inversion on Z matches the closed form") {
  auto sys = z_scalar();
  const Weight nu = word_weight(sys->group());
  const CrossSection phi = z_test_element(sys);
  // symbol 2 - cos in [1,3]
  NeumannOptions opts;
  opts.tol = 1e-9;
  const InversionResult inv = invert_neumann(phi, 3.0, 1.0, nu, opts);
  CHECK(inv.residual_weighted <= 1e-9);
  // (2 - cos)^{-1} has coefficients (2 - sqrt 3)^{|n|} / sqrt 3
  const double r = 2.0 - std::sqrt(3.0);
  for (std::int64_t n = -12; n <= 12; ++n) {
    const double expect = std::pow(r, std::abs(static_cast<double>(n))) / std::sqrt(3.0);
    CHECK(std::abs(inv.inverse.at(pt({n})).scalar_value() - Complex(expect, 0)) < 1e-8);
  }
}

TEST_CASE("Neumann inversion on the twisted torus") {
  auto sys = torus(1, 3);
  const Weight nu = word_weight(sys->group());
  CrossSection phi = CrossSection::unit(sys);
  phi *= Complex(6, 0);
  phi -= laplacian(sys);
  const double hi = nc_torus_symbol_opnorm(laplacian(sys), 64);
  const double cnorm = 6.0 + hi;  // self-adjoint shift of the Harper element
  const double cinv = 1.0 / (6.0 - hi);
  NeumannOptions opts;
  opts.tol = 1e-6;
  const InversionResult inv = invert_neumann(phi, cnorm, cinv, nu, opts);
  CHECK(inv.residual_weighted <= 1e-6);
  CHECK(!inv.slow_convergence);
}

TEST_CASE("non-invertible data is rejected") {
  auto sys = z_scalar();
  const Weight nu = word_weight(sys->group());
  const CrossSection phi = z_test_element(sys);
  CHECK_THROWS_AS(
      invert_neumann(phi, 3.0, std::numeric_limits<double>::infinity(), nu),
      NotInvertible);
}

TEST_CASE("norm-control bound: unitary-case collapse matches hand evaluation") {
  const Weight nu = word_weight(GroupModel::zd(1));
  const WeightConstants wc = weight_constants(nu, 2.0, 10000);
  // condition number exactly 1: every k >= 1 factor collapses to 1
  const double ne = 3.7, c = 1.3;
  const NormControlBound b = norm_control_bound(wc, ne, c, 1.0 / c);
  const double beta = 2.0 * ne * ne / (c * c);
  const double hand =
      std::log(ne / (c * c)) + std::log(1.0 + beta + beta * beta + beta * beta * beta);
  CHECK(b.log_value == doctest::Approx(hand).epsilon(1e-12));
  CHECK(b.finite);
}

TEST_CASE("norm-control bound dominates the measured inverse on Z") {
  auto sys = z_scalar();
  const Weight nu = word_weight(sys->group());
  const WeightConstants wc = weight_constants(nu, 2.0, 10000);
  const CrossSection phi = z_test_element(sys);
  NeumannOptions opts;
  opts.tol = 1e-9;
  const InversionResult inv = invert_neumann(phi, 3.0, 1.0, nu, opts);
  const double measured = norm_E(inv.inverse, nu);
  const NormControlBound bound = norm_control_bound(wc, norm_E(phi, nu), 3.0, 1.0);
  CHECK(bound.finite);
  CHECK(std::log(measured) <= bound.log_value);
}

TEST_CASE("norm-control bound is monotone in the E-norm and condition data") {
  const Weight nu = word_weight(GroupModel::zd(1));
  const WeightConstants wc = weight_constants(nu, 2.0, 10000);
  const NormControlBound b1 = norm_control_bound(wc, 4.0, 3.0, 1.0);
  const NormControlBound b2 = norm_control_bound(wc, 8.0, 3.0, 1.0);
  CHECK(b2.log_value > b1.log_value);
  const NormControlBound b3 = norm_control_bound(wc, 4.0, 3.0, 1.5);
  CHECK(b3.log_value > b1.log_value);
}

TEST_CASE("truncation lower bound brackets the spectral radius on Z") {
  auto sys = z_scalar();
  const RadiusLowerBoundReport rep = truncation_radius_lower_bound(laplacian(sys), 24);
  CHECK(rep.best >= 1.8);         // climbs toward rho = 2
  CHECK(rep.gelfand_raw == doctest::Approx(2.0));
}
