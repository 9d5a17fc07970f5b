#include <doctest.h>
#include <fellband/spectra.hpp>

#include "helpers.hpp"

using namespace fellband;
using namespace fellband::testing;

namespace {

Weight word_weight(const GroupModel& g) {
  auto ball = std::make_shared<CayleyBall>(g, g.standard_generators());
  WeightSpec spec;
  spec.kind = WeightSpec::Kind::WordLength;
  return make_weight(ball, spec);
}

}  // namespace

TEST_CASE("lp norms on simple sections") {
  auto sys = z_scalar();
  CrossSection phi = scalar_delta(sys, pt({1}), {1, 0});
  phi += scalar_delta(sys, pt({-1}), {1, 0});
  CHECK(norm_lp(phi, 1.0) == doctest::Approx(2.0));
  CHECK(norm_linf(phi) == doctest::Approx(1.0));

  const Weight nu = word_weight(sys->group());
  CHECK(norm_lp_weighted(phi, 1.0, nu) == doctest::Approx(4.0));

  auto m2 = TwistedSystem::trivial(GroupModel::zd(1), 2);
  const CrossSection psi = CrossSection::delta(
      m2, pt({0}),
      Fiber::matrix(2, {Complex(3, 0), Complex(0, 0), Complex(0, 0), Complex(0, 0)}));
  CHECK(norm_lp(psi, 2.0) == doctest::Approx(3.0));
}

TEST_CASE("l2e equals l2 for scalar fibers and sees the module structure") {
  auto sys = z_scalar();
  Rng rng(3);
  const CrossSection phi = random_section(sys, rng, 3, 8, false);
  CHECK(norm_l2e(phi) == doctest::Approx(norm_lp(phi, 2.0)).epsilon(1e-12));

  auto m2 = TwistedSystem::trivial(GroupModel::zd(1), 2);
  CrossSection psi = CrossSection::delta(
      m2, pt({0}),
      Fiber::matrix(2, {Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(0, 0)}));
  psi += CrossSection::delta(
      m2, pt({1}),
      Fiber::matrix(2, {Complex(0, 0), Complex(0, 0), Complex(0, 0), Complex(2, 0)}));
  CHECK(norm_l2e(psi) == doctest::Approx(2.0));                  // ||diag(1,4)||^{1/2}
  CHECK(norm_lp(psi, 2.0) == doctest::Approx(std::sqrt(5.0)));   // strictly larger
  CHECK(norm_l2e(psi) < norm_lp(psi, 2.0));

  const CrossSection mass = CrossSection::delta(
      m2, pt({4}),
      Fiber::matrix(2, {Complex(0, 1), Complex(2, 0), Complex(0, 0), Complex(1, 0)}));
  CHECK(norm_l2e(mass) == doctest::Approx(mass.norm_linf()).epsilon(1e-12));
}

TEST_CASE("norm_E is the max of the weighted l1 and the sup norm") {
  auto sys = z_scalar();
  const Weight nu = word_weight(sys->group());
  const CrossSection d0 = scalar_delta(sys, pt({0}), {1, 0});
  CHECK(norm_E(d0, nu) == doctest::Approx(1.0));

  CrossSection phi = scalar_delta(sys, pt({0}), {2, 0});
  phi += scalar_delta(sys, pt({1}), {-0.5, 0});
  phi += scalar_delta(sys, pt({-1}), {-0.5, 0});
  CHECK(norm_E(phi, nu) == doctest::Approx(4.0));  // max{2+1+1, 2}

  Rng rng(5);
  const CrossSection r = random_section(sys, rng, 3, 8, false);
  CHECK(norm_E(r, nu) >= norm_lp_weighted(r, 1.0, nu) - 1e-13);
  CHECK(norm_E(r, nu) >= norm_linf(r) - 1e-13);
}

TEST_CASE("regular representation of the unit is the identity matrix") {
  auto sys = torus(1, 3);
  TruncatedRep rep(sys, 2);
  const Eigen::MatrixXcd m = rep.hs_matrix(CrossSection::unit(sys));
  CHECK((m - Eigen::MatrixXcd::Identity(m.rows(), m.cols())).norm() < 1e-13);
  const Eigen::MatrixXcd c = rep.matrix(CrossSection::unit(sys));
  CHECK((c - Eigen::MatrixXcd::Identity(c.rows(), c.cols())).norm() < 1e-13);
}

TEST_CASE("truncated shift on Z is nilpotent") {
  auto sys = z_scalar();
  TruncatedRep rep(sys, 2);
  CHECK(rep.dim() == 5);
  const Eigen::MatrixXcd m = rep.matrix(scalar_delta(sys, pt({1}), {1, 0}));
  CHECK(m.cwiseAbs().sum() == doctest::Approx(4.0));  // 4 in-ball translations
  Eigen::MatrixXcd p = m;
  for (int i = 0; i < 4; ++i) p = p * m;
  CHECK(p.norm() < 1e-14);
}

TEST_CASE("hs_matrix dimension cap raises BudgetExceeded") {
  auto sys = z2_scalar();
  TruncatedRep rep(sys, 50);
  CHECK_THROWS_AS(rep.hs_matrix(CrossSection::unit(sys), 4000), BudgetExceeded);
}

TEST_CASE("operator norm of the Z Laplacian climbs to 2") {
  auto sys = z_scalar();
  const CrossSection lap = laplacian(sys);
  const NormReport r50 = opnorm_estimate(lap, 50);
  const NormReport r100 = opnorm_estimate(lap, 100);
  const NormReport r200 = opnorm_estimate(lap, 200);
  CHECK(r50.value <= r100.value + 1e-12);
  CHECK(r100.value <= r200.value + 1e-12);
  CHECK(r200.value <= 2.0 + 1e-9);
  CHECK(r200.value == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(r200.lower_bound);
}

TEST_CASE("operator norm is exact on finite groups at full radius") {
  auto sys = cyclic_m2(5);
  Rng rng(7);
  const CrossSection phi = random_section(sys, rng, 2, 5, true);
  const NormReport est = opnorm_estimate(phi, 5);
  const Eigen::MatrixXcd m = finite_rep_matrix(phi);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  CHECK(est.value == doctest::Approx(svd.singularValues()(0)).epsilon(1e-9));
}

TEST_CASE("Harper operator norm at theta = 1/2 approaches 2 sqrt 2 from below") {
  auto sys = torus(1, 2);
  const CrossSection harper = laplacian(sys);
  const NormReport r12 = opnorm_estimate(harper, 12);
  const NormReport r40 = opnorm_estimate(harper, 40);
  const double target = 2.0 * std::sqrt(2.0);
  CHECK(r12.value <= r40.value + 1e-12);
  CHECK(r40.value <= target + 1e-9);
  CHECK(target - r40.value < 2e-2);
}

TEST_CASE("pi_2 norm matches l2e on twisted finite groups") {
  Rng rng(11);
  for (const auto& sys : {cyclic_carry(5, 0.37), cyclic_m2(4), cyclic_pauli_x(2)}) {
    const std::int64_t m = sys->group().order();
    for (int it = 0; it < 10; ++it) {
      const CrossSection phi = random_section(sys, rng, static_cast<int>(m), 6, false);
      const NormReport est = norm_pi_p_estimate(phi, 2.0, static_cast<int>(m), 0, 1);
      const double l2e = norm_l2e(phi);
      CHECK(std::abs(est.value - l2e) <= 1e-8 * std::max(1.0, l2e));
    }
  }
}

TEST_CASE("pi_p at a point mass recovers the fiber norm") {
  auto sys = cyclic_m2(4);
  Rng rng(13);
  const Fiber a = random_fiber(rng, 2);
  const CrossSection mass = CrossSection::delta(sys, pt({1}), a);
  for (double p : {1.0, 2.0, 3.0, 8.0}) {
    const NormReport est = norm_pi_p_estimate(mass, p, 4, 8, 3);
    CHECK(est.value == doctest::Approx(a.operator_norm()).epsilon(1e-9));
  }
}

TEST_CASE("pi_64 approximates the sup norm within 5 percent") {
  Rng rng(17);
  for (const auto& sys : {z_scalar(), torus(1, 3)}) {
    for (int it = 0; it < 5; ++it) {
      const CrossSection phi = random_section(sys, rng, 2, 12, false);
      const NormReport est = norm_pi_p_estimate(phi, 64.0, 6, 12, 5);
      const double linf = norm_linf(phi);
      CHECK(est.value >= linf - 1e-10);
      CHECK(est.value <= 1.05 * linf);
    }
  }
}

TEST_CASE("shared-sample ordering: linf <= pi_q <= pi_p for p <= q") {
  auto sys = torus(1, 3);
  Rng rng(19);
  const int radius = 6;
  TruncatedRep rep(sys, radius);
  CayleyBall inner_ball(sys->group(), sys->group().standard_generators());
  const std::vector<Point> inner = inner_ball.ball(3);

  for (int it = 0; it < 10; ++it) {
    const CrossSection phi = random_section(sys, rng, 2, 8, false);
    for (int s = 0; s < 6; ++s) {
      Eigen::VectorXcd xi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(rep.dim()));
      for (const Point& x : inner)
        xi(static_cast<Eigen::Index>(*rep.point_index(x))) = rng.complex_gaussian();
      xi /= xi.norm();
      const double f1 = pi_p_value(rep, phi, 1.0, xi);
      const double f2 = pi_p_value(rep, phi, 2.0, xi);
      const double f4 = pi_p_value(rep, phi, 4.0, xi);
      CHECK(f4 <= f2 * (1 + 1e-12));
      CHECK(f2 <= f1 * (1 + 1e-12));
    }
    const NormReport q4 = norm_pi_p_estimate(phi, 4.0, radius, 10, 7);
    CHECK(norm_linf(phi) <= q4.value * (1 + 1e-10));
  }
}

TEST_CASE("convolution inequality pi_r <= lp * pi_q on interior samples") {
  // valid exponent triples: 1/p + 1/q = 1 + 1/r
  auto sys = torus(1, 3);
  Rng rng(23);
  const int radius = 8;
  TruncatedRep rep(sys, radius);
  CayleyBall ball(sys->group(), sys->group().standard_generators());
  const std::vector<Point> inner = ball.ball(2);

  int checked = 0;
  for (int it = 0; it < 25; ++it) {
    const CrossSection psi = random_section(sys, rng, 1, 4, false);
    const CrossSection phi = random_section(sys, rng, 1, 4, false);
    const CrossSection conv = convolve(psi, phi);

    Eigen::VectorXcd xi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(rep.dim()));
    for (const Point& x : inner)
      xi(static_cast<Eigen::Index>(*rep.point_index(x))) = rng.complex_gaussian();
    xi /= xi.norm();

    // q = 2 triples against the exact pi_2 value
    const double pi2 = norm_pi_p_estimate(phi, 2.0, radius, 0, 1).value;
    CHECK(pi_p_value(rep, conv, 2.0, xi) <=
          norm_lp(psi, 1.0) * pi2 * (1 + 1e-10) + 1e-12);                   // (1,2,2)
    CHECK(pi_p_value(rep, conv, 4.0, xi) <=
          norm_lp(psi, 4.0 / 3.0) * pi2 * (1 + 1e-10) + 1e-12);             // (4/3,2,4)
    // q = r, p = 1 triples pointwise in xi
    for (double q : {1.0, 3.0}) {
      CHECK(pi_p_value(rep, conv, q, xi) <=
            norm_lp(psi, 1.0) * pi_p_value(rep, phi, q, xi) * (1 + 1e-10) + 1e-12);
    }
    ++checked;
  }
  CHECK(checked == 25);
}

TEST_CASE("strengthened Young inequality on random pairs") {
  Rng rng(29);
  for (const auto& sys :
       {z2_scalar(), torus(1, 3), torus(1, 2), heis_scalar(), cyclic_m2(6)}) {
    for (int it = 0; it < 50; ++it) {
      const CrossSection psi = random_section(sys, rng, 2, 6, false);
      const CrossSection phi = random_section(sys, rng, 2, 6, false);
      const double lhs = norm_linf(convolve(psi, phi));
      const double rhs = norm_lp(psi, 2.0) * norm_l2e(phi);
      CHECK(lhs <= rhs * (1 + 1e-9) + 1e-14);
    }
  }
}

TEST_CASE("interpolation bound l1 <= A linf^{1/(p+1)} l1nu^{p/(p+1)}") {
  auto sys = z_scalar();
  const Weight nu = word_weight(sys->group());
  const IntegrabilityReport ir = weight_integrability(nu, 2.0, 10000);
  const double B = ir.partial_sum + ir.tail_estimate;
  const double A = 2.0 * std::pow(B, 1.0 / 3.0);
  Rng rng(31);
  for (int it = 0; it < 200; ++it) {
    const CrossSection phi = random_section(sys, rng, 4, 10, false);
    const double lhs = phi.norm_l1();
    const double rhs = A * std::pow(norm_linf(phi), 1.0 / 3.0) *
                       std::pow(norm_lp_weighted(phi, 1.0, nu), 2.0 / 3.0);
    CHECK(lhs <= rhs * (1 + 1e-9));
  }
}

TEST_CASE("Gelfand radius sequences") {
  auto sys = z_scalar();
  SUBCASE("Laplacian roots are exactly 2 at every doubling") {
    const GelfandReport g = spectral_radius_gelfand(laplacian(sys), 8);
    for (double r : g.roots) CHECK(r == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g.raw == doctest::Approx(2.0));
    CHECK(g.aitken == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("unit and shift have radius 1") {
    CHECK(spectral_radius_gelfand(CrossSection::unit(sys), 4).raw == doctest::Approx(1.0));
    CHECK(spectral_radius_gelfand(scalar_delta(sys, pt({1}), {1, 0}), 6).raw ==
          doctest::Approx(1.0));
  }
  SUBCASE("budget trip reports a partial sequence") {
    auto h = heis_scalar();
    const GelfandReport g = spectral_radius_gelfand(laplacian(h), 8, nullptr, 500);
    CHECK(g.budget_hit);
    CHECK(g.doublings < 8);
    CHECK(!g.roots.empty());
  }
}

TEST_CASE("weighted Gelfand sequence converges to the same radius on Z") {
  auto sys = z_scalar();
  const Weight nu = word_weight(sys->group());
  CrossSection phi = scalar_delta(sys, pt({0}), {2, 0});
  phi += scalar_delta(sys, pt({1}), {-0.5, 0});
  phi += scalar_delta(sys, pt({-1}), {-0.5, 0});
  const GelfandReport gw = spectral_radius_gelfand(phi, 9, &nu);
  const GelfandReport g = spectral_radius_gelfand(phi, 9);
  // symbol 2 - cos(theta): radius 3
  CHECK(std::abs(g.aitken - 3.0) / 3.0 < 2e-2);
  CHECK(std::abs(gw.aitken - 3.0) / 3.0 < 2e-2);
}

TEST_CASE("l2e is dominated by the truncated operator norm plus slack") {
  Rng rng(37);
  for (const auto& sys : {cyclic_m2(4), cyclic_carry(6, 0.4)}) {
    for (int it = 0; it < 10; ++it) {
      const CrossSection phi = random_section(
          sys, rng, static_cast<int>(sys->group().order()), 6, false);
      const NormReport op = opnorm_estimate(phi, static_cast<int>(sys->group().order()));
      CHECK(norm_l2e(phi) <= op.value * (1 + 1e-9) + 1e-12);
    }
  }
  const CrossSection lap = laplacian(z_scalar());
  CHECK(norm_l2e(lap) <= opnorm_estimate(lap, 64).value + 1e-3);
}

TEST_CASE("column and algebra representations produce the same scalar spectra") {
  // two independent constructions of the regular representation: the
  // covariant-pair formula (matrix) and left convolution on basis sections
  // (hs_matrix) must have matching eigenvalue sets for scalar fibers
  Rng rng(41);
  for (const auto& sys : {cyclic_carry(5, 0.37), cyclic_carry(7, 0.11)}) {
    TruncatedRep rep(sys, static_cast<int>(sys->group().order()));
    const CrossSection phi =
        random_section(sys, rng, static_cast<int>(sys->group().order()), 4, false);
    const Eigen::MatrixXcd a = rep.matrix(phi);
    const Eigen::MatrixXcd b = rep.hs_matrix(phi, 8192);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ea(a, false), eb(b, false);
    for (Eigen::Index i = 0; i < ea.eigenvalues().size(); ++i) {
      double best = 1e300;
      for (Eigen::Index j = 0; j < eb.eigenvalues().size(); ++j)
        best = std::min(best, std::abs(ea.eigenvalues()(i) - eb.eigenvalues()(j)));
      CHECK(best < 1e-8);
    }
  }
}
