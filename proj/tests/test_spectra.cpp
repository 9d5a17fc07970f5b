#include <doctest.h>
#include <fellband/spectra.hpp>
#include <fellband/weight.hpp>

#include "helpers.hpp"

using namespace fellband;
using namespace fellband::testing;

TEST_CASE("finite spectrum of the unit is {1}") {
  auto sys = cyclic_m2(4);
  const SpectrumEstimate sp = finite_group_spectrum(CrossSection::unit(sys));
  for (Complex v : sp.values) CHECK(std::abs(v - Complex(1, 0)) < 1e-10);
}

TEST_CASE("finite spectrum of the cyclic shift is the fourth roots of unity") {
  auto sys = TwistedSystem::trivial(GroupModel::cyclic(4));
  const SpectrumEstimate sp = finite_group_spectrum(scalar_delta(sys, pt({1}), {1, 0}));
  REQUIRE(sp.values.size() == 4);
  for (Complex v : sp.values) {
    CHECK(std::abs(std::abs(v) - 1.0) < 1e-10);
    CHECK(std::abs(std::pow(v, 4) - Complex(1, 0)) < 1e-8);
  }
}

TEST_CASE("untwisted cyclic spectra match the circulant oracle") {
  auto sys = TwistedSystem::trivial(GroupModel::cyclic(6));
  Rng rng(3);
  const CrossSection phi = random_section(sys, rng, 6, 5, false);
  const SpectrumEstimate sp = finite_group_spectrum(phi);

  std::vector<Complex> oracle;
  for (int k = 0; k < 6; ++k) {
    Complex s(0, 0);
    for (const auto& [x, a] : phi.entries())
      s += a.scalar_value() * std::polar(1.0, kTwoPi * k * static_cast<double>(x[0]) / 6.0);
    oracle.push_back(s);
  }
  // every oracle eigenvalue appears in the finite spectrum
  for (Complex c : oracle) {
    double best = 1e300;
    for (Complex v : sp.values) best = std::min(best, std::abs(v - c));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("perm-diag self-adjoint sections have real spectrum") {
  auto sys = TwistedSystem::perm_diag_translation(GroupModel::cyclic(3));
  Rng rng(5);
  for (int it = 0; it < 5; ++it) {
    const CrossSection phi = random_section(sys, rng, 3, 4, true);
    const SpectrumEstimate sp = finite_group_spectrum(phi, 8192);
    for (Complex v : sp.values) CHECK(std::abs(v.imag()) < 1e-9);
  }
}

TEST_CASE("finite-group spectral radius equals the representation norm") {
  Rng rng(7);
  for (const auto& sys : {cyclic_carry(5, 0.23), cyclic_m2(4)}) {
    for (int it = 0; it < 5; ++it) {
      const CrossSection phi = random_section(
          sys, rng, static_cast<int>(sys->group().order()), 5, true);
      const SpectrumEstimate sp = finite_group_spectrum(phi, 8192);
      double rho = 0.0;
      for (Complex v : sp.values) rho = std::max(rho, std::abs(v));
      const Eigen::MatrixXcd m = finite_rep_matrix(phi);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
      CHECK(std::abs(svd.singularValues()(0) - rho) <= 1e-8 * std::max(1.0, rho));
    }
  }
}

TEST_CASE("Z^d symbol spectra") {
  auto sys = z_scalar();
  SUBCASE("Laplacian hull is [-2,2]") {
    const SpectrumEstimate sp = zd_symbol_spectrum(laplacian(sys));
    REQUIRE(sp.has_hull);
    CHECK(sp.lo == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(sp.hi == doctest::Approx(2.0).epsilon(1e-6));
  }
  SUBCASE("unit point mass is {1}") {
    const SpectrumEstimate sp = zd_symbol_spectrum(scalar_delta(sys, pt({0}), {1, 0}));
    REQUIRE(sp.has_hull);
    CHECK(sp.lo == doctest::Approx(1.0));
    CHECK(sp.hi == doctest::Approx(1.0));
  }
  SUBCASE("squared Laplacian shifts to [0,4]") {
    CrossSection phi = scalar_delta(sys, pt({2}), {1, 0});
    phi += scalar_delta(sys, pt({0}), {2, 0});
    phi += scalar_delta(sys, pt({-2}), {1, 0});
    const SpectrumEstimate sp = zd_symbol_spectrum(phi);
    REQUIRE(sp.has_hull);
    CHECK(sp.lo == doctest::Approx(0.0).epsilon(1e-5));
    CHECK(sp.hi == doctest::Approx(4.0).epsilon(1e-6));
  }
}

TEST_CASE("torus symbol oracle") {
  SUBCASE("theta = 1/2 Harper hull is [-2sqrt2, 2sqrt2]") {
    auto sys = torus(1, 2);
    const CrossSection harper = laplacian(sys);
    const SpectrumEstimate sp = nc_torus_symbol_spectrum(harper, 64);
    const double target = 2.0 * std::sqrt(2.0);
    REQUIRE(sp.has_hull);
    CHECK(sp.lo == doctest::Approx(-target).epsilon(1e-6));
    CHECK(sp.hi == doctest::Approx(target).epsilon(1e-6));
    CHECK(nc_torus_symbol_opnorm(harper, 64) == doctest::Approx(target).epsilon(1e-9));
  }
  SUBCASE("theta = 0 reduces to the Z^2 symbol") {
    auto sys = torus(0, 1);
    const CrossSection harper = laplacian(sys);
    const SpectrumEstimate sp = nc_torus_symbol_spectrum(harper, 64);
    auto plain = TwistedSystem::trivial(GroupModel::zd(2));
    const SpectrumEstimate ref = zd_symbol_spectrum(laplacian(plain), 64);
    REQUIRE(sp.has_hull);
    REQUIRE(ref.has_hull);
    CHECK(sp.lo == doctest::Approx(ref.lo).epsilon(1e-9));
    CHECK(sp.hi == doctest::Approx(ref.hi).epsilon(1e-9));
  }
  SUBCASE("theta = 1/3 Harper bands are symmetric and the flux is mod 1") {
    auto sys = torus(1, 3);
    const CrossSection harper = laplacian(sys);
    const SpectrumEstimate sp = nc_torus_symbol_spectrum(harper, 64);
    REQUIRE(sp.has_hull);
    CHECK(sp.hi == doctest::Approx(-sp.lo).epsilon(1e-9));
    CHECK(sp.hi > 2.0);
    CHECK(sp.hi < 2.9);

    auto sys4 = torus(4, 3);  // theta = 4/3 == 1/3 mod 1
    const CrossSection harper4 = laplacian(sys4);
    CHECK(nc_torus_symbol_opnorm(harper4, 32) ==
          doctest::Approx(nc_torus_symbol_opnorm(harper, 32)).epsilon(1e-12));
  }
}

TEST_CASE("symbol hull endpoints match the truncated operator norm") {
  auto sys = z2_scalar();
  const CrossSection lap = laplacian(sys);
  const SpectrumEstimate sp = zd_symbol_spectrum(lap, 128);
  const NormReport op = opnorm_estimate(lap, 40);
  REQUIRE(sp.has_hull);
  CHECK(std::max(std::abs(sp.lo), std::abs(sp.hi)) >= op.value - 1e-9);
  CHECK(std::max(std::abs(sp.lo), std::abs(sp.hi)) <= op.value + 5e-2);
}

TEST_CASE("radius invariance on a small instance set") {
  Rng rng(11);
  std::vector<RadiusInstance> instances;
  {
    RadiusInstance inst(laplacian(z_scalar()));
    inst.label = "Z laplacian";
    inst.oracle = RadiusInstance::Oracle::ZdSymbol;
    inst.doublings = 8;
    instances.push_back(std::move(inst));
  }
  {
    RadiusInstance inst(laplacian(torus(1, 3)));
    inst.label = "torus 1/3 harper";
    inst.oracle = RadiusInstance::Oracle::TorusSymbol;
    inst.doublings = 7;
    instances.push_back(std::move(inst));
  }
  {
    RadiusInstance inst(random_section(cyclic_m2(4), rng, 4, 5, true));
    inst.label = "cyclic4 M2";
    inst.oracle = RadiusInstance::Oracle::FiniteExact;
    inst.doublings = 7;
    instances.push_back(std::move(inst));
  }
  const RadiusSuiteResult suite = radius_invariance_suite(std::move(instances));
  for (const auto& row : suite.rows) {
    INFO(row.label, " ratio=", row.ratio);
    CHECK(row.pass);
  }
  CHECK(suite.pass);
}

TEST_CASE("wiener inversion check on Z") {
  auto sys = z_scalar();
  auto ball = std::make_shared<CayleyBall>(sys->group(), sys->group().standard_generators());
  WeightSpec ws;
  ws.kind = WeightSpec::Kind::WordLength;
  const Weight nu = make_weight(ball, ws);

  SUBCASE("strictly positive symbol passes and matches Fourier division") {
    CrossSection phi = scalar_delta(sys, pt({0}), {2, 0});
    phi += scalar_delta(sys, pt({1}), {-0.5, 0});
    phi += scalar_delta(sys, pt({-1}), {-0.5, 0});
    const WienerReport rep = wiener_inversion_check(phi, 1.0, nu, 1e-9);
    CHECK(rep.invertible);
    CHECK(rep.pass);
    CHECK(rep.oracle_max_dev <= 1e-8);
  }
  SUBCASE("the unit inverts to itself") {
    const CrossSection d0 = scalar_delta(sys, pt({0}), {1, 0});
    const WienerReport rep = wiener_inversion_check(d0, 0.5, nu, 1e-10);
    CHECK(rep.invertible);
    CHECK(rep.residual_weighted < 1e-12);
  }
  SUBCASE("vanishing symbol surfaces NotInvertible") {
    CrossSection phi = scalar_delta(sys, pt({0}), {2, 0});
    phi += scalar_delta(sys, pt({1}), {-1, 0});
    phi += scalar_delta(sys, pt({-1}), {-1, 0});
    CHECK_THROWS_AS(wiener_inversion_check(phi, 0.0, nu, 1e-8), NotInvertible);
  }
}

TEST_CASE("truncated operator hull sits inside the true hull and tightens") {
  auto sys = z_scalar();
  const CrossSection lap = laplacian(sys);
  const SpectrumEstimate s50 = truncated_spectrum_hull(lap, 50);
  const SpectrumEstimate s200 = truncated_spectrum_hull(lap, 200);
  REQUIRE(s200.has_hull);
  CHECK(s200.lo >= -2.0 - 1e-9);
  CHECK(s200.hi <= 2.0 + 1e-9);
  CHECK(s200.hi >= s50.hi - 1e-12);
  CHECK(s200.lo <= s50.lo + 1e-12);
  CHECK(s200.hi == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(s200.lo == doctest::Approx(-2.0).epsilon(1e-2));
}

TEST_CASE("Gelfand radii under different l^p norms coincide on finite groups") {
  // compact-group reduction: the L^p algebras share one spectral radius
  Rng rng(13);
  for (const auto& sys : {cyclic_m2(4), cyclic_carry(6, 0.29)}) {
    const CrossSection phi =
        random_section(sys, rng, static_cast<int>(sys->group().order()), 5, true);
    const SpectrumEstimate sp = finite_group_spectrum(phi, 8192);
    double rho = 0.0;
    for (Complex v : sp.values) rho = std::max(rho, std::abs(v));

    for (double p : {1.0, 2.0, 4.0}) {
      CrossSection pw = phi;
      std::vector<double> roots;
      for (int k = 0; k <= 7; ++k) {
        if (k > 0) pw = convolve(pw, pw);
        roots.push_back(std::pow(norm_lp(pw, p), 1.0 / std::pow(2.0, k)));
      }
      const std::size_t n = roots.size();
      double est = roots.back();
      const double denom = roots[n - 1] - 2 * roots[n - 2] + roots[n - 3];
      if (std::abs(denom) > 1e-14)
        est = roots[n - 1] -
              (roots[n - 1] - roots[n - 2]) * (roots[n - 1] - roots[n - 2]) / denom;
      INFO("p=", p, " est=", est, " rho=", rho);
      CHECK(std::abs(est - rho) <= 2e-2 * std::max(rho, 1e-300));
    }
  }
}

TEST_CASE("normalized Haar measure leaves exact finite spectra consistent") {
  GroupModel g = GroupModel::cyclic(6);
  g.set_normalized_measure(true);
  auto sys = TwistedSystem::trivial(g);
  const SpectrumEstimate unit_sp = finite_group_spectrum(CrossSection::unit(sys));
  for (Complex v : unit_sp.values) CHECK(std::abs(v - Complex(1, 0)) < 1e-10);

  // normalized counting measure: the shift's spectrum is still the root set,
  // scaled by the measure of a point through the convolution
  CrossSection d1 = CrossSection::delta(sys, Point({1}), Fiber::scalar({6, 0}));
  const SpectrumEstimate sp = finite_group_spectrum(d1);
  REQUIRE(sp.values.size() == 6);
  for (Complex v : sp.values) CHECK(std::abs(std::abs(v) - 1.0) < 1e-10);
}
