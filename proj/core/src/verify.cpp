#include "fellband/verify.hpp"

#include <cmath>
#include <functional>

#include "fellband/calculus.hpp"
#include "fellband/inversion.hpp"
#include "fellband/spectra.hpp"

namespace fellband {

namespace {

struct Ctx {
  VerifyOptions opts;

  Rng rng(std::uint64_t tag) const { return Rng(opts.seed ^ (tag * 0x9e3779b97f4a7c15ULL)); }
};

CrossSection random_section(TwistedSystem::Ptr sys, Rng& rng, int radius, int points,
                            bool selfadjoint) {
  CayleyBall ball(sys->group(), sys->group().standard_generators());
  const std::vector<Point> pts = ball.ball(radius);
  CrossSection s(sys);
  for (int i = 0; i < points; ++i) {
    const Point& x = pts[rng.below(pts.size())];
    Fiber f = Fiber::zero(sys->fiber_dim());
    for (int a = 0; a < sys->fiber_dim(); ++a)
      for (int b = 0; b < sys->fiber_dim(); ++b) f.set(a, b, rng.complex_gaussian());
    s.accumulate(x, f);
  }
  s.prune();
  if (selfadjoint) {
    CrossSection adj = involution(s);
    s += adj;
    s *= Complex(0.5, 0);
    s.prune();
  }
  return s;
}

std::vector<TwistedSystem::Ptr> standard_systems() {
  const double a = 0.7;
  return {
      TwistedSystem::trivial(GroupModel::zd(2)),
      TwistedSystem::nc_torus(GroupModel::zd(2), 1, 3),
      TwistedSystem::nc_torus(GroupModel::zd(2), 1, 2),
      TwistedSystem::trivial(GroupModel::heis3()),
      TwistedSystem::inner_cyclic_power(
          GroupModel::cyclic(6),
          Fiber::matrix(2, {Complex(std::cos(a), 0), Complex(-std::sin(a), 0),
                            Complex(std::sin(a), 0), Complex(std::cos(a), 0)})),
  };
}

CheckResult run_check(const std::string& name,
                      const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.name = name;
  r.pass = true;
  try {
    body(r);
  } catch (const std::exception& e) {
    r.pass = false;
    r.witness = std::string("exception: ") + e.what();
  }
  return r;
}

void note_worst(CheckResult& r, double value, double limit, const std::string& where) {
  if (value > r.worst) {
    r.worst = value;
    r.witness = where;
  }
  if (value > limit) r.pass = false;
}

Weight word_weight(const GroupModel& g, std::size_t budget) {
  auto ball = std::make_shared<CayleyBall>(g, g.standard_generators(), budget);
  WeightSpec spec;
  spec.kind = WeightSpec::Kind::WordLength;
  return make_weight(ball, spec);
}

SuiteReport suite_groups(const Ctx& ctx) {
  SuiteReport rep;
  rep.suite = "groups";

  rep.checks.push_back(run_check("group-axioms-sampled", [&](CheckResult& r) {
    Rng rng = ctx.rng(1);
    for (const GroupModel& g :
         {GroupModel::zd(2), GroupModel::heis3(), GroupModel::cyclic(6),
          GroupModel::direct_sum_z2(10)}) {
      CayleyBall ball(g, g.standard_generators());
      const std::vector<Point> pts = ball.ball(3);
      for (int it = 0; it < 200; ++it) {
        const Point x = pts[rng.below(pts.size())];
        const Point y = pts[rng.below(pts.size())];
        const Point z = pts[rng.below(pts.size())];
        const bool inv_ok = g.multiply(x, g.inverse(x)) == g.identity();
        const bool assoc_ok =
            g.multiply(g.multiply(x, y), z) == g.multiply(x, g.multiply(y, z));
        note_worst(r, (inv_ok && assoc_ok) ? 0.0 : 1.0, 0.5,
                   g.describe() + " at " + x.str());
      }
    }
  }));

  rep.checks.push_back(run_check("ball-sizes-monotone-and-zd-exact", [&](CheckResult& r) {
    GroupModel g = GroupModel::zd(2);
    CayleyBall ball(g, g.standard_generators());
    for (int n = 0; n <= 14; ++n) {
      const auto expect = static_cast<std::size_t>(2 * n * n + 2 * n + 1);
      note_worst(r, ball.ball_size(n) == expect ? 0.0 : 1.0, 0.5,
                 "Z^2 ball " + std::to_string(n));
    }
    GroupModel h = GroupModel::heis3();
    CayleyBall hb(h, h.standard_generators());
    std::size_t prev = 0;
    for (int n = 0; n <= 10; ++n) {
      note_worst(r, hb.ball_size(n) >= prev ? 0.0 : 1.0, 0.5,
                 "Heis3 ball " + std::to_string(n));
      prev = hb.ball_size(n);
    }
  }));

  rep.checks.push_back(run_check("weight-axioms-with-stored-C", [&](CheckResult& r) {
    Rng rng = ctx.rng(2);
    for (const GroupModel& g : {GroupModel::zd(1), GroupModel::zd(2), GroupModel::heis3()}) {
      for (double s : {1.0, 2.0}) {
        auto ball = std::make_shared<CayleyBall>(g, g.standard_generators());
        WeightSpec spec;
        spec.kind = s == 1.0 ? WeightSpec::Kind::WordLength
                             : WeightSpec::Kind::PowerOfWordLength;
        spec.s = s;
        const Weight nu = make_weight(ball, spec);
        const double C = nu.poly_constant_C();
        const std::vector<Point> pts = ball->ball(4);
        for (int it = 0; it < 1000; ++it) {
          const Point x = pts[rng.below(pts.size())];
          const Point y = pts[rng.below(pts.size())];
          const double lhs = nu(g.multiply(x, y));
          note_worst(r, lhs / (nu(x) * nu(y)), 1.0 + 1e-12,
                     g.describe() + " submult at " + x.str() + y.str());
          note_worst(r, lhs / (C * (nu(x) + nu(y))), 1.0 + 1e-12,
                     g.describe() + " poly at " + x.str() + y.str());
          note_worst(r, std::abs(nu(g.inverse(x)) - nu(x)), 1e-12,
                     g.describe() + " symmetry at " + x.str());
        }
      }
    }
  }));

  rep.checks.push_back(run_check("weight-integrability-d-plus-2", [&](CheckResult& r) {
    struct Case {
      GroupModel g;
      int n_max;
    };
    const Case cases[] = {{GroupModel::zd(1), 2000}, {GroupModel::zd(2), 300},
                          {GroupModel::heis3(), 40}};
    for (const Case& c : cases) {
      const Weight nu = word_weight(c.g, ctx.opts.budget_elems);
      const IntegrabilityReport ir =
          weight_integrability(nu, c.g.growth_order() + 2.0, c.n_max);
      note_worst(r, ir.converged ? 0.0 : 1.0, 0.5, c.g.describe());
    }
  }));

  return rep;
}

SuiteReport suite_bundle(const Ctx& ctx) {
  SuiteReport rep;
  rep.suite = "bundle";

  rep.checks.push_back(run_check("cocycle-axioms", [&](CheckResult& r) {
    for (const auto& sys : standard_systems()) {
      const CocycleReport c = cocycle_check(*sys, sys->group().is_finite() ? 2 : 3, 150,
                                            ctx.opts.seed);
      note_worst(r, c.worst_violation, 1e-10, sys->describe() + " " + c.witness);
    }
  }));

  rep.checks.push_back(run_check("adjoint-involutive-antimultiplicative", [&](CheckResult& r) {
    Rng rng = ctx.rng(3);
    for (const auto& sys : standard_systems()) {
      CayleyBall ball(sys->group(), sys->group().standard_generators());
      const std::vector<Point> pts = ball.ball(2);
      for (int it = 0; it < 60; ++it) {
        Fiber fa = Fiber::zero(sys->fiber_dim()), fb = Fiber::zero(sys->fiber_dim());
        for (int i = 0; i < sys->fiber_dim(); ++i)
          for (int j = 0; j < sys->fiber_dim(); ++j) {
            fa.set(i, j, rng.complex_gaussian());
            fb.set(i, j, rng.complex_gaussian());
          }
        const BundleElement b{fa, pts[rng.below(pts.size())]};
        const BundleElement c{fb, pts[rng.below(pts.size())]};
        const BundleElement bb = bundle_adjoint(*sys, bundle_adjoint(*sys, b));
        note_worst(r, (bb.a - b.a).frobenius(), 1e-11 * std::max(1.0, b.a.frobenius()),
                   sys->describe() + " involutive");
        const BundleElement lhs = bundle_adjoint(*sys, bundle_mul(*sys, b, c));
        const BundleElement rhs =
            bundle_mul(*sys, bundle_adjoint(*sys, c), bundle_adjoint(*sys, b));
        note_worst(r, (lhs.a - rhs.a).frobenius(),
                   1e-10 * std::max(1.0, lhs.a.frobenius()),
                   sys->describe() + " anti-multiplicative");
      }
    }
  }));

  rep.checks.push_back(run_check("fiber-cstar-identity", [&](CheckResult& r) {
    Rng rng = ctx.rng(4);
    for (int k : {1, 2, 4, 8}) {
      for (int it = 0; it < 250; ++it) {
        Fiber a = Fiber::zero(k);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) a.set(i, j, rng.complex_gaussian());
        const double lhs = fiber_mul(fiber_adjoint(a), a).operator_norm();
        const double rhs = a.operator_norm() * a.operator_norm();
        note_worst(r, std::abs(lhs - rhs) / std::max(rhs, 1e-300), 1e-12,
                   "k=" + std::to_string(k));
      }
    }
  }));

  return rep;
}

SuiteReport suite_sections(const Ctx& ctx) {
  SuiteReport rep;
  rep.suite = "sections";

  rep.checks.push_back(run_check("associativity", [&](CheckResult& r) {
    Rng rng = ctx.rng(5);
    for (const auto& sys : standard_systems()) {
      for (int it = 0; it < 200; ++it) {
        const CrossSection a = random_section(sys, rng, 2, 5, false);
        const CrossSection b = random_section(sys, rng, 2, 5, false);
        const CrossSection c = random_section(sys, rng, 2, 5, false);
        CrossSection d = convolve(convolve(a, b), c);
        d -= convolve(a, convolve(b, c));
        note_worst(r, d.norm_l1() /
                          std::max(1.0, a.norm_l1() * b.norm_l1() * c.norm_l1()),
                   1e-10, sys->describe());
      }
    }
  }));

  rep.checks.push_back(run_check("involution-antimultiplicative", [&](CheckResult& r) {
    Rng rng = ctx.rng(6);
    for (const auto& sys : standard_systems()) {
      for (int it = 0; it < 200; ++it) {
        const CrossSection a = random_section(sys, rng, 2, 5, false);
        const CrossSection b = random_section(sys, rng, 2, 5, false);
        CrossSection d = involution(convolve(a, b));
        d -= convolve(involution(b), involution(a));
        note_worst(r, d.norm_l1() / std::max(1.0, a.norm_l1() * b.norm_l1()), 1e-10,
                   sys->describe());
      }
    }
  }));

  rep.checks.push_back(run_check("l1-submultiplicative-isometric", [&](CheckResult& r) {
    Rng rng = ctx.rng(7);
    for (const auto& sys : standard_systems()) {
      for (int it = 0; it < 40; ++it) {
        const CrossSection a = random_section(sys, rng, 2, 5, false);
        const CrossSection b = random_section(sys, rng, 2, 5, false);
        note_worst(r, convolve(a, b).norm_l1() / (a.norm_l1() * b.norm_l1()),
                   1.0 + 1e-12, sys->describe() + " submult");
        note_worst(r,
                   std::abs(involution(a).norm_l1() - a.norm_l1()) /
                       std::max(a.norm_l1(), 1e-300),
                   1e-12, sys->describe() + " isometry");
      }
    }
  }));

  rep.checks.push_back(run_check("unit-neutral", [&](CheckResult& r) {
    Rng rng = ctx.rng(8);
    for (const auto& sys : standard_systems()) {
      const CrossSection phi = random_section(sys, rng, 2, 6, false);
      const CrossSection unit = CrossSection::unit(sys);
      CrossSection d = convolve(unit, phi);
      d -= phi;
      note_worst(r, d.norm_l1(), 1e-12, sys->describe());
    }
  }));

  return rep;
}

SuiteReport suite_norms(const Ctx& ctx) {
  SuiteReport rep;
  rep.suite = "norms";

  rep.checks.push_back(run_check("strengthened-young", [&](CheckResult& r) {
    Rng rng = ctx.rng(9);
    for (const auto& sys : standard_systems()) {
      for (int it = 0; it < 200; ++it) {
        const CrossSection psi = random_section(sys, rng, 2, 6, false);
        const CrossSection phi = random_section(sys, rng, 2, 6, false);
        const double lhs = norm_linf(convolve(psi, phi));
        const double rhs = norm_lp(psi, 2.0) * norm_l2e(phi);
        note_worst(r, lhs / std::max(rhs, 1e-300), 1.0 + 1e-9, sys->describe());
      }
    }
  }));

  rep.checks.push_back(run_check("pi2-equals-l2e-on-twisted-cyclic", [&](CheckResult& r) {
    Rng rng = ctx.rng(10);
    for (std::int64_t m = 3; m <= 8; ++m) {
      auto sys = TwistedSystem::inner_cyclic_power(
          GroupModel::cyclic(m), Fiber::scalar(std::polar(1.0, kTwoPi * 0.37)));
      for (int it = 0; it < 8; ++it) {
        const CrossSection phi = random_section(sys, rng, static_cast<int>(m), 5, false);
        const double est = norm_pi_p_estimate(phi, 2.0, static_cast<int>(m), 0, 1).value;
        const double l2e = norm_l2e(phi);
        note_worst(r, std::abs(est - l2e) / std::max(l2e, 1e-300), 1e-8,
                   "Cyclic{" + std::to_string(m) + "}");
      }
    }
  }));

  rep.checks.push_back(run_check("pi-p-ordering-shared-samples", [&](CheckResult& r) {
    Rng rng = ctx.rng(11);
    auto sys = TwistedSystem::nc_torus(GroupModel::zd(2), 1, 3);
    TruncatedRep trep(sys, 6);
    CayleyBall inner(sys->group(), sys->group().standard_generators());
    const std::vector<Point> pts = inner.ball(3);
    for (int it = 0; it < 10; ++it) {
      const CrossSection phi = random_section(sys, rng, 2, 6, false);
      for (int s = 0; s < 5; ++s) {
        Eigen::VectorXcd xi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(trep.dim()));
        for (const Point& x : pts)
          xi(static_cast<Eigen::Index>(*trep.point_index(x))) = rng.complex_gaussian();
        xi /= xi.norm();
        const double f1 = pi_p_value(trep, phi, 1.0, xi);
        const double f2 = pi_p_value(trep, phi, 2.0, xi);
        const double f4 = pi_p_value(trep, phi, 4.0, xi);
        note_worst(r, f4 / std::max(f2, 1e-300), 1.0 + 1e-12, "pi4<=pi2");
        note_worst(r, f2 / std::max(f1, 1e-300), 1.0 + 1e-12, "pi2<=pi1");
      }
      const double q4 = norm_pi_p_estimate(phi, 4.0, 6, 8, ctx.opts.seed).value;
      note_worst(r, norm_linf(phi) / std::max(q4, 1e-300), 1.0 + 1e-10, "linf<=pi4");
    }
  }));

  rep.checks.push_back(run_check("young-convolution-pi-triples", [&](CheckResult& r) {
    Rng rng = ctx.rng(12);
    auto sys = TwistedSystem::nc_torus(GroupModel::zd(2), 1, 3);
    TruncatedRep trep(sys, 8);
    CayleyBall inner(sys->group(), sys->group().standard_generators());
    const std::vector<Point> pts = inner.ball(2);
    for (int it = 0; it < 100; ++it) {
      const CrossSection psi = random_section(sys, rng, 1, 4, false);
      const CrossSection phi = random_section(sys, rng, 1, 4, false);
      const CrossSection conv = convolve(psi, phi);
      Eigen::VectorXcd xi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(trep.dim()));
      for (const Point& x : pts)
        xi(static_cast<Eigen::Index>(*trep.point_index(x))) = rng.complex_gaussian();
      xi /= xi.norm();
      const double pi2 = norm_pi_p_estimate(phi, 2.0, 8, 0, 1).value;
      note_worst(r,
                 pi_p_value(trep, conv, 2.0, xi) /
                     std::max(norm_lp(psi, 1.0) * pi2, 1e-300),
                 1.0 + 1e-10, "(1,2,2)");
      note_worst(r,
                 pi_p_value(trep, conv, 4.0, xi) /
                     std::max(norm_lp(psi, 4.0 / 3.0) * pi2, 1e-300),
                 1.0 + 1e-10, "(4/3,2,4)");
      note_worst(r,
                 pi_p_value(trep, conv, 3.0, xi) /
                     std::max(norm_lp(psi, 1.0) * pi_p_value(trep, phi, 3.0, xi), 1e-300),
                 1.0 + 1e-10, "(1,3,3)");
    }
  }));

  rep.checks.push_back(run_check("interpolation-l1-linf-l1nu", [&](CheckResult& r) {
    const Weight nu = word_weight(GroupModel::zd(1), ctx.opts.budget_elems);
    const IntegrabilityReport ir = weight_integrability(nu, 2.0, 10000);
    const double a = 2.0 * std::pow(ir.partial_sum + ir.tail_estimate, 1.0 / 3.0);
    Rng rng = ctx.rng(13);
    auto sys = TwistedSystem::trivial(GroupModel::zd(1));
    for (int it = 0; it < 200; ++it) {
      const CrossSection phi = random_section(sys, rng, 4, 9, false);
      const double lhs = phi.norm_l1();
      const double rhs = a * std::pow(norm_linf(phi), 1.0 / 3.0) *
                         std::pow(norm_lp_weighted(phi, 1.0, nu), 2.0 / 3.0);
      note_worst(r, lhs / std::max(rhs, 1e-300), 1.0 + 1e-9, "Z random");
    }
  }));

  rep.checks.push_back(run_check("opnorm-monotone-in-R", [&](CheckResult& r) {
    auto sys = TwistedSystem::trivial(GroupModel::zd(1));
    CrossSection lap(sys);
    lap.accumulate(Point({1}), Fiber::scalar({1, 0}));
    lap.accumulate(Point({-1}), Fiber::scalar({1, 0}));
    double prev = 0.0;
    for (int radius : {8, 16, 32, 64, 128}) {
      const double v = opnorm_estimate(lap, radius).value;
      note_worst(r, prev - v, 1e-12, "R=" + std::to_string(radius));
      prev = v;
    }
    note_worst(r, std::abs(prev - 2.0), 1e-2, "limit 2");
  }));

  return rep;
}

SuiteReport suite_calculus(const Ctx& ctx) {
  SuiteReport rep;
  rep.suite = "calculus";

  rep.checks.push_back(run_check("series-identity-u-v", [&](CheckResult& r) {
    Rng rng = ctx.rng(14);
    for (const auto& sys : standard_systems()) {
      for (int it = 0; it < 20; ++it) {
        CrossSection phi = random_section(sys, rng, 1, 4, false);
        phi *= Complex(1.2 / std::max(phi.norm_l1(), 1e-12), 0);  // tame the series order
        const SeriesResult u = entire_apply(EntireSeries::U, phi, 1e-12);
        const SeriesResult v = entire_apply(EntireSeries::V, phi, 1e-12);
        CrossSection rhs = convolve(v.section, phi);
        CrossSection iphi = phi;
        iphi *= Complex(0, 1);
        rhs += iphi;
        rhs -= u.section;
        note_worst(r, rhs.norm_l1() / std::max(1.0, u.section.norm_l1()), 1e-9,
                   sys->describe());
      }
    }
  }));

  rep.checks.push_back(run_check("dixmier-contraction", [&](CheckResult& r) {
    Rng rng = ctx.rng(15);
    for (const auto& sys : standard_systems()) {
      for (int it = 0; it < 50; ++it) {
        CrossSection phi = random_section(sys, rng, 1, 4, true);
        phi *= Complex(1.2 / std::max(phi.norm_l1(), 1e-12), 0);
        const DixContractionReport c = dix_contraction_check(phi);
        note_worst(r, c.lhs / std::max(c.rhs, 1e-300), 1.0, sys->describe());
      }
    }
  }));

  rep.checks.push_back(run_check("w-sup-is-half", [&](CheckResult& r) {
    const DixContractionReport c =
        dix_contraction_check(CrossSection(TwistedSystem::trivial(GroupModel::zd(1))));
    note_worst(r, std::abs(c.w_sup - 0.5), 1e-9, "grid sup");
  }));

  rep.checks.push_back(run_check("growth-ceilings", [&](CheckResult& r) {
    auto sys = TwistedSystem::trivial(GroupModel::zd(1));
    CrossSection lap(sys);
    lap.accumulate(Point({1}), Fiber::scalar({1, 0}));
    lap.accumulate(Point({-1}), Fiber::scalar({1, 0}));
    std::vector<double> grid;
    for (double t = 8.0; t <= 64.0; t *= std::pow(2.0, 1.0 / 3.0)) grid.push_back(t);
    const OperatorGrowthProfile p1 = growth_profile_op(lap, grid);
    note_worst(r, p1.slope / 4.0, 1.0 + 0.0625, "plain slope vs 2d+2");
    note_worst(r, 0.3 / std::max(p1.slope, 1e-300), 1.0, "slope nontrivial");
    const Weight nu = word_weight(GroupModel::zd(1), ctx.opts.budget_elems);
    const OperatorGrowthProfile p2 = growth_profile_op(lap, grid, &nu);
    note_worst(r, p2.slope / 8.0, 1.0 + 0.03125, "weighted slope vs 2d+2+4delta");
  }));

  rep.checks.push_back(run_check("exp-unitary-under-representations", [&](CheckResult& r) {
    Rng rng = ctx.rng(16);
    auto sys = TwistedSystem::inner_cyclic_power(
        GroupModel::cyclic(5), Fiber::scalar(std::polar(1.0, kTwoPi * 0.23)));
    for (int it = 0; it < 5; ++it) {
      const CrossSection phi = random_section(sys, rng, 5, 4, true);
      const ExpResult e = exp_it(phi, 1.5 + it, 1e-10);
      const Eigen::Index dim = static_cast<Eigen::Index>(sys->group().order());
      const Eigen::MatrixXcd m = finite_rep_matrix(e.value.part) +
                                 e.value.scalar * Eigen::MatrixXcd::Identity(dim, dim);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
      for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        note_worst(r, std::abs(svd.singularValues()(i) - 1.0), 1e-9,
                   "t=" + format_double(1.5 + it));
    }
  }));

  return rep;
}

SuiteReport suite_inversion(const Ctx& ctx) {
  SuiteReport rep;
  rep.suite = "inversion";

  rep.checks.push_back(run_check("weighted-submultiplicativity", [&](CheckResult& r) {
    const Weight nu = word_weight(GroupModel::zd(1), ctx.opts.budget_elems);
    Rng rng = ctx.rng(17);
    auto sys = TwistedSystem::trivial(GroupModel::zd(1));
    for (int it = 0; it < 200; ++it) {
      const CrossSection phi = random_section(sys, rng, 3, 6, false);
      const CrossSection psi = random_section(sys, rng, 3, 6, false);
      const SubmultReport s = weighted_submult_check(phi, psi, nu, nu.poly_constant_C());
      note_worst(r, std::max(s.worst_ratio, s.diffeq_worst), 1.0 + 1e-9, "Z pair");
    }
  }));

  rep.checks.push_back(run_check("gendiff-fourth-power", [&](CheckResult& r) {
    const Weight nu = word_weight(GroupModel::zd(1), ctx.opts.budget_elems);
    const WeightConstants wc = weight_constants(nu, 2.0, 10000);
    Rng rng = ctx.rng(18);
    auto sys = TwistedSystem::trivial(GroupModel::zd(1));
    for (int it = 0; it < 200; ++it) {
      const CrossSection phi = random_section(sys, rng, 3, 6, false);
      const GendiffReport g = gendiff_check(phi, nu, wc);
      note_worst(r, g.ratio, 1.0 + 1e-9, "Z random");
    }
  }));

  rep.checks.push_back(run_check("constants-recompute", [&](CheckResult& r) {
    const Weight nu = word_weight(GroupModel::zd(1), ctx.opts.budget_elems);
    const WeightConstants wc = weight_constants(nu, 2.0, 10000);
    note_worst(r, std::abs(wc.B - (kPi * kPi / 3.0 - 1.0)), 1e-3, "B");
    note_worst(r, std::abs(wc.theta - 11.0 / 3.0), 1e-12, "theta");
    note_worst(r, std::abs(wc.A - 2.0 * std::pow(wc.B, 1.0 / 3.0)), 1e-12, "A");
    note_worst(r, wc.theta >= 4.0 ? 1.0 : 0.0, 0.5, "theta<4");
  }));

  rep.checks.push_back(run_check("neumann-inverse-vs-fourier-division", [&](CheckResult& r) {
    auto sys = TwistedSystem::trivial(GroupModel::zd(1));
    const Weight nu = word_weight(GroupModel::zd(1), ctx.opts.budget_elems);
    CrossSection phi(sys);
    phi.accumulate(Point({0}), Fiber::scalar({2, 0}));
    phi.accumulate(Point({1}), Fiber::scalar({-0.5, 0}));
    phi.accumulate(Point({-1}), Fiber::scalar({-0.5, 0}));
    NeumannOptions opts;
    opts.tol = 1e-9;
    const InversionResult inv = invert_neumann(phi, 3.0, 1.0, nu, opts);
    const double rr = 2.0 - std::sqrt(3.0);
    for (std::int64_t n = -10; n <= 10; ++n) {
      const double expect =
          std::pow(rr, std::abs(static_cast<double>(n))) / std::sqrt(3.0);
      note_worst(r,
                 std::abs(inv.inverse.at(Point({n})).scalar_value() - Complex(expect, 0)),
                 1e-8, "n=" + std::to_string(n));
    }
    note_worst(r, inv.residual_weighted, 1e-9, "residual");
  }));

  rep.checks.push_back(run_check("norm-control-bound-holds-and-monotone", [&](CheckResult& r) {
    const Weight nu = word_weight(GroupModel::zd(1), ctx.opts.budget_elems);
    const WeightConstants wc = weight_constants(nu, 2.0, 10000);
    auto sys = TwistedSystem::trivial(GroupModel::zd(1));
    CrossSection phi(sys);
    phi.accumulate(Point({0}), Fiber::scalar({2, 0}));
    phi.accumulate(Point({1}), Fiber::scalar({-0.5, 0}));
    phi.accumulate(Point({-1}), Fiber::scalar({-0.5, 0}));
    NeumannOptions opts;
    opts.tol = 1e-9;
    const InversionResult inv = invert_neumann(phi, 3.0, 1.0, nu, opts);
    const NormControlBound b = norm_control_bound(wc, norm_E(phi, nu), 3.0, 1.0);
    note_worst(r, b.finite ? 0.0 : 1.0, 0.5, "finite");
    note_worst(r, std::log(norm_E(inv.inverse, nu)) - b.log_value, 0.0, "bound holds");
    const NormControlBound b2 = norm_control_bound(wc, 2.0 * norm_E(phi, nu), 3.0, 1.0);
    note_worst(r, b.log_value - b2.log_value, 0.0, "monotone in E-norm");
  }));

  return rep;
}

SuiteReport suite_spectra(const Ctx& ctx) {
  SuiteReport rep;
  rep.suite = "spectra";

  rep.checks.push_back(run_check("finite-exactness", [&](CheckResult& r) {
    Rng rng = ctx.rng(19);
    auto sys = TwistedSystem::inner_cyclic_power(
        GroupModel::cyclic(5), Fiber::scalar(std::polar(1.0, kTwoPi * 0.23)));
    for (int it = 0; it < 5; ++it) {
      const CrossSection phi = random_section(sys, rng, 5, 4, true);
      const SpectrumEstimate sp = finite_group_spectrum(phi, 8192);
      double rho = 0.0;
      for (Complex v : sp.values) rho = std::max(rho, std::abs(v));
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(finite_rep_matrix(phi));
      note_worst(r, std::abs(svd.singularValues()(0) - rho) / std::max(rho, 1e-300),
                 1e-8, "cyclic5");
      for (Complex v : sp.values)
        note_worst(r, std::abs(v.imag()), 1e-9, "real spectrum");
    }
  }));

  rep.checks.push_back(run_check("symbol-hulls", [&](CheckResult& r) {
    auto sys = TwistedSystem::trivial(GroupModel::zd(1));
    CrossSection lap(sys);
    lap.accumulate(Point({1}), Fiber::scalar({1, 0}));
    lap.accumulate(Point({-1}), Fiber::scalar({1, 0}));
    const SpectrumEstimate sp = zd_symbol_spectrum(lap);
    note_worst(r, std::abs(sp.lo + 2.0), 1e-5, "lo");
    note_worst(r, std::abs(sp.hi - 2.0), 1e-5, "hi");

    auto tsys = TwistedSystem::nc_torus(GroupModel::zd(2), 1, 2);
    CrossSection harper(tsys);
    for (const Point& x : tsys->group().standard_generators().elements)
      if (!(x == tsys->group().identity())) harper.accumulate(x, Fiber::scalar({1, 0}));
    note_worst(r, std::abs(nc_torus_symbol_opnorm(harper, 64) - 2.0 * std::sqrt(2.0)),
               1e-9, "harper 1/2");
  }));

  rep.checks.push_back(run_check("wiener-inversion", [&](CheckResult& r) {
    auto sys = TwistedSystem::trivial(GroupModel::zd(1));
    const Weight nu = word_weight(GroupModel::zd(1), ctx.opts.budget_elems);
    CrossSection phi(sys);
    phi.accumulate(Point({0}), Fiber::scalar({2, 0}));
    phi.accumulate(Point({1}), Fiber::scalar({-0.5, 0}));
    phi.accumulate(Point({-1}), Fiber::scalar({-0.5, 0}));
    const WienerReport w = wiener_inversion_check(phi, 1.0, nu, 1e-9);
    note_worst(r, w.pass ? 0.0 : 1.0, 0.5, "2 - cos");
    note_worst(r, w.oracle_max_dev, 1e-8, "division oracle");
  }));

  rep.checks.push_back(run_check("radius-invariance-small", [&](CheckResult& r) {
    Rng rng = ctx.rng(20);
    std::vector<RadiusInstance> instances;
    {
      auto sys = TwistedSystem::trivial(GroupModel::zd(1));
      CrossSection lap(sys);
      lap.accumulate(Point({1}), Fiber::scalar({1, 0}));
      lap.accumulate(Point({-1}), Fiber::scalar({1, 0}));
      RadiusInstance inst(lap);
      inst.label = "Z laplacian";
      inst.oracle = RadiusInstance::Oracle::ZdSymbol;
      inst.doublings = 8;
      auto ball = std::make_shared<CayleyBall>(GroupModel::zd(1),
                                               GroupModel::zd(1).standard_generators());
      WeightSpec ws;
      ws.kind = WeightSpec::Kind::WordLength;
      inst.nu = std::make_shared<Weight>(make_weight(ball, ws));
      instances.push_back(std::move(inst));
    }
    {
      auto sys = TwistedSystem::nc_torus(GroupModel::zd(2), 1, 3);
      CrossSection harper(sys);
      for (const Point& x : sys->group().standard_generators().elements)
        if (!(x == sys->group().identity())) harper.accumulate(x, Fiber::scalar({1, 0}));
      RadiusInstance inst(harper);
      inst.label = "torus 1/3 harper";
      inst.oracle = RadiusInstance::Oracle::TorusSymbol;
      inst.doublings = 7;
      instances.push_back(std::move(inst));
    }
    {
      auto sys = TwistedSystem::inner_cyclic_power(
          GroupModel::cyclic(4),
          Fiber::matrix(2, {Complex(std::cos(0.7), 0), Complex(-std::sin(0.7), 0),
                            Complex(std::sin(0.7), 0), Complex(std::cos(0.7), 0)}));
      RadiusInstance inst(random_section(sys, rng, 4, 5, true));
      inst.label = "cyclic4 M2";
      inst.oracle = RadiusInstance::Oracle::FiniteExact;
      inst.doublings = 7;
      instances.push_back(std::move(inst));
    }
    const RadiusSuiteResult suite = radius_invariance_suite(std::move(instances));
    for (const auto& row : suite.rows)
      note_worst(r, std::abs(row.ratio - 1.0), suite.tol_ratio, row.label);
  }));

  return rep;
}

}  // namespace

std::vector<SuiteReport> run_verify(const std::string& selector, const VerifyOptions& opts) {
  Ctx ctx{opts};
  std::vector<SuiteReport> out;
  auto want = [&](const std::string& s) { return selector == "core" || selector == s; };
  if (want("groups")) out.push_back(suite_groups(ctx));
  if (want("bundle")) out.push_back(suite_bundle(ctx));
  if (want("sections")) out.push_back(suite_sections(ctx));
  if (want("norms")) out.push_back(suite_norms(ctx));
  if (want("calculus")) out.push_back(suite_calculus(ctx));
  if (want("inversion")) out.push_back(suite_inversion(ctx));
  if (want("spectra")) out.push_back(suite_spectra(ctx));
  if (out.empty()) throw ConfigError("unknown verify suite: " + selector);
  return out;
}

Json verify_report_json(const std::vector<SuiteReport>& reports, const VerifyOptions& opts) {
  Json suites = Json::array();
  bool all = true;
  for (const SuiteReport& s : reports) {
    Json checks = Json::array();
    for (const CheckResult& c : s.checks) {
      checks.push_back(Json{{"name", c.name},
                            {"pass", c.pass},
                            {"worst", format_double(c.worst)},
                            {"witness", c.witness},
                            {"budget", format_double(c.budget)}});
      all = all && c.pass;
    }
    suites.push_back(Json{{"suite", s.suite}, {"pass", s.pass()}, {"checks", checks}});
  }
  return Json{{"seed", opts.seed},
              {"budget_elems", opts.budget_elems},
              {"pass", all},
              {"suites", suites}};
}

}  // namespace fellband
