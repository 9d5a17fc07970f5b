#include "fellband/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace fellband {

namespace {

int finite_diameter(CayleyBall& ball) {
  int r = 1;
  while (!ball.exhausted()) {
    ball.grow_to(r);
    r *= 2;
    if (r > 1 << 20) throw BudgetExceeded("finite_diameter: group did not close");
  }
  return ball.grown_radius();
}

bool nearly_hermitian(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).norm() <= 1e-11 * std::max(1.0, m.norm());
}

}  // namespace

SpectrumEstimate finite_group_spectrum(const CrossSection& phi, std::size_t dim_cap) {
  const GroupModel& g = phi.group();
  if (!g.is_finite()) throw InvalidSpec("finite_group_spectrum: group must be finite");
  const std::size_t k = static_cast<std::size_t>(phi.fiber_dim());
  const std::size_t dim = k * k * static_cast<std::size_t>(g.order());
  if (dim > dim_cap)
    throw BudgetExceeded("finite_group_spectrum: dim " + std::to_string(dim) +
                             " exceeds cap",
                         dim);

  CayleyBall ball(g, g.standard_generators());
  const int diam = finite_diameter(ball);
  TruncatedRep rep(phi.system_ptr(), diam);
  const Eigen::MatrixXcd m = rep.hs_matrix(phi, dim_cap);

  SpectrumEstimate est;
  est.method = SpectrumEstimate::Method::FiniteExact;
  est.tolerance = 1e-12;
  if (nearly_hermitian(m)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      est.values.emplace_back(es.eigenvalues()(i), 0.0);
    est.has_hull = true;
    est.lo = es.eigenvalues().minCoeff();
    est.hi = es.eigenvalues().maxCoeff();
  } else {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      est.values.push_back(es.eigenvalues()(i));
  }
  std::sort(est.values.begin(), est.values.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return est;
}

Eigen::MatrixXcd finite_rep_matrix(const CrossSection& phi, std::size_t dim_cap) {
  const GroupModel& g = phi.group();
  if (!g.is_finite()) throw InvalidSpec("finite_rep_matrix: group must be finite");
  const std::size_t dim =
      static_cast<std::size_t>(phi.fiber_dim()) * static_cast<std::size_t>(g.order());
  if (dim > dim_cap)
    throw BudgetExceeded("finite_rep_matrix: dim exceeds cap", dim);
  CayleyBall ball(g, g.standard_generators());
  const int diam = finite_diameter(ball);
  TruncatedRep rep(phi.system_ptr(), diam);
  return rep.matrix(phi);
}

Complex zd_symbol(const CrossSection& phi, const std::vector<double>& theta) {
  const GroupModel& g = phi.group();
  if (g.kind() != GroupModel::Kind::Zd)
    throw InvalidSpec("zd_symbol: group must be Z^d");
  if (static_cast<int>(theta.size()) != g.coord_count())
    throw InvalidSpec("zd_symbol: wrong angle count");
  if (phi.fiber_dim() != 1 || !phi.system().trivial_twist())
    throw InvalidSpec("zd_symbol: needs scalar untwisted section");
  Complex s(0, 0);
  for (const auto& [x, a] : phi.entries()) {
    double ph = 0.0;
    for (int i = 0; i < g.coord_count(); ++i) ph += theta[static_cast<std::size_t>(i)] * x[i];
    s += a.scalar_value() * std::polar(1.0, ph);
  }
  return s;
}

namespace {

template <typename Fn>
void for_grid(int d, int n, const Fn& fn) {
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> theta(static_cast<std::size_t>(d), 0.0);
  while (true) {
    for (int i = 0; i < d; ++i)
      theta[static_cast<std::size_t>(i)] = kTwoPi * idx[static_cast<std::size_t>(i)] / n;
    fn(theta);
    int i = 0;
    for (; i < d; ++i) {
      if (++idx[static_cast<std::size_t>(i)] < n) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
    if (i == d) break;
  }
}

}  // namespace

SpectrumEstimate zd_symbol_spectrum(const CrossSection& phi, int grid_n) {
  const int d = phi.group().coord_count();
  const bool sa = is_selfadjoint(phi, 1e-10 * std::max(1.0, phi.norm_l1()));
  const int cap = d >= 3 ? 128 : 8192;

  SpectrumEstimate est;
  est.method = SpectrumEstimate::Method::SymbolGrid;
  double lo = 0, hi = 0;
  int n = std::min(grid_n, d >= 3 ? 32 : grid_n);
  double prev_lo = 1e300, prev_hi = -1e300;
  while (true) {
    lo = 1e300;
    hi = -1e300;
    std::vector<Complex> vals;
    for_grid(d, n, [&](const std::vector<double>& theta) {
      const Complex v = zd_symbol(phi, theta);
      if (sa) {
        lo = std::min(lo, v.real());
        hi = std::max(hi, v.real());
      } else if (static_cast<int>(vals.size()) < 65536) {
        vals.push_back(v);
      }
    });
    est.resolution = n;
    if (!sa) {
      est.values = std::move(vals);
      break;
    }
    if ((std::abs(lo - prev_lo) < 1e-6 && std::abs(hi - prev_hi) < 1e-6) || 2 * n > cap)
      break;
    prev_lo = lo;
    prev_hi = hi;
    n *= 2;
  }
  if (sa) {
    est.has_hull = true;
    est.lo = lo;
    est.hi = hi;
    est.tolerance = 1e-6;
  }
  return est;
}

double zd_symbol_opnorm(const CrossSection& phi, int grid_n) {
  const int d = phi.group().coord_count();
  double m = 0.0;
  for_grid(d, grid_n, [&](const std::vector<double>& theta) {
    m = std::max(m, std::abs(zd_symbol(phi, theta)));
  });
  return m;
}

double zd_symbol_min_abs(const CrossSection& phi, int grid_n) {
  const int d = phi.group().coord_count();
  double m = 1e300;
  for_grid(d, grid_n, [&](const std::vector<double>& theta) {
    m = std::min(m, std::abs(zd_symbol(phi, theta)));
  });
  return m;
}

SpectrumEstimate truncated_spectrum_hull(const CrossSection& phi, int radius,
                                         std::size_t element_budget) {
  if (!is_selfadjoint(phi, 1e-10 * std::max(1.0, phi.norm_l1())))
    throw InvalidSpec("truncated_spectrum_hull: section must be self-adjoint");
  TruncatedRep rep(phi.system_ptr(), radius, element_budget);
  const std::size_t dim = rep.dim();
  const double shift = phi.norm_l1() + phi.group().point_mass();

  Eigen::VectorXcd tmp(static_cast<Eigen::Index>(dim));
  auto apply_shifted = [&](double sign) {
    return [&rep, &phi, shift, sign, &tmp](const Eigen::VectorXcd& in,
                                           Eigen::VectorXcd& out) {
      rep.apply(phi, in, tmp);
      out = sign * tmp + shift * in;
    };
  };
  const double hi = lanczos_largest_eigenvalue(apply_shifted(1.0), dim) - shift;
  const double lo = shift - lanczos_largest_eigenvalue(apply_shifted(-1.0), dim);

  SpectrumEstimate est;
  est.method = SpectrumEstimate::Method::TruncatedOperator;
  est.radius = radius;
  est.has_hull = true;
  est.lo = lo;
  est.hi = hi;
  est.tolerance = 1e-10;
  return est;
}

Eigen::MatrixXcd nc_torus_symbol_matrix(const CrossSection& phi, double k1, double k2) {
  const TwistedSystem& sys = phi.system();
  const double th = sys.theta();
  // rational flux a/q
  std::int64_t q = 1;
  for (; q <= 16; ++q) {
    const double aq = th * static_cast<double>(q);
    if (std::abs(aq - std::round(aq)) < 1e-12) break;
  }
  if (q > 16) throw InvalidSpec("nc_torus_symbol_matrix: theta must be a/q with q <= 16");
  const std::int64_t a = static_cast<std::int64_t>(std::llround(th * static_cast<double>(q)));
  const Eigen::Index qq = static_cast<Eigen::Index>(q);
  const Complex zeta = std::polar(1.0, kTwoPi * static_cast<double>(a) / static_cast<double>(q));

  // U = clock diag(zeta^j), V = shift e_j -> e_{j+1}; U V = zeta V U.
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(qq, qq), v = Eigen::MatrixXcd::Zero(qq, qq);
  for (Eigen::Index j = 0; j < qq; ++j) {
    u(j, j) = std::pow(zeta, static_cast<double>(j));
    v((j + 1) % qq, j) = Complex(1, 0);
  }

  auto ipow_matrix = [&](const Eigen::MatrixXcd& m, std::int64_t e) {
    // m^q = 1, so reduce mod q
    std::int64_t r = ((e % q) + q) % q;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(qq, qq);
    for (std::int64_t i = 0; i < r; ++i) out = out * m;
    return out;
  };

  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(qq, qq);
  for (const auto& [x, f] : phi.entries()) {
    const double phase = k1 * static_cast<double>(x[0]) + k2 * static_cast<double>(x[1]);
    acc += f.scalar_value() * std::polar(1.0, phase) *
           (ipow_matrix(v, x[0]) * ipow_matrix(u, x[1]));
  }
  return acc;
}

SpectrumEstimate nc_torus_symbol_spectrum(const CrossSection& phi, int grid_n) {
  const bool sa = is_selfadjoint(phi, 1e-10 * std::max(1.0, phi.norm_l1()));
  SpectrumEstimate est;
  est.method = SpectrumEstimate::Method::SymbolGrid;

  int n = grid_n;
  double prev_lo = 1e300, prev_hi = -1e300;
  while (true) {
    double lo = 1e300, hi = -1e300;
    std::vector<Complex> vals;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Eigen::MatrixXcd m =
            nc_torus_symbol_matrix(phi, kTwoPi * i / n, kTwoPi * j / n);
        if (sa) {
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
          lo = std::min(lo, es.eigenvalues().minCoeff());
          hi = std::max(hi, es.eigenvalues().maxCoeff());
        } else {
          Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
          for (Eigen::Index t = 0; t < es.eigenvalues().size(); ++t)
            if (static_cast<int>(vals.size()) < 65536) vals.push_back(es.eigenvalues()(t));
        }
      }
    est.resolution = n;
    if (!sa) {
      est.values = std::move(vals);
      break;
    }
    if ((std::abs(lo - prev_lo) < 1e-6 && std::abs(hi - prev_hi) < 1e-6) || 2 * n > 1024) {
      est.has_hull = true;
      est.lo = lo;
      est.hi = hi;
      est.tolerance = 1e-6;
      break;
    }
    prev_lo = lo;
    prev_hi = hi;
    n *= 2;
  }
  return est;
}

double nc_torus_symbol_opnorm(const CrossSection& phi, int grid_n) {
  double m = 0.0;
  for (int i = 0; i < grid_n; ++i)
    for (int j = 0; j < grid_n; ++j) {
      const Eigen::MatrixXcd s =
          nc_torus_symbol_matrix(phi, kTwoPi * i / grid_n, kTwoPi * j / grid_n);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s);
      m = std::max(m, svd.singularValues()(0));
    }
  return m;
}

RadiusSuiteResult radius_invariance_suite(std::vector<RadiusInstance> instances,
                                          double tol_ratio) {
  RadiusSuiteResult suite;
  suite.tol_ratio = tol_ratio;
  bool all_pass = true;

  for (RadiusInstance& inst : instances) {
    RadiusInstanceResult row;
    row.label = inst.label;
    try {
      const GelfandReport g =
          spectral_radius_gelfand(inst.phi, inst.doublings, nullptr, inst.support_budget);
      row.rho_raw = g.raw;
      row.rho_aitken = g.aitken;
      row.budget_hit = g.budget_hit;
      if (inst.nu) {
        const GelfandReport gw = spectral_radius_gelfand(inst.phi, inst.doublings,
                                                         inst.nu.get(), inst.support_budget);
        row.rho_w_raw = gw.raw;
        row.rho_w_aitken = gw.aitken;
        row.budget_hit = row.budget_hit || gw.budget_hit;
      }

      switch (inst.oracle) {
        case RadiusInstance::Oracle::FiniteExact: {
          const SpectrumEstimate sp = finite_group_spectrum(inst.phi);
          double rho = 0.0;
          for (Complex v : sp.values) rho = std::max(rho, std::abs(v));
          row.opnorm = rho;
          row.opnorm_method = "finite-exact";
          // cross-construction anchor: Hermitian rep norm vs spectrum
          const Eigen::MatrixXcd m = finite_rep_matrix(inst.phi);
          Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
          row.exact_pair_ok =
              std::abs(svd.singularValues()(0) - rho) <= 1e-8 * std::max(1.0, rho);
          break;
        }
        case RadiusInstance::Oracle::ZdSymbol:
          row.opnorm = zd_symbol_opnorm(inst.phi, inst.oracle_param > 0
                                                      ? inst.oracle_param
                                                      : 2048);
          row.opnorm_method = "zd-symbol";
          break;
        case RadiusInstance::Oracle::TorusSymbol:
          row.opnorm = nc_torus_symbol_opnorm(
              inst.phi, inst.oracle_param > 0 ? inst.oracle_param : 128);
          row.opnorm_method = "torus-symbol";
          break;
        case RadiusInstance::Oracle::Truncated: {
          const NormReport nr =
              inst.oracle_param > 0
                  ? opnorm_estimate(inst.phi, inst.oracle_param,
                                    OpNormOptions{300, 1e-12, inst.support_budget})
                  : opnorm_auto(inst.phi, 1e-3,
                                OpNormOptions{300, 1e-12, inst.support_budget});
          row.opnorm = nr.value;
          row.opnorm_method = nr.method_tag();
          break;
        }
      }

      row.ratio = row.opnorm > 0 ? row.rho_aitken / row.opnorm : 0.0;
      row.w_ratio = (inst.nu && row.opnorm > 0) ? row.rho_w_aitken / row.opnorm : 0.0;
      const bool r_ok = std::abs(row.ratio - 1.0) <= tol_ratio;
      const bool w_ok = !inst.nu || std::abs(row.w_ratio - 1.0) <= tol_ratio;
      row.pass = r_ok && w_ok && row.exact_pair_ok && !row.budget_hit;
    } catch (const BudgetExceeded&) {
      row.budget_hit = true;
      row.pass = false;
    }
    all_pass = all_pass && row.pass;
    suite.rows.push_back(std::move(row));
  }
  suite.pass = all_pass;
  return suite;
}

WienerReport wiener_inversion_check(const CrossSection& phi, double margin,
                                    const Weight& nu, double tol) {
  const GroupModel& g = phi.group();
  if (g.kind() != GroupModel::Kind::Zd || g.coord_count() != 1)
    throw InvalidSpec("wiener_inversion_check: needs a section on Z");
  if (!is_selfadjoint(phi, 1e-10 * std::max(1.0, phi.norm_l1())))
    throw InvalidSpec("wiener_inversion_check: section must be self-adjoint");

  WienerReport rep;

  // real symbol min over a refined grid
  const int grid = 1 << 14;
  double smin = 1e300, smax = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double v = zd_symbol(phi, {kTwoPi * i / grid}).real();
    smin = std::min(smin, v);
    smax = std::max(smax, std::abs(v));
  }
  rep.symbol_min = smin;
  if (smin < margin)
    throw InvalidSpec("wiener_inversion_check: min symbol below margin");

  // C*-data from the symbol oracle
  const double cnorm = smax;
  const double cinv = 1.0 / smin;  // self-adjoint positive symbol
  const InversionResult inv = invert_neumann(phi, cnorm, cinv, nu, NeumannOptions{tol});
  rep.invertible = true;
  rep.residual_weighted = inv.residual_weighted;

  // Fourier-division oracle on the 2^14 grid
  double max_dev = 0.0;
  for (const auto& [x, a] : inv.inverse.entries()) {
    Complex c(0, 0);
    for (int i = 0; i < grid; ++i) {
      const double th = kTwoPi * i / grid;
      c += std::polar(1.0, -th * static_cast<double>(x[0])) /
           zd_symbol(phi, {th});
    }
    c /= static_cast<double>(grid);
    max_dev = std::max(max_dev, std::abs(c - a.scalar_value()));
  }
  rep.oracle_max_dev = max_dev;

  // weighted tail: smallest N with sum_{|n|>N} nu |inv(n)| <= tol; the decay
  // must reach tol strictly inside the computed support
  std::int64_t r_sup = 0;
  for (const auto& [x, a] : inv.inverse.entries())
    r_sup = std::max<std::int64_t>(r_sup, std::llabs(x[0]));
  std::int64_t n_star = r_sup;
  double tail_at_star = 0.0;
  for (std::int64_t n0 = r_sup; n0 >= 0; --n0) {
    double tail = inv.inverse.error_budget();
    for (const auto& [x, a] : inv.inverse.entries())
      if (std::llabs(x[0]) > n0) tail += nu(x) * a.operator_norm();
    if (tail > tol) break;
    n_star = n0;
    tail_at_star = tail;
  }
  rep.weighted_tail = tail_at_star;
  rep.tail_from = static_cast<int>(n_star);

  rep.pass = rep.residual_weighted <= tol && rep.oracle_max_dev <= 1e-8 &&
             n_star < r_sup;
  return rep;
}

}  // namespace fellband
