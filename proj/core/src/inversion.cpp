#include "fellband/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fellband {

WeightConstants weight_constants(const Weight& nu, double p, int n_max) {
  if (p <= 0) throw InvalidSpec("weight_constants: p must be positive");
  WeightConstants wc;
  wc.p = p;
  wc.integrability = weight_integrability(nu, p, n_max);
  if (!wc.integrability.converged)
    throw Diverged("weight_constants: sum nu^{-p} does not converge");
  wc.B = wc.integrability.partial_sum + wc.integrability.tail_estimate;
  wc.A = 2.0 * std::pow(wc.B, 1.0 / (p + 1.0));
  wc.C = nu.poly_constant_C();
  if (!std::isfinite(wc.C) || wc.C <= 0)
    throw InvalidSpec("weight_constants: weight has no polynomial constant");
  wc.D = std::max(2.0 * wc.C * wc.A, 1.0);
  wc.theta = (4.0 * p + 3.0) / (p + 1.0);
  wc.delta = 1.0 + std::log2(std::max(wc.C, 1.0));
  return wc;
}

SubmultReport weighted_submult_check(const CrossSection& phi, const CrossSection& psi,
                                     const Weight& nu, double C) {
  SubmultReport rep;
  const CrossSection conv = convolve(psi, phi);
  const double lhs = norm_lp_weighted(conv, 1.0, nu);
  const double rhs = C * (norm_lp_weighted(psi, 1.0, nu) * phi.norm_l1() +
                          psi.norm_l1() * norm_lp_weighted(phi, 1.0, nu));
  rep.worst_ratio = rhs > 0 ? lhs / rhs : 0.0;

  double worst = 0.0;
  CrossSection pn = psi;
  for (int n : {1, 2, 4}) {
    pn = power(psi, n);
    const CrossSection p2n = convolve(pn, pn);
    const double l = norm_lp_weighted(p2n, 1.0, nu);
    const double r = 2.0 * C * norm_lp_weighted(pn, 1.0, nu) * pn.norm_l1();
    if (r > 0) worst = std::max(worst, l / r);
  }
  rep.diffeq_worst = worst;
  rep.pass = rep.worst_ratio <= 1.0 + 1e-9 && rep.diffeq_worst <= 1.0 + 1e-9;
  return rep;
}

GendiffReport gendiff_check(const CrossSection& phi, const Weight& nu,
                            const WeightConstants& wc) {
  GendiffReport rep;
  rep.lhs = norm_E(power(phi, 4), nu);
  rep.rhs = wc.D * std::pow(norm_l2e(phi), 1.0 / (wc.p + 1.0)) *
            std::pow(norm_E(phi, nu), wc.theta);
  rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0.0;
  rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-9) + 1e-300;
  return rep;
}

InversionResult invert_neumann(const CrossSection& phi, double phi_cstar_norm,
                               double phi_inv_cstar_norm, const Weight& nu,
                               const NeumannOptions& opts) {
  if (phi_cstar_norm <= 0 || phi_inv_cstar_norm <= 0 ||
      !std::isfinite(phi_inv_cstar_norm))
    throw NotInvertible("invert_neumann: invalid C*-norm data");
  const double cond = phi_cstar_norm * phi_inv_cstar_norm;
  const double psi_norm = 1.0 - 1.0 / (cond * cond);
  if (psi_norm >= 1.0 - 1e-9)
    throw NotInvertible("invert_neumann: ||1 - Phi*Phi/c^2||_{C*} >= 1 - 1e-9");

  const double c2 = phi_cstar_norm * phi_cstar_norm;
  const CrossSection unit = CrossSection::unit(phi.system_ptr());
  CrossSection psi = unit;
  {
    CrossSection gram = convolve(involution(phi), phi);
    gram *= Complex(-1.0 / c2, 0.0);
    psi += gram;
    psi.prune();
  }

  InversionResult out(phi.system_ptr());
  CrossSection acc = unit;  // sum of Psi^n
  CrossSection pn = unit;
  double threshold = opts.tol * 0.05;
  int n = 0;
  while (true) {
    bool stalled = false;
    while (n < opts.max_terms) {
      ++n;
      pn = convolve(pn, psi);
      if (pn.support_size() > opts.support_budget)
        throw BudgetExceeded("invert_neumann: support budget", pn.support_size());
      acc += pn;
      const double incr = norm_E(pn, nu);
      if (incr < threshold) break;
      if (n == opts.max_terms) stalled = true;
    }
    CrossSection inv = convolve(acc, involution(phi));
    inv *= Complex(1.0 / c2, 0.0);
    inv.prune();

    // both one-sided residuals must clear the tolerance
    CrossSection res_r = convolve(phi, inv);
    res_r -= unit;
    CrossSection res_l = convolve(inv, phi);
    res_l -= unit;
    out.inverse = std::move(inv);
    out.residual_weighted = std::max(norm_lp_weighted(res_r, 1.0, nu),
                                     norm_lp_weighted(res_l, 1.0, nu));
    out.residual_plain = std::max(res_r.norm_l1(), res_l.norm_l1());
    out.terms = n;
    out.slow_convergence = stalled;
    if (out.residual_weighted <= opts.tol || stalled) break;
    threshold *= 0.1;
  }
  return out;
}

namespace {

// log(1 + a + a^2 + a^3) given log(a), stable for both tiny and huge a.
double log_geom4(double log_a) {
  if (log_a == -std::numeric_limits<double>::infinity()) return 0.0;
  if (log_a < -40.0) return std::exp(log_a);  // log1p(a) ~ a
  const double m = std::max(0.0, 3.0 * log_a);
  double s = 0.0;
  for (int j = 0; j <= 3; ++j) s += std::exp(j * log_a - m);
  return m + std::log(s);
}

}  // namespace

NormControlBound norm_control_bound(const WeightConstants& wc, double norm_E_value,
                                    double phi_cstar_norm, double phi_inv_cstar_norm,
                                    int k_max) {
  if (norm_E_value <= 0 || phi_cstar_norm <= 0 || phi_inv_cstar_norm <= 0)
    throw InvalidSpec("norm_control_bound: inputs must be positive");
  const double cond = phi_cstar_norm * phi_inv_cstar_norm;
  if (cond < 1.0 - 1e-12)
    throw InvalidSpec("norm_control_bound: condition number below 1");

  const double s = std::max(0.0, 1.0 - 1.0 / (cond * cond));
  const double log_s = s > 0 ? std::log(s) : -std::numeric_limits<double>::infinity();
  const double beta = 2.0 * norm_E_value * norm_E_value / (phi_cstar_norm * phi_cstar_norm);
  const double log_beta = std::log(beta);
  const double log_d = std::log(wc.D);
  const double th = wc.theta;

  auto log_alpha = [&](int k) {
    const double thk = std::pow(th, k);
    const double fourk = std::pow(4.0, k);
    const double e_d = (thk - 1.0) / (th - 1.0);
    if (s == 0.0) return k == 0 ? log_beta : -std::numeric_limits<double>::infinity();
    return e_d * log_d + (fourk - thk) * log_s + thk * log_beta;
  };

  NormControlBound out;
  double total = std::log(norm_E_value) - 2.0 * std::log(phi_cstar_norm);
  int last_k = 0;
  for (int k = 0; k <= k_max; ++k) {
    const double lf = log_geom4(log_alpha(k));
    total += lf;
    last_k = k;
    out.terms_used = k + 1;
    if (k > 0 && lf < 1e-18) break;
  }

  // Tail: accumulate the remaining log-factors until the doubly-exponential
  // collapse (4^k |log s| beats theta^k); theta < 4 guarantees it happens.
  // The tail is reported in log space -- it can dwarf the truncated product
  // when k_max sits below the crossover, yet the total stays finite.
  double tail_log = 0.0;
  bool collapsed = (s == 0.0);
  for (int kk = last_k + 1; kk <= last_k + 4000 && !collapsed; ++kk) {
    const double la = log_alpha(kk);
    if (la < -700.0) {
      collapsed = true;
      break;
    }
    tail_log += log_geom4(la);
    if (!std::isfinite(tail_log)) break;
  }
  out.tail_estimate = tail_log;
  out.finite = collapsed && std::isfinite(tail_log);
  out.log_value = total;
  out.value = total > 709.0 ? std::numeric_limits<double>::infinity() : std::exp(total);
  out.overflow = total > 709.0;
  return out;
}

RadiusLowerBoundReport truncation_radius_lower_bound(const CrossSection& phi, int n_max) {
  RadiusLowerBoundReport rep;
  CayleyBall ball(phi.group(), phi.group().standard_generators());
  const int r_sup = phi.empty() ? 0 : phi.support_radius(ball);

  GelfandReport g = spectral_radius_gelfand(phi, 5);
  rep.gelfand_raw = g.raw;

  for (int r = 0; r <= r_sup; ++r) {
    CrossSection trunc(phi.system_ptr());
    for (const auto& [x, a] : phi.entries())
      if (word_length(ball, x) <= r) trunc.set(x, a);
    if (trunc.empty()) continue;
    const CrossSection psi2 = convolve(trunc, trunc);
    CrossSection pn = phi;
    for (int n = 1; n <= n_max; ++n) {
      if (n > 1) pn = convolve(pn, phi);
      const double val = std::pow(convolve(psi2, pn).norm_l1(), 1.0 / n);
      if (val > rep.best) {
        rep.best = val;
        rep.best_truncation = r;
        rep.n_used = n;
      }
    }
  }
  return rep;
}

}  // namespace fellband
