#include "fellband/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace fellband {

namespace {

Complex ipow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0:
      return {1, 0};
    case 1:
      return {0, 1};
    case 2:
      return {-1, 0};
    default:
      return {0, -1};
  }
}

double factorial_recip(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r /= i;
  return r;
}

}  // namespace

Complex entire_coefficient(EntireSeries s, int power) {
  switch (s) {
    case EntireSeries::U:
      // u(z) = sum_{k>=1} i^k z^k / k!
      return power >= 1 ? ipow(power) * factorial_recip(power) : Complex(0, 0);
    case EntireSeries::V:
      // v(z) = sum_{k>=0} -i^k z^{k+1} / (k+2)!
      return power >= 1 ? -ipow(power - 1) * factorial_recip(power + 1) : Complex(0, 0);
    case EntireSeries::W:
      // w(z) = sum_{k>=0} -i^k z^k / (k+2)!
      return -ipow(power) * factorial_recip(power + 2);
  }
  return {0, 0};
}

Complex entire_eval(EntireSeries s, Complex z) {
  const Complex iz = Complex(0, 1) * z;
  const Complex eiz = std::exp(iz);
  if (std::abs(z) > 0.5) {
    switch (s) {
      case EntireSeries::U:
        return eiz - 1.0;
      case EntireSeries::V:
        return (eiz - 1.0 - iz) / z;
      case EntireSeries::W:
        return (eiz - 1.0 - iz) / (z * z);
    }
  }
  // series for small |z| to dodge cancellation in e^{iz} - 1 - iz
  Complex acc(0, 0), zp(1, 0);
  for (int k = 0; k <= 20; ++k) {
    acc += entire_coefficient(s, k) * zp;
    zp *= z;
  }
  return acc;
}

SeriesResult entire_apply(EntireSeries s, const CrossSection& phi, double tol) {
  if (tol <= 0.0) throw InvalidSpec("entire_apply: tol must be positive");
  const double r = phi.norm_l1();

  // Truncation order: smallest K with sum_{j>K} |c_j| r^j < tol.  The
  // coefficients are dominated by 1/j!, so the tail is summed directly.
  auto tail_at = [&](int K) {
    double t = 0.0;
    double term = std::pow(r, K + 1) * factorial_recip(K + 1);
    for (int j = K + 1; j < K + 500; ++j) {
      t += term;
      term *= r / (j + 1);
      // once j >= 2r the term ratio is <= 1/2, so 2*term bounds the rest
      if (term < 1e-300 || (j >= 2.0 * r && term < 1e-6 * t)) {
        t += term * 2;
        break;
      }
    }
    return t;
  };
  int K = 1;
  while (K < 400 && tail_at(K) >= tol) ++K;

  SeriesResult out{CrossSection(phi.system_ptr()), 0.0, 0};
  CrossSection acc(phi.system_ptr());
  CrossSection p = CrossSection::unit(phi.system_ptr());  // Phi^0
  for (int j = 0; j <= K; ++j) {
    if (j > 0) p = (j == 1) ? phi : convolve(p, phi);
    const Complex c = entire_coefficient(s, j);
    if (c != Complex(0, 0)) {
      CrossSection term = p;
      term *= c;
      acc += term;
    }
  }
  acc.prune();
  acc.charge_budget(tail_at(K));
  out.section = std::move(acc);
  out.tail_bound = tail_at(K);
  out.terms = K;
  return out;
}

ExpResult exp_it(const CrossSection& phi, double t, double tol) {
  if (tol <= 0.0) throw InvalidSpec("exp_it: tol must be positive");
  const double r = phi.norm_l1();
  ExpResult out{Unital(Complex(1, 0), CrossSection(phi.system_ptr())), 0.0, 0, 0};
  if (t == 0.0 || r == 0.0 || phi.empty()) {
    if (t != 0.0 && !phi.empty()) {
      // zero-norm section can only be empty after pruning; nothing to do
    }
    return out;
  }

  const int m = std::max(0, static_cast<int>(std::ceil(std::log2(1.0 + std::abs(t) * r))));
  const double tau = t / std::pow(2.0, m);

  double series_tol = tol / (8.0 * std::pow(2.0, m));
  for (int attempt = 0; attempt < 3; ++attempt) {
    CrossSection scaled = phi;
    scaled *= Complex(tau, 0.0);
    SeriesResult base = entire_apply(EntireSeries::U, scaled, series_tol);
    CrossSection s = base.section;  // u(tau Phi), budget includes the tail

    for (int j = 0; j < m; ++j) {
      // (1,S)^2 = (1, 2S + S*S)
      CrossSection sq = convolve(s, s);
      CrossSection next = s;
      next *= Complex(2, 0);
      next += sq;
      next.prune();
      s = std::move(next);
    }

    out.value = Unital(Complex(1, 0), s);
    out.budget = s.error_budget();
    out.squarings = m;
    out.series_terms = base.terms;
    if (out.budget <= tol || attempt == 2) break;
    series_tol *= 0.5 * tol / out.budget;
  }
  return out;
}

OperatorGrowthProfile growth_profile_op(const CrossSection& phi,
                                        const std::vector<double>& t_grid,
                                        const Weight* nu, double point_tol_rel) {
  if (t_grid.size() < 4) throw InvalidSpec("growth_profile_op: need >= 4 grid points");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (t_grid[i] <= t_grid[i - 1])
      throw InvalidSpec("growth_profile_op: grid must be increasing");

  OperatorGrowthProfile prof;
  prof.t = t_grid;
  for (double t : t_grid) {
    ExpResult e = exp_it(phi, t, 1e-6);
    double n = nu ? norm_lp_weighted(e.value.part, 1.0, *nu) : e.value.part.norm_l1();
    if (e.budget > point_tol_rel * std::max(n, 1e-12)) {
      e = exp_it(phi, t, 0.5 * point_tol_rel * std::max(n, 1e-12));
      n = nu ? norm_lp_weighted(e.value.part, 1.0, *nu) : e.value.part.norm_l1();
    }
    prof.norm.push_back(n);
  }

  std::vector<double> lx, ly;
  for (std::size_t i = prof.t.size() / 2; i < prof.t.size(); ++i) {
    lx.push_back(std::log(prof.t[i]));
    ly.push_back(std::log(std::max(prof.norm[i], 1e-300)));
  }
  const LineFit fit = fit_line(lx, ly);
  prof.slope = fit.slope;
  prof.residual = fit.residual;

  double c = 0.0;
  for (std::size_t i = 0; i < prof.t.size(); ++i)
    c = std::max(c, prof.norm[i] / std::pow(prof.t[i], prof.slope));
  prof.c_hat = c;

  const int d = phi.group().growth_order();
  prof.theoretical_exponent = 2.0 * d + 2.0;
  if (nu && !nu->is_one()) {
    const double cpoly = nu->poly_constant_C();
    const double delta = 1.0 + std::log2(std::max(cpoly, 1.0));
    prof.theoretical_exponent += 4.0 * delta;
  }
  return prof;
}

DixContractionReport dix_contraction_check(const CrossSection& phi, double tol) {
  DixContractionReport rep;
  const SeriesResult v = entire_apply(EntireSeries::V, phi, std::min(tol * 0.1, 1e-12));
  rep.lhs = norm_l2e(v.section);
  rep.rhs = 0.5 * norm_l2e(phi) + tol;
  rep.pass = rep.lhs <= rep.rhs + v.section.error_budget();

  double ws = 0.0;
  for (int i = -2000; i <= 2000; ++i) {
    const double a = 0.025 * i;
    ws = std::max(ws, std::abs(entire_eval(EntireSeries::W, Complex(a, 0))));
  }
  rep.w_sup = ws;
  return rep;
}

FunctionSpec FunctionSpec::gaussian(double center, double width) {
  if (width <= 0) throw InvalidSpec("gaussian: width must be positive");
  FunctionSpec f(Family::Gaussian);
  f.center_ = center;
  f.width_ = width;
  return f;
}

FunctionSpec FunctionSpec::smooth_bump(double center, double radius) {
  if (radius <= 0) throw InvalidSpec("smooth_bump: radius must be positive");
  FunctionSpec f(Family::SmoothBump);
  f.center_ = center;
  f.width_ = radius;
  return f;
}

FunctionSpec FunctionSpec::raised_cosine(double center, double radius) {
  if (radius <= 0) throw InvalidSpec("raised_cosine: radius must be positive");
  FunctionSpec f(Family::RaisedCosine);
  f.center_ = center;
  f.width_ = radius;
  return f;
}

FunctionSpec FunctionSpec::poly_times_bump(std::vector<double> coeffs, double center,
                                           double radius) {
  if (radius <= 0) throw InvalidSpec("poly_times_bump: radius must be positive");
  FunctionSpec f(Family::PolyTimesBump);
  f.center_ = center;
  f.width_ = radius;
  f.coeffs_ = std::move(coeffs);
  return f;
}

FunctionSpec FunctionSpec::product(const FunctionSpec& a, const FunctionSpec& b) {
  FunctionSpec f(Family::Product);
  f.left_ = std::make_shared<FunctionSpec>(a);
  f.right_ = std::make_shared<FunctionSpec>(b);
  return f;
}

double FunctionSpec::eval(double x) const {
  switch (family_) {
    case Family::Gaussian: {
      const double u = (x - center_) / width_;
      return std::exp(-u * u);
    }
    case Family::SmoothBump: {
      const double u = (x - center_) / width_;
      if (std::abs(u) >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - u * u));
    }
    case Family::RaisedCosine: {
      const double u = (x - center_) / width_;
      if (std::abs(u) >= 1.0) return 0.0;
      return 0.5 * (1.0 + std::cos(kPi * u));
    }
    case Family::PolyTimesBump: {
      const double u = (x - center_) / width_;
      if (std::abs(u) >= 1.0) return 0.0;
      double p = 0.0;
      for (std::size_t i = coeffs_.size(); i-- > 0;) p = p * u + coeffs_[i];
      return p * std::exp(1.0 - 1.0 / (1.0 - u * u));
    }
    case Family::Product:
      return left_->eval(x) * right_->eval(x);
  }
  return 0.0;
}

double FunctionSpec::lower() const {
  switch (family_) {
    case Family::Gaussian:
      return center_ - 7.2 * width_;  // tail mass below 1e-22
    case Family::Product:
      return std::max(left_->lower(), right_->lower());
    default:
      return center_ - width_;
  }
}

double FunctionSpec::upper() const {
  switch (family_) {
    case Family::Gaussian:
      return center_ + 7.2 * width_;
    case Family::Product:
      return std::min(left_->upper(), right_->upper());
    default:
      return center_ + width_;
  }
}

namespace {

double sinc(double z) { return std::abs(z) < 1e-8 ? 1.0 - z * z / 6.0 : std::sin(z) / z; }

// Adaptive Simpson for smooth complex integrands.
Complex adaptive_simpson(const std::function<Complex(double)>& f, double a, double b,
                         double tol, int depth, Complex fa, Complex fm, Complex fb) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const Complex flm = f(lm), frm = f(rm);
  const Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const Complex lhalf = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const Complex rhalf = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const Complex both = lhalf + rhalf;
  if (depth <= 0 || std::abs(both - whole) < 15.0 * tol) {
    return both + (both - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, tol * 0.5, depth - 1, fa, flm, fm) +
         adaptive_simpson(f, m, b, tol * 0.5, depth - 1, fm, frm, fb);
}

Complex integrate(const std::function<Complex(double)>& f, double a, double b,
                  double tol) {
  // Split into panels so oscillatory integrands are resolved before the
  // adaptive recursion starts.
  const int panels = 16;
  Complex total(0, 0);
  const double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const double x0 = a + i * h, x1 = x0 + h;
    total += adaptive_simpson(f, x0, x1, tol / panels, 28, f(x0), f(0.5 * (x0 + x1)),
                              f(x1));
  }
  return total;
}

}  // namespace

Complex FunctionSpec::fourier(double t) const {
  switch (family_) {
    case Family::Gaussian: {
      // int exp(-((x-c)/w)^2) e^{itx} dx = w sqrt(pi) e^{-w^2 t^2/4} e^{itc}
      const double mag = width_ * std::sqrt(kPi) * std::exp(-width_ * width_ * t * t / 4.0);
      return mag * std::polar(1.0, t * center_);
    }
    case Family::RaisedCosine: {
      const double a = width_ * t;
      const double mag = width_ * (sinc(a) + 0.5 * sinc(a + kPi) + 0.5 * sinc(a - kPi));
      return mag * std::polar(1.0, t * center_);
    }
    default: {
      const double lo = lower(), hi = upper();
      auto integrand = [&](double x) {
        return Complex(eval(x), 0.0) * std::polar(1.0, t * x);
      };
      // Resolve the oscillation: error target 1e-10 absolute.
      const double osc = std::abs(t) * (hi - lo);
      const int extra = osc > 64.0 ? static_cast<int>(osc / 64.0) : 0;
      (void)extra;
      return integrate(integrand, lo, hi, 1e-11);
    }
  }
}

Complex fourier_transform(const FunctionSpec& f, double t) { return f.fourier(t); }

double FunctionSpec::decay_envelope(int m, double t_probe) const {
  double a = 0.0;
  // log-spaced plus linear probes; |f^| envelopes vary slowly
  for (int i = 0; i <= 160; ++i) {
    const double t = t_probe * i / 160.0;
    a = std::max(a, std::abs(fourier(t)) * std::pow(1.0 + t, m));
  }
  return a;
}

std::string FunctionSpec::describe() const {
  switch (family_) {
    case Family::Gaussian:
      return "gaussian(" + format_double(center_) + "," + format_double(width_) + ")";
    case Family::SmoothBump:
      return "bump(" + format_double(center_) + "," + format_double(width_) + ")";
    case Family::RaisedCosine:
      return "raised_cosine(" + format_double(center_) + "," + format_double(width_) + ")";
    case Family::PolyTimesBump:
      return "poly_bump(" + format_double(center_) + "," + format_double(width_) + ")";
    case Family::Product:
      return left_->describe() + "*" + right_->describe();
  }
  return "?";
}

namespace {

// int_{|t|>T} |f^|(t) (1 + c |t|^n) dt / 2pi, via the fitted decay envelope
// A_m = sup |f^|(1+t)^m, minimized over usable m.
double tail_bound(const FunctionSpec& f, double T, double c_hat, double n_hat) {
  double best = std::numeric_limits<double>::infinity();
  for (int m = static_cast<int>(std::ceil(n_hat)) + 2; m <= 14; ++m) {
    const double am = f.decay_envelope(m, std::max(4.0 * T, 80.0));
    const double flat = std::pow(1.0 + T, 1.0 - m) / (m - 1.0);
    const double mn = m - n_hat - 1.0;
    if (mn <= 0) continue;
    const double grown = c_hat * std::pow(1.0 + T, -mn) / mn;
    best = std::min(best, 2.0 * am * (flat + grown) / kTwoPi);
  }
  return best;
}

struct MidpointPass {
  Unital value;
  double series_budget = 0.0;
  int nodes = 0;

  explicit MidpointPass(TwistedSystem::Ptr sys) : value(std::move(sys)) {}
};

MidpointPass midpoint_integral(const FunctionSpec& f, const CrossSection& phi, double T,
                               double dt, double node_tol) {
  MidpointPass pass(phi.system_ptr());
  const int n = std::max(2, static_cast<int>(std::ceil(2.0 * T / dt)));
  const double step = 2.0 * T / n;
  Complex scalar(0, 0);
  CrossSection acc(phi.system_ptr());
  for (int j = 0; j < n; ++j) {
    const double t = -T + (j + 0.5) * step;
    // spectral convention: with f^(t) = int f e^{itx} dx, the calculus is
    // f(Phi) = (1/2pi) int f^(-t) e^{it Phi} dt, so that Pi(f(Phi)) = f(Pi(Phi))
    const Complex ft = f.fourier(-t);
    const Complex coef = ft * step / kTwoPi;
    if (std::abs(coef) < 1e-300) continue;
    ExpResult e = exp_it(phi, t, node_tol);
    scalar += coef;
    CrossSection term = e.value.part;  // budget rides along and gets scaled
    term *= coef;
    acc += term;
    acc.prune();
  }
  pass.value = Unital(scalar, acc);
  pass.series_budget = acc.error_budget();
  pass.nodes = n;
  return pass;
}

double unital_distance(const Unital& a, const Unital& b) {
  CrossSection d = a.part;
  d -= b.part;
  return std::abs(a.scalar - b.scalar) + d.norm_l1();
}

}  // namespace

CalcResult dixmier_baillet(const FunctionSpec& f, const CrossSection& phi,
                           const QuadratureSpec& quad) {
  QuadratureSpec q = quad;
  if (q.tol <= 0) throw InvalidSpec("dixmier_baillet: tol must be positive");

  if (q.c_hat <= 0) {
    if (phi.empty()) {
      q.n_hat = 0.0;
      q.c_hat = 1.0;
    } else {
      // measured growth model, with the polynomial-growth ceiling as sanity cap
      const std::vector<double> grid{2, 3, 4, 6, 8, 11, 16};
      const OperatorGrowthProfile prof = growth_profile_op(phi, grid, nullptr, 1e-4);
      q.n_hat = std::clamp(prof.slope, 0.0, prof.theoretical_exponent);
      q.c_hat = std::max(prof.c_hat, 1.0);
    }
  }

  CalcResult out(phi.system_ptr());

  // T from the tail model
  double T = q.T;
  double tail = 0.0;
  if (T <= 0) {
    T = 4.0;
    while (T < q.t_cap && (tail = tail_bound(f, T, q.c_hat, q.n_hat)) > q.tol / 2.0)
      T *= 1.5;
  }
  tail = tail_bound(f, T, q.c_hat, q.n_hat);

  // node tolerance: total series contribution <= tol/4
  double fhat_mass = 0.0;
  for (int i = 0; i <= 200; ++i)
    fhat_mass += std::abs(f.fourier(-T + (i + 0.5) * (2 * T / 201.0))) * (2 * T / 201.0);
  const double node_tol = (q.tol / 4.0) * kTwoPi / std::max(fhat_mass, 1e-12);

  double dt = q.dt > 0 ? q.dt : std::min(0.5, T / 16.0);
  MidpointPass cur = midpoint_integral(f, phi, T, dt, node_tol);
  double quad_err = std::numeric_limits<double>::infinity();
  for (int h = 0; h < q.max_halvings; ++h) {
    MidpointPass finer = midpoint_integral(f, phi, T, dt / 2.0, node_tol);
    quad_err = unital_distance(cur.value, finer.value);
    cur = std::move(finer);
    dt /= 2.0;
    if (quad_err < q.tol / 4.0) break;
  }

  out.value = cur.value;
  out.err.quadrature = quad_err;
  out.err.tail = tail;
  out.err.series = cur.series_budget;
  out.T = T;
  out.dt = dt;
  out.nodes = cur.nodes;
  out.tolerance_met = out.err.total() <= q.tol;
  return out;
}

HomomorphismReport calculus_homomorphism_check(const FunctionSpec& f,
                                               const FunctionSpec& g,
                                               const CrossSection& phi,
                                               const QuadratureSpec& quad) {
  const FunctionSpec fg = FunctionSpec::product(f, g);
  const CalcResult rf = dixmier_baillet(f, phi, quad);
  const CalcResult rg = dixmier_baillet(g, phi, quad);
  const CalcResult rfg = dixmier_baillet(fg, phi, quad);

  HomomorphismReport rep;
  const Unital prod = unital_mul(rf.value, rg.value);
  CrossSection d = rfg.value.part;
  d -= prod.part;
  rep.product_residual = std::abs(rfg.value.scalar - prod.scalar) + d.norm_l1();

  // real-valued families: conj(f) = f, so f(Phi) must be self-adjoint
  CrossSection adj = involution(rf.value.part);
  adj -= rf.value.part;
  rep.adjoint_residual = adj.norm_l1() +
                         std::abs(std::conj(rf.value.scalar) - rf.value.scalar);

  rep.budget_sum = rf.err.total() + rg.err.total() + rfg.err.total();
  const double nf = rf.value.norm(), ng = rg.value.norm();
  rep.allowance = rf.err.total() * std::max(1.0, ng) + rg.err.total() * std::max(1.0, nf) +
                  rfg.err.total();
  rep.pass = rep.product_residual <= rep.allowance + 1e-12 &&
             rep.adjoint_residual <= 2.0 * rf.err.total() + 1e-12;
  return rep;
}

}  // namespace fellband
