#include "fellband/norms.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <functional>

namespace fellband {

std::string NormReport::method_tag() const {
  switch (method) {
    case Method::Exact:
      return "exact";
    case Method::Truncated:
      return "truncated{R=" + std::to_string(radius) + "}";
    case Method::Sampled:
      return "sampled{n=" + std::to_string(samples) + ",seed=" + std::to_string(seed) + "}";
    case Method::Extrapolated:
      return "extrapolated";
  }
  return "?";
}

double norm_lp(const CrossSection& phi, double p) {
  if (p < 1.0) throw InvalidSpec("norm_lp: p must be >= 1");
  const double w = phi.group().point_mass();
  double s = 0.0;
  for (const auto& [x, a] : phi.entries()) s += w * std::pow(a.operator_norm(), p);
  return std::pow(s, 1.0 / p);
}

double norm_lp_weighted(const CrossSection& phi, double p, const Weight& nu) {
  if (p < 1.0) throw InvalidSpec("norm_lp_weighted: p must be >= 1");
  if (nu.is_one()) return norm_lp(phi, p);
  const double w = phi.group().point_mass();
  double s = 0.0;
  for (const auto& [x, a] : phi.entries())
    s += w * std::pow(nu(x) * a.operator_norm(), p);
  return std::pow(s, 1.0 / p);
}

double norm_linf(const CrossSection& phi) { return phi.norm_linf(); }

double norm_linf_weighted(const CrossSection& phi, const Weight& nu) {
  double s = 0.0;
  for (const auto& [x, a] : phi.entries()) s = std::max(s, nu(x) * a.operator_norm());
  return s;
}

double norm_l2e(const CrossSection& phi) {
  const TwistedSystem& sys = phi.system();
  const double w = phi.group().point_mass();
  Fiber acc = Fiber::zero(phi.fiber_dim());
  for (const auto& [x, a] : phi.entries()) {
    const BundleElement adj = bundle_adjoint(sys, BundleElement{a, x});
    const BundleElement prod = bundle_mul(sys, adj, BundleElement{a, x});
    Fiber f = prod.a;
    f *= Complex(w, 0.0);
    acc += f;
  }
  return std::sqrt(acc.operator_norm());
}

double norm_E(const CrossSection& phi, const Weight& nu) {
  return std::max(norm_lp_weighted(phi, 1.0, nu), norm_linf(phi));
}

TruncatedRep::TruncatedRep(TwistedSystem::Ptr sys, int radius, std::size_t element_budget)
    : sys_(std::move(sys)),
      radius_(radius),
      k_(sys_->fiber_dim()),
      ball_(sys_->group(), sys_->group().standard_generators(), element_budget) {
  points_ = ball_.ball(radius_);
  for (std::size_t i = 0; i < points_.size(); ++i) index_.emplace(points_[i], i);
}

std::optional<std::size_t> TruncatedRep::point_index(const Point& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool TruncatedRep::covers_group() const {
  return sys_->group().is_finite() &&
         static_cast<std::int64_t>(points_.size()) == sys_->group().order();
}

namespace {

// alpha_{z^{-1}}(a) omega(z^{-1}, x): the block of pi(a,x) mapping the fiber
// column at p = x^{-1}z to the one at z.
Fiber rep_coefficient(const TwistedSystem& sys, const Fiber& a, const Point& x,
                      const Point& z) {
  const Point zi = sys.group().inverse(z);
  return fiber_mul(sys.act(zi, a), sys.cocycle(zi, x));
}

void add_block_apply(int k, const Fiber& coef, std::size_t zi, std::size_t pi,
                     const Eigen::VectorXcd& in, Eigen::VectorXcd& out, Complex scale) {
  if (k == 1) {
    out(static_cast<Eigen::Index>(zi)) +=
        scale * coef.scalar_value() * in(static_cast<Eigen::Index>(pi));
    return;
  }
  for (int i = 0; i < k; ++i) {
    Complex s(0, 0);
    for (int j = 0; j < k; ++j)
      s += coef.at(i, j) *
           in(static_cast<Eigen::Index>(pi) * k + j);
    out(static_cast<Eigen::Index>(zi) * k + i) += scale * s;
  }
}

}  // namespace

void TruncatedRep::apply_point(const Fiber& a, const Point& x, const Vec& in,
                               Vec& out) const {
  out.setZero(static_cast<Eigen::Index>(dim()));
  const GroupModel& g = sys_->group();
  for (std::size_t p = 0; p < points_.size(); ++p) {
    const Point z = g.multiply(x, points_[p]);
    auto zi = point_index(z);
    if (!zi) continue;
    const Fiber coef = rep_coefficient(*sys_, a, x, z);
    add_block_apply(k_, coef, *zi, p, in, out, Complex(1.0, 0.0));
  }
}

void TruncatedRep::apply(const CrossSection& phi, const Vec& in, Vec& out) const {
  out.setZero(static_cast<Eigen::Index>(dim()));
  const GroupModel& g = sys_->group();
  const Complex w(g.point_mass(), 0.0);
  for (const auto& [x, a] : phi.entries()) {
    for (std::size_t p = 0; p < points_.size(); ++p) {
      const Point z = g.multiply(x, points_[p]);
      auto zi = point_index(z);
      if (!zi) continue;
      const Fiber coef = rep_coefficient(*sys_, a, x, z);
      add_block_apply(k_, coef, *zi, p, in, out, w);
    }
  }
}

Eigen::MatrixXcd TruncatedRep::matrix(const CrossSection& phi) const {
  const Eigen::Index n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  const GroupModel& g = sys_->group();
  const double w = g.point_mass();
  for (const auto& [x, a] : phi.entries()) {
    for (std::size_t p = 0; p < points_.size(); ++p) {
      const Point z = g.multiply(x, points_[p]);
      auto zi = point_index(z);
      if (!zi) continue;
      const Fiber coef = rep_coefficient(*sys_, a, x, z);
      for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j)
          m(static_cast<Eigen::Index>(*zi) * k_ + i,
            static_cast<Eigen::Index>(p) * k_ + j) += w * coef.at(i, j);
    }
  }
  return m;
}

Eigen::MatrixXcd TruncatedRep::hs_matrix(const CrossSection& phi,
                                         std::size_t dim_cap) const {
  const std::size_t kk = static_cast<std::size_t>(k_) * static_cast<std::size_t>(k_);
  const std::size_t n = kk * points_.size();
  if (n > dim_cap)
    throw BudgetExceeded("hs_matrix: dimension " + std::to_string(n) +
                             " exceeds cap " + std::to_string(dim_cap),
                         n);
  // Column for the basis section E_ij (x) delta_y is truncate(Phi * E_ij delta_y).
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
  for (std::size_t yidx = 0; yidx < points_.size(); ++yidx) {
    for (int bi = 0; bi < k_; ++bi)
      for (int bj = 0; bj < k_; ++bj) {
        Fiber unitf = Fiber::zero(k_);
        unitf.set(bi, bj, Complex(1, 0));
        const CrossSection basis =
            CrossSection::delta(sys_, points_[yidx], std::move(unitf));
        const CrossSection image = convolve(phi, basis);
        const std::size_t col = yidx * kk + static_cast<std::size_t>(bi * k_ + bj);
        for (const auto& [z, f] : image.entries()) {
          auto zi = point_index(z);
          if (!zi) continue;
          for (int i = 0; i < k_; ++i)
            for (int j = 0; j < k_; ++j)
              m(static_cast<Eigen::Index>(*zi * kk) + i * k_ + j,
                static_cast<Eigen::Index>(col)) = f.at(i, j);
        }
      }
  }
  return m;
}

namespace {

// Precompiled block-sparse form of the truncated integrated representation.
struct SparseRepOp {
  int k = 1;
  std::size_t dim = 0;
  std::vector<std::uint32_t> row, col;  // block indices
  std::vector<Complex> coef;            // k*k entries per block

  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
    out.setZero(static_cast<Eigen::Index>(dim));
    const std::size_t kk = static_cast<std::size_t>(k) * static_cast<std::size_t>(k);
    if (k == 1) {
      for (std::size_t e = 0; e < row.size(); ++e) out(row[e]) += coef[e] * in(col[e]);
      return;
    }
    for (std::size_t e = 0; e < row.size(); ++e) {
      const Complex* c = coef.data() + e * kk;
      for (int i = 0; i < k; ++i) {
        Complex s(0, 0);
        for (int j = 0; j < k; ++j)
          s += c[i * k + j] * in(static_cast<Eigen::Index>(col[e]) * k + j);
        out(static_cast<Eigen::Index>(row[e]) * k + i) += s;
      }
    }
  }

  void apply_adjoint(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
    out.setZero(static_cast<Eigen::Index>(dim));
    const std::size_t kk = static_cast<std::size_t>(k) * static_cast<std::size_t>(k);
    if (k == 1) {
      for (std::size_t e = 0; e < row.size(); ++e)
        out(col[e]) += std::conj(coef[e]) * in(row[e]);
      return;
    }
    for (std::size_t e = 0; e < row.size(); ++e) {
      const Complex* c = coef.data() + e * kk;
      for (int j = 0; j < k; ++j) {
        Complex s(0, 0);
        for (int i = 0; i < k; ++i)
          s += std::conj(c[i * k + j]) * in(static_cast<Eigen::Index>(row[e]) * k + i);
        out(static_cast<Eigen::Index>(col[e]) * k + j) += s;
      }
    }
  }
};

SparseRepOp compile_rep(const TruncatedRep& rep, const CrossSection& phi) {
  SparseRepOp op;
  op.k = rep.fiber_dim();
  op.dim = rep.dim();
  const GroupModel& g = phi.group();
  const double w = g.point_mass();
  const auto& pts = rep.basis_points();
  for (const auto& [x, a] : phi.entries()) {
    for (std::size_t p = 0; p < pts.size(); ++p) {
      const Point z = g.multiply(x, pts[p]);
      auto zi = rep.point_index(z);
      if (!zi) continue;
      Fiber coef = rep_coefficient(rep.system(), a, x, z);
      coef *= Complex(w, 0.0);
      op.row.push_back(static_cast<std::uint32_t>(*zi));
      op.col.push_back(static_cast<std::uint32_t>(p));
      if (op.k == 1) {
        op.coef.push_back(coef.scalar_value());
      } else {
        for (int i = 0; i < op.k; ++i)
          for (int j = 0; j < op.k; ++j) op.coef.push_back(coef.at(i, j));
      }
    }
  }
  return op;
}

// Largest eigenvalue of a Hermitian PSD operator: Lanczos with full
// reorthogonalization and a deterministic all-ones start.
std::pair<double, double> lanczos_lambda_max(
    const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>& apply_m,
    std::size_t dim, int max_iter, double tol) {
  const Eigen::Index n = static_cast<Eigen::Index>(dim);
  std::vector<Eigen::VectorXcd> basis;
  Eigen::VectorXcd v = Eigen::VectorXcd::Constant(n, Complex(1.0, 0.0));
  v /= v.norm();
  basis.push_back(v);

  std::vector<double> alpha, beta;
  Eigen::VectorXcd w(n);
  double best = 0.0, last_increment = 0.0, prev = 0.0;

  const int m_max = std::min<int>(max_iter, static_cast<int>(dim));
  for (int m = 0; m < m_max; ++m) {
    apply_m(basis.back(), w);
    const double a = basis.back().dot(w).real();
    alpha.push_back(a);
    w -= a * basis.back();
    if (m > 0) w -= beta.back() * basis[basis.size() - 2];
    for (const auto& b : basis) w -= b.dot(w) * b;

    const int mm = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(mm, mm);
    for (int i = 0; i < mm; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < mm) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
    const double ritz = es.eigenvalues().maxCoeff();
    last_increment = std::abs(ritz - prev);
    prev = ritz;
    best = std::max(best, ritz);
    if (m > 2 && last_increment < tol * std::max(1.0, std::abs(ritz))) break;

    const double b = w.norm();
    if (b < 1e-14) break;  // invariant subspace reached
    beta.push_back(b);
    basis.push_back(w / b);
  }
  return {std::max(best, 0.0), last_increment};
}

}  // namespace

double lanczos_largest_eigenvalue(
    const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>& apply,
    std::size_t dim, int max_iter, double tol) {
  return lanczos_lambda_max(apply, dim, max_iter, tol).first;
}

NormReport opnorm_estimate(const CrossSection& phi, int radius, const OpNormOptions& opts) {
  TruncatedRep rep(phi.system_ptr(), radius, opts.element_budget);
  const SparseRepOp op = compile_rep(rep, phi);
  Eigen::VectorXcd mid(static_cast<Eigen::Index>(std::max<std::size_t>(op.dim, 1)));
  auto apply_m = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    op.apply(in, mid);
    op.apply_adjoint(mid, out);
  };
  auto [lambda, incr] =
      lanczos_lambda_max(apply_m, op.dim, opts.max_iterations, opts.increment_tol);
  NormReport rep_out;
  rep_out.value = std::sqrt(lambda);
  rep_out.method = NormReport::Method::Truncated;
  rep_out.radius = radius;
  rep_out.lower_bound = true;
  rep_out.error_budget = phi.error_budget();
  rep_out.last_increment = incr;
  return rep_out;
}

NormReport opnorm_auto(const CrossSection& phi, double increment, const OpNormOptions& opts) {
  CayleyBall ball(phi.group(), phi.group().standard_generators(), opts.element_budget);
  int r0 = 4;
  try {
    r0 = std::max(4, 4 * phi.support_radius(ball));
  } catch (const NotGenerated&) {
    r0 = 4;
  }
  NormReport last = opnorm_estimate(phi, r0, opts);
  for (int r = 2 * r0; r <= 4096; r *= 2) {
    NormReport next;
    try {
      next = opnorm_estimate(phi, r, opts);
    } catch (const BudgetExceeded&) {
      break;
    }
    const double step = next.value - last.value;
    next.last_increment = step;
    last = next;
    if (std::abs(step) < increment) break;
  }
  return last;
}

double pi_p_value(const TruncatedRep& rep, const CrossSection& phi, double p,
                  const TruncatedRep::Vec& xi) {
  const double w = phi.group().point_mass();
  Eigen::VectorXcd out(static_cast<Eigen::Index>(rep.dim()));
  double s = 0.0;
  for (const auto& [x, a] : phi.entries()) {
    rep.apply_point(a, x, xi, out);
    s += w * std::pow(out.norm(), p);
  }
  return std::pow(s, 1.0 / p);
}

namespace {

Eigen::VectorXcd targeted_vector(const TruncatedRep& rep, const Fiber& a, const Point& x) {
  // xi = v (x) delta_e with v the top right-singular vector of
  // alpha_{x^{-1}}(a) omega(x^{-1},x); then ||pi(a,x) xi|| = ||a||.
  const int k = rep.fiber_dim();
  Eigen::VectorXcd xi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(rep.dim()));
  const auto e_idx = rep.point_index(rep.system().group().identity());
  if (!e_idx) return xi;
  if (k == 1) {
    xi(static_cast<Eigen::Index>(*e_idx)) = Complex(1.0, 0.0);
    return xi;
  }
  const Point xinv = rep.system().group().inverse(x);
  const Fiber m = fiber_mul(rep.system().act(xinv, a), rep.system().cocycle(xinv, x));
  Eigen::MatrixXcd em(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) em(i, j) = m.at(i, j);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(em, Eigen::ComputeThinV);
  for (int i = 0; i < k; ++i)
    xi(static_cast<Eigen::Index>(*e_idx) * k + i) = svd.matrixV()(i, 0);
  return xi;
}

}  // namespace

NormReport norm_pi_p_estimate(const CrossSection& phi, double p, int radius,
                              int n_samples, std::uint64_t seed) {
  if (p < 1.0) throw InvalidSpec("norm_pi_p_estimate: p must be >= 1");
  TruncatedRep rep(phi.system_ptr(), radius);
  const std::size_t dim = rep.dim();
  const double w = phi.group().point_mass();

  NormReport out;
  out.method = NormReport::Method::Sampled;
  out.samples = n_samples;
  out.seed = seed;
  out.radius = radius;
  out.lower_bound = true;
  out.error_budget = phi.error_budget();

  if (phi.empty() || dim == 0) return out;

  if (p == 2.0) {
    // Closed form: ||Phi||_{pi,2}^2 = lambda_max( sum_x w pi(Phi(x))^* pi(Phi(x)) ).
    out.method = NormReport::Method::Exact;
    if (dim <= 600) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                  static_cast<Eigen::Index>(dim));
      Eigen::VectorXcd col(static_cast<Eigen::Index>(dim)),
          img(static_cast<Eigen::Index>(dim));
      for (const auto& [x, a] : phi.entries()) {
        Eigen::MatrixXcd opm(static_cast<Eigen::Index>(dim),
                             static_cast<Eigen::Index>(dim));
        for (std::size_t j = 0; j < dim; ++j) {
          col.setZero();
          col(static_cast<Eigen::Index>(j)) = Complex(1, 0);
          rep.apply_point(a, x, col, img);
          opm.col(static_cast<Eigen::Index>(j)) = img;
        }
        m += w * (opm.adjoint() * opm);
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
      out.value = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
      return out;
    }
    Eigen::VectorXcd tmp(static_cast<Eigen::Index>(dim));
    auto apply_m = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& o) {
      o.setZero(static_cast<Eigen::Index>(dim));
      Eigen::VectorXcd back(static_cast<Eigen::Index>(dim));
      for (const auto& [x, a] : phi.entries()) {
        rep.apply_point(a, x, in, tmp);
        const BundleElement adj = bundle_adjoint(rep.system(), BundleElement{a, x});
        rep.apply_point(adj.a, adj.x, tmp, back);
        o += w * back;
      }
    };
    auto [lambda, incr] = lanczos_lambda_max(apply_m, dim, 300, 1e-13);
    out.value = std::sqrt(lambda);
    out.last_increment = incr;
    return out;
  }

  // Sampled sup plus nonlinear power ascent; every evaluated value is a
  // lower bound of the sup over the unit sphere.
  Rng rng(seed);
  Eigen::VectorXcd best_xi(static_cast<Eigen::Index>(dim));
  double best = -1.0;

  auto consider = [&](const Eigen::VectorXcd& xi) {
    const double nn = xi.norm();
    if (nn < 1e-300) return;
    const double v = pi_p_value(rep, phi, p, xi / nn);
    if (v > best) {
      best = v;
      best_xi = xi / nn;
    }
  };

  // Per-point singular optimizers keep the estimate above ||Phi||_inf.
  for (const auto& [x, a] : phi.entries()) consider(targeted_vector(rep, a, x));
  for (int s = 0; s < n_samples; ++s) {
    Eigen::VectorXcd xi(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i)
      xi(static_cast<Eigen::Index>(i)) = rng.complex_gaussian();
    consider(xi);
  }

  // xi <- normalize( sum_x ||Op_x xi||^{p-2} Op_x^* Op_x xi )
  Eigen::VectorXcd xi = best_xi, fwd(static_cast<Eigen::Index>(dim)),
                   back(static_cast<Eigen::Index>(dim));
  for (int step = 0; step < 60; ++step) {
    Eigen::VectorXcd grad = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    for (const auto& [x, a] : phi.entries()) {
      rep.apply_point(a, x, xi, fwd);
      const double nn = fwd.norm();
      if (nn < 1e-14) continue;
      const BundleElement adj = bundle_adjoint(rep.system(), BundleElement{a, x});
      rep.apply_point(adj.a, adj.x, fwd, back);
      grad += w * std::pow(nn, p - 2.0) * back;
    }
    const double gn = grad.norm();
    if (gn < 1e-300) break;
    xi = grad / gn;
    const double v = pi_p_value(rep, phi, p, xi);
    const double incr = v - best;
    if (v > best) {
      best = v;
      best_xi = xi;
    }
    if (std::abs(incr) < 1e-12 * std::max(1.0, best)) break;
  }

  out.value = std::max(best, 0.0);
  return out;
}

GelfandReport spectral_radius_gelfand(const CrossSection& phi, int max_doublings,
                                      const Weight* nu, std::size_t support_budget) {
  GelfandReport rep;
  auto measure = [&](const CrossSection& s) {
    return nu ? norm_lp_weighted(s, 1.0, *nu) : s.norm_l1();
  };

  CrossSection p = phi;
  rep.norms.push_back(measure(p));
  rep.roots.push_back(rep.norms.back());
  rep.doublings = 0;

  for (int k = 1; k <= max_doublings; ++k) {
    const std::size_t cur = p.support_size();
    const std::size_t base = phi.support_size();
    const std::uint64_t steps = std::uint64_t(1) << (k - 1);
    // square: |P|^2 fiber products; iterate: steps * |P_end| * |Phi| with
    // |P_end| estimated at 4|P|.
    const bool iterate =
        static_cast<double>(steps) * static_cast<double>(base) * 4.0 <
        static_cast<double>(cur);
    try {
      if (iterate) {
        for (std::uint64_t s = 0; s < steps; ++s) {
          p = convolve(p, phi);
          if (p.support_size() > support_budget)
            throw BudgetExceeded("gelfand: support budget", p.support_size());
        }
      } else {
        p = convolve(p, p);
        if (p.support_size() > support_budget)
          throw BudgetExceeded("gelfand: support budget", p.support_size());
      }
      rep.norms.push_back(measure(p));
    } catch (const BudgetExceeded&) {
      rep.budget_hit = true;
      break;
    }
    rep.roots.push_back(std::pow(rep.norms.back(), 1.0 / std::pow(2.0, k)));
    rep.doublings = k;
  }

  rep.error_budget = p.error_budget();
  rep.raw = rep.roots.back();
  rep.aitken = rep.raw;
  const std::size_t n = rep.roots.size();
  if (n >= 3) {
    const double x0 = rep.roots[n - 3], x1 = rep.roots[n - 2], x2 = rep.roots[n - 1];
    const double denom = x2 - 2 * x1 + x0;
    if (std::abs(denom) > 1e-14 * std::max(1.0, std::abs(x2)))
      rep.aitken = x2 - (x2 - x1) * (x2 - x1) / denom;
  }
  return rep;
}

}  // namespace fellband
