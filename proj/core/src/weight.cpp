#include "fellband/weight.hpp"

#include <algorithm>
#include <cmath>

namespace fellband {

namespace {

bool is_standard_gens(const GroupModel& g, const GeneratingSet& k) {
  const GeneratingSet std_k = g.standard_generators();
  return k.elements == std_k.elements;
}

int highest_bit_index(std::int64_t mask) {
  int idx = 0;
  while (mask) {
    ++idx;
    mask >>= 1;
  }
  return idx;  // 0 for the identity, 1-based index of the top set bit otherwise
}

}  // namespace

double Weight::sigma(const Point& x) const {
  switch (fast_) {
    case FastSigma::ZdDiamond: {
      std::int64_t s = 0;
      for (int i = 0; i < x.size(); ++i) s += std::llabs(x[i]);
      return static_cast<double>(s);
    }
    case FastSigma::CyclicStd: {
      const std::int64_t m = ball_->group().cyclic_modulus();
      return static_cast<double>(std::min(x[0], m - x[0]));
    }
    case FastSigma::DsZ2:
      return static_cast<double>(__builtin_popcountll(static_cast<unsigned long long>(x[0])));
    case FastSigma::None:
      return static_cast<double>(word_length(*ball_, x, r_max_));
  }
  return 0.0;
}

double Weight::locally_finite_level(const Point& x) const {
  const std::size_t level = static_cast<std::size_t>(highest_bit_index(x[0]));
  if (level < chain_m_.size()) return chain_m_[level];
  return chain_m_.back();
}

double Weight::operator()(const Point& x) const {
  switch (kind_) {
    case WeightSpec::Kind::One:
      return 1.0;
    case WeightSpec::Kind::WordLength:
      return 1.0 + sigma(x);
    case WeightSpec::Kind::PowerOfWordLength:
      return std::pow(1.0 + sigma(x), s_);
    case WeightSpec::Kind::LocallyFinite:
      return locally_finite_level(x);
    case WeightSpec::Kind::Explicit:
      return fn_(x);
  }
  return 1.0;
}

std::string Weight::describe() const {
  switch (kind_) {
    case WeightSpec::Kind::One:
      return "1";
    case WeightSpec::Kind::WordLength:
      return "1+sigma_K";
    case WeightSpec::Kind::PowerOfWordLength:
      return "(1+sigma_K)^" + format_double(s_);
    case WeightSpec::Kind::LocallyFinite:
      return "locally-finite chain";
    case WeightSpec::Kind::Explicit:
      return "explicit";
  }
  return "?";
}

Weight make_weight(std::shared_ptr<CayleyBall> ball, const WeightSpec& spec) {
  Weight w;
  w.kind_ = spec.kind;
  w.ball_ = ball;

  switch (spec.kind) {
    case WeightSpec::Kind::One:
      w.C_ = 1.0;
      break;
    case WeightSpec::Kind::WordLength:
    case WeightSpec::Kind::PowerOfWordLength: {
      if (!ball) throw InvalidSpec("make_weight: word-length weight needs a ball");
      if (!ball->generators().symmetric)
        throw InvalidSpec("make_weight: generating set must be symmetric");
      if (spec.kind == WeightSpec::Kind::PowerOfWordLength) {
        if (spec.s < 1.0) throw InvalidSpec("make_weight: power s must be >= 1");
        w.s_ = spec.s;
        w.C_ = std::pow(2.0, spec.s - 1.0);
      } else {
        w.C_ = 1.0;
      }
      const GroupModel& g = ball->group();
      if (is_standard_gens(g, ball->generators())) {
        switch (g.kind()) {
          case GroupModel::Kind::Zd:
            w.fast_ = Weight::FastSigma::ZdDiamond;
            break;
          case GroupModel::Kind::Cyclic:
            w.fast_ = Weight::FastSigma::CyclicStd;
            break;
          case GroupModel::Kind::DirectSumZ2:
            w.fast_ = Weight::FastSigma::DsZ2;
            break;
          default:
            break;
        }
      }
      break;
    }
    case WeightSpec::Kind::LocallyFinite: {
      if (!ball || ball->group().kind() != GroupModel::Kind::DirectSumZ2)
        throw InvalidSpec("make_weight: locally-finite chain needs DirectSumZ2");
      if (spec.chain_m.empty()) throw InvalidSpec("make_weight: empty chain");
      double prev = 1.0;
      for (double m : spec.chain_m) {
        if (m < 1.0) throw InvalidSpec("make_weight: chain values must be >= 1");
        if (m < prev) throw InvalidSpec("make_weight: chain must be nondecreasing");
        prev = m;
      }
      w.chain_m_ = spec.chain_m;
      w.C_ = 1.0;  // nu(xy) <= max{nu(x),nu(y)} <= nu(x)+nu(y)
      break;
    }
    case WeightSpec::Kind::Explicit:
      if (!spec.fn) throw InvalidSpec("make_weight: explicit weight needs an evaluator");
      w.fn_ = spec.fn;
      w.C_ = spec.explicit_C;
      break;
  }
  return w;
}

IntegrabilityReport weight_integrability(const Weight& weight, double p, int n_max) {
  if (p <= 0.0) throw InvalidSpec("weight_integrability: p must be positive");
  auto ball = weight.ball();
  if (!ball) throw InvalidSpec("weight_integrability: weight has no ball");

  IntegrabilityReport rep;
  const double mass = ball->group().point_mass();
  std::vector<double> shell_sums;
  for (int n = 0; n <= n_max; ++n) {
    // diagnostic operation: a budget trip just truncates the partial sums
    try {
      ball->grow_to(n);
    } catch (const BudgetExceeded&) {
      break;
    }
    const std::vector<Point>& sh = ball->shell(n);
    if (sh.empty() && n > ball->grown_radius()) {
      rep.exhausted = true;
      break;
    }
    double s = 0.0;
    for (const Point& x : sh) s += mass * std::pow(weight(x), -p);
    shell_sums.push_back(s);
    rep.partial_sum += s;
    rep.shells_used = n;
  }

  if (rep.exhausted) {
    rep.converged = true;
    return rep;
  }

  // Power-law diagnostic on the trailing shells: contribution ~ c n^{-gamma};
  // the tail is summable iff gamma > 1.
  std::vector<double> lx, ly;
  const std::size_t from = shell_sums.size() / 2;
  for (std::size_t n = std::max<std::size_t>(from, 1); n < shell_sums.size(); ++n) {
    if (shell_sums[n] <= 0.0) continue;
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(shell_sums[n]));
  }
  if (lx.size() >= 3) {
    const LineFit fit = fit_line(lx, ly);
    rep.fitted_decay = -fit.slope;
    const double n_last = static_cast<double>(rep.shells_used);
    if (rep.fitted_decay >= 1.15) {
      rep.converged = true;
      rep.tail_estimate =
          shell_sums.back() * n_last / (rep.fitted_decay - 1.0);
    } else if (rep.fitted_decay <= 1.05) {
      rep.diverged = true;
    }
  } else if (shell_sums.empty() || shell_sums.back() == 0.0) {
    rep.converged = true;
  }
  return rep;
}

DominationFit weight_domination_fit(const Weight& nu, int n_max, double delta_cap) {
  auto ball = nu.ball();
  if (!ball) throw InvalidSpec("weight_domination_fit: weight has no ball");
  WeightSpec wl;
  wl.kind = WeightSpec::Kind::WordLength;
  const Weight nu_k = make_weight(ball, wl);

  std::vector<double> lx, ly;
  std::vector<Point> pts = ball->ball(n_max);
  for (const Point& x : pts) {
    lx.push_back(std::log(nu_k(x)));
    ly.push_back(std::log(nu(x)));
  }
  const LineFit fit = fit_line(lx, ly);
  DominationFit out;
  out.delta = fit.slope;
  out.M = std::exp(fit.intercept);
  if (!std::isfinite(out.delta) || out.delta > delta_cap)
    throw InvalidSpec("no domination fit: delta exceeds cap");

  double worst = 0.0;
  for (const Point& x : pts)
    worst = std::max(worst, nu(x) / (out.M * std::pow(nu_k(x), out.delta)));
  out.max_violation = worst;
  if (worst > 1.0) out.M *= worst;  // lift so the bound holds on the sample
  return out;
}

}  // namespace fellband
