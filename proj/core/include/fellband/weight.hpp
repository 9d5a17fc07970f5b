#ifndef FELLBAND_WEIGHT_HPP
#define FELLBAND_WEIGHT_HPP

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "fellband/group.hpp"

namespace fellband {

struct WeightSpec {
  enum class Kind { One, WordLength, PowerOfWordLength, LocallyFinite, Explicit };
  Kind kind = Kind::One;
  double s = 1.0;                    // exponent for PowerOfWordLength
  std::vector<double> chain_m;       // m_0 <= m_1 <= ..., all >= 1 (m_0 is nu(e))
  std::function<double(const Point&)> fn;  // Explicit evaluator
  double explicit_C = std::numeric_limits<double>::quiet_NaN();
};

// A weight nu : G -> [1, infinity) with nu(x^{-1}) = nu(x) and
// nu(xy) <= nu(x)nu(y).  poly_constant_C is the constant of the polynomial
// bound nu(xy) <= C(nu(x) + nu(y)); NaN when unknown.
class Weight {
 public:
  double operator()(const Point& x) const;

  WeightSpec::Kind kind() const { return kind_; }
  double power() const { return s_; }
  double poly_constant_C() const { return C_; }
  bool is_one() const { return kind_ == WeightSpec::Kind::One; }
  std::string describe() const;

  // Word-length lookups fall back to the shared ball (grown on demand).
  std::shared_ptr<CayleyBall> ball() const { return ball_; }

 private:
  friend Weight make_weight(std::shared_ptr<CayleyBall> ball, const WeightSpec& spec);

  enum class FastSigma { None, ZdDiamond, CyclicStd, DsZ2 };

  double sigma(const Point& x) const;
  double locally_finite_level(const Point& x) const;

  WeightSpec::Kind kind_ = WeightSpec::Kind::One;
  double s_ = 1.0;
  double C_ = 1.0;
  std::vector<double> chain_m_;
  std::function<double(const Point&)> fn_;
  FastSigma fast_ = FastSigma::None;
  std::shared_ptr<CayleyBall> ball_;
  int r_max_ = 4096;
};

// Builds a weight over the given ball's group/generators and stores the
// polynomial constant: C = 1 for nu_K = 1 + sigma_K (triangle inequality),
// C = 2^{s-1} for nu_K^s with s >= 1, C = 1 for locally finite chains
// (max bound).  Throws InvalidSpec for s < 1, non-monotone m_n, m_n < 1,
// or a non-symmetric generating set.
Weight make_weight(std::shared_ptr<CayleyBall> ball, const WeightSpec& spec);

struct IntegrabilityReport {
  double partial_sum = 0.0;  // B = sum nu(x)^{-p} over the enumerated ball
  bool converged = false;
  bool diverged = false;
  bool exhausted = false;       // the group ran out of elements
  double fitted_decay = 0.0;    // power-law exponent of shell contributions
  double tail_estimate = 0.0;
  int shells_used = 0;
};

// Partial sums of sum_x nu(x)^{-p} over balls B_n, n <= n_max, with a
// decay diagnostic on the shell contributions.
IntegrabilityReport weight_integrability(const Weight& weight, double p, int n_max);

struct DominationFit {
  double M = 1.0;
  double delta = 1.0;
  double max_violation = 0.0;  // max nu / (M nu_K^delta) before the final lift
};

// Fits nu <= M nu_K^delta over the enumerated ball by log-log regression,
// then lifts M so no sampled violations remain.  Throws NotGenerated
// (propagated) or InvalidSpec("no domination fit") when delta explodes.
DominationFit weight_domination_fit(const Weight& nu, int n_max, double delta_cap = 8.0);

}  // namespace fellband

#endif
