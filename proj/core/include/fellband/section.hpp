#ifndef FELLBAND_SECTION_HPP
#define FELLBAND_SECTION_HPP

#include <utility>
#include <vector>

#include "fellband/system.hpp"

namespace fellband {

// Finitely supported cross-section of the bundle: a sparse map from group
// elements to fibers, kept sorted by the canonical element order so that
// iteration (and hence every accumulation) is reproducible bit for bit.
//
// Sections carry an l1 error budget: the accumulated pruning mass plus the
// inherited budgets of the operands that produced them.  Exact constructions
// start at budget zero.
class CrossSection {
 public:
  explicit CrossSection(TwistedSystem::Ptr sys);

  static CrossSection delta(TwistedSystem::Ptr sys, const Point& x, Fiber a);
  // The algebra unit: (1/w) delta_e (x) 1 with w the Haar point mass.
  static CrossSection unit(TwistedSystem::Ptr sys);

  const TwistedSystem& system() const { return *sys_; }
  TwistedSystem::Ptr system_ptr() const { return sys_; }
  const GroupModel& group() const { return sys_->group(); }
  int fiber_dim() const { return sys_->fiber_dim(); }

  std::size_t support_size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<std::pair<Point, Fiber>>& entries() const { return entries_; }

  Fiber at(const Point& x) const;  // zero fiber when absent
  void set(const Point& x, Fiber a);
  void accumulate(const Point& x, const Fiber& a);

  CrossSection& operator+=(const CrossSection& other);
  CrossSection& operator-=(const CrossSection& other);
  CrossSection& operator*=(Complex c);
  friend CrossSection operator+(CrossSection a, const CrossSection& b) { return a += b; }
  friend CrossSection operator-(CrossSection a, const CrossSection& b) { return a -= b; }
  friend CrossSection operator*(Complex c, CrossSection a) { return a *= c; }

  // Haar-weighted norms over the finite support.
  double norm_l1() const;
  double norm_l2() const;
  double norm_linf() const;

  // Drops fibers with norm < rel * ||.||_1 and charges the dropped mass to
  // the budget.  Default threshold per the pruning policy.
  void prune(double rel = kPruneRel);
  static constexpr double kPruneRel = 1e-15;

  double error_budget() const { return budget_; }
  void charge_budget(double b) { budget_ += b; }

  // Max word radius of the support in the given ball (grows it on demand).
  int support_radius(CayleyBall& ball, int r_max = 4096) const;

 private:
  friend CrossSection convolve(const CrossSection& phi, const CrossSection& psi);

  void check_compatible(const CrossSection& other) const;

  TwistedSystem::Ptr sys_;
  std::vector<std::pair<Point, Fiber>> entries_;
  double budget_ = 0.0;
};

// Twisted convolution (Phi * Psi)(x) = sum_y Phi(y) . Psi(y^{-1}x) dy,
// evaluated as the double loop over supports with bundle products.
CrossSection convolve(const CrossSection& phi, const CrossSection& psi);

// Phi^*(x) = omega(x,x^{-1})^* alpha_x(Phi(x^{-1})^*), i.e. the pointwise
// bundle adjoint of Phi(x^{-1}).
CrossSection involution(const CrossSection& phi);

// n-th convolution power by repeated squaring (n >= 1).
CrossSection power(const CrossSection& phi, int n);

bool is_selfadjoint(const CrossSection& phi, double tol);

// Minimal-unitization element r*1 + Phi with norm |r| + ||Phi||_1.
struct Unital {
  Complex scalar{0.0, 0.0};
  CrossSection part;

  explicit Unital(TwistedSystem::Ptr sys) : part(std::move(sys)) {}
  Unital(Complex r, CrossSection phi) : scalar(r), part(std::move(phi)) {}

  double norm() const { return std::abs(scalar) + part.norm_l1(); }
  // Realizes the element inside the (unital) section algebra.
  CrossSection absorb() const;
};

Unital unital_mul(const Unital& u, const Unital& v);
Unital unital_add(const Unital& u, const Unital& v);
Unital unital_scale(Complex c, const Unital& u);

}  // namespace fellband

#endif
