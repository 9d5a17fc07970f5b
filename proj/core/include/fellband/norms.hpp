#ifndef FELLBAND_NORMS_HPP
#define FELLBAND_NORMS_HPP

#include <Eigen/Dense>
#include <optional>

#include "fellband/section.hpp"
#include "fellband/weight.hpp"

namespace fellband {

struct NormReport {
  enum class Method { Exact, Truncated, Sampled, Extrapolated };

  double value = 0.0;
  Method method = Method::Exact;
  int radius = 0;            // Truncated
  int samples = 0;           // Sampled
  std::uint64_t seed = 0;    // Sampled
  bool lower_bound = false;  // truncated/sampled values certify a lower bound
  double error_budget = 0.0;
  double last_increment = 0.0;

  std::string method_tag() const;
};

// l^p norms over the finite support, with the Haar point mass and an
// optional weight nu:  ( sum nu(x)^p ||Phi(x)||^p dx )^{1/p}.
double norm_lp(const CrossSection& phi, double p);
double norm_lp_weighted(const CrossSection& phi, double p, const Weight& nu);
double norm_linf(const CrossSection& phi);
double norm_linf_weighted(const CrossSection& phi, const Weight& nu);

// Hilbert-module norm || sum Phi(x)^adj . Phi(x) dx ||_{C_e}^{1/2}; equals
// the plain l2 norm for scalar fibers and is dominated by it in general.
double norm_l2e(const CrossSection& phi);

// max{ ||Phi||_{1,nu}, ||Phi||_inf }.
double norm_E(const CrossSection& phi, const Weight& nu);

// Truncated regular covariant representation of the bundle on
// C^k (x) l^2(B_R):
//   (pi(a,x) xi)(z) = alpha_{z^{-1}}(a) omega(z^{-1},x) xi(x^{-1}z),
// compressed to the ball B_R.  Block vectors are point-major: the fiber
// column of basis point #i occupies [i*k, (i+1)*k).
class TruncatedRep {
 public:
  TruncatedRep(TwistedSystem::Ptr sys, int radius,
               std::size_t element_budget = CayleyBall::kDefaultBudget);

  const TwistedSystem& system() const { return *sys_; }
  int radius() const { return radius_; }
  int fiber_dim() const { return k_; }
  std::size_t point_count() const { return points_.size(); }
  std::size_t dim() const { return point_count() * static_cast<std::size_t>(k_); }
  const std::vector<Point>& basis_points() const { return points_; }
  std::optional<std::size_t> point_index(const Point& x) const;
  bool covers_group() const;  // finite group fully enumerated: the rep is exact

  using Vec = Eigen::VectorXcd;

  // xi -> truncate(pi(Phi) xi); adjoint applies pi(Phi)^* = pi(Phi^*).
  void apply(const CrossSection& phi, const Vec& in, Vec& out) const;
  // Single bundle element pi(a, x).
  void apply_point(const Fiber& a, const Point& x, const Vec& in, Vec& out) const;

  // Dense matrix of xi -> truncate(Phi * xi) in the basis
  // {matrix units E_ij (x) delta_y}, dimension k^2 |B_R| (capped).
  Eigen::MatrixXcd hs_matrix(const CrossSection& phi, std::size_t dim_cap = 4000) const;

  // Dense matrix of the covariant representation above (dimension k |B_R|);
  // an exact *-representation matrix when covers_group().
  Eigen::MatrixXcd matrix(const CrossSection& phi) const;

 private:
  TwistedSystem::Ptr sys_;
  int radius_;
  int k_;
  mutable CayleyBall ball_;
  std::vector<Point> points_;
  std::unordered_map<Point, std::size_t, PointHash> index_;
};

// Largest-eigenvalue context: Lanczos with full reorthogonalization on the
// compression of lambda(Phi)^* lambda(Phi).  Deterministic all-ones start.
struct OpNormOptions {
  int max_iterations = 300;
  double increment_tol = 1e-12;
  std::size_t element_budget = CayleyBall::kDefaultBudget;
};

// Largest eigenvalue of a Hermitian PSD operator given by its apply;
// Lanczos with full reorthogonalization and a deterministic all-ones start.
double lanczos_largest_eigenvalue(
    const std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>& apply,
    std::size_t dim, int max_iter = 300, double tol = 1e-12);

// ||lambda(Phi)|| estimated on B_R; a certified lower bound of the C*-norm,
// nondecreasing in R.
NormReport opnorm_estimate(const CrossSection& phi, int radius,
                           const OpNormOptions& opts = {});

// Escalates R geometrically from 4x the support radius until the estimate
// moves by less than `increment` (or the budget trips).
NormReport opnorm_auto(const CrossSection& phi, double increment = 1e-3,
                       const OpNormOptions& opts = {});

// ||Phi||_{pi,p} = sup_{|xi|<=1} ( sum_x ||pi(Phi(x))xi||^p )^{1/p} on the
// truncated representation.  p = 2 is computed exactly (largest eigenvalue
// of sum_x pi(Phi(x))^* pi(Phi(x))); other p by seeded sampling plus a
// nonlinear power ascent, always a certified lower bound.  The sample pool
// includes the per-point singular optimizers, so the estimate dominates
// ||Phi||_inf whenever supp(Phi) lies in B_R.
NormReport norm_pi_p_estimate(const CrossSection& phi, double p, int radius,
                              int n_samples, std::uint64_t seed);

// Evaluates ( sum_x ||pi(Phi(x)) xi||^p )^{1/p} at one vector (a pointwise
// lower bound of the sup); used by the lemma-style inequality suites.
double pi_p_value(const TruncatedRep& rep, const CrossSection& phi, double p,
                  const TruncatedRep::Vec& xi);

struct GelfandReport {
  std::vector<double> norms;      // ||Phi^{2^k}||
  std::vector<double> roots;      // ||Phi^{2^k}||^{1/2^k}
  double raw = 0.0;               // last root
  double aitken = 0.0;            // Delta^2 extrapolation of the roots
  int doublings = 0;
  bool budget_hit = false;
  double error_budget = 0.0;
};

// Gelfand radius sequence under the (optionally nu-weighted) l1 norm.
// Powers Phi^{2^k} are formed by squaring or by iterated small-support
// multiplication, whichever is cheaper; the values agree up to pruning.
GelfandReport spectral_radius_gelfand(const CrossSection& phi, int max_doublings,
                                      const Weight* nu = nullptr,
                                      std::size_t support_budget = 4'000'000);

}  // namespace fellband

#endif
