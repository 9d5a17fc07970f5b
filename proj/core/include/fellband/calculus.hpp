#ifndef FELLBAND_CALCULUS_HPP
#define FELLBAND_CALCULUS_HPP

#include <memory>
#include <vector>

#include "fellband/norms.hpp"
#include "fellband/section.hpp"

namespace fellband {

// The entire functions driving the one-parameter groups:
//   u(z) = e^{iz} - 1,  v(z) = (e^{iz} - 1 - iz)/z,  w(z) = v(z)/z,
// with u(z) = v(z) z + iz and sup_R |w| = |w(0)| = 1/2.
enum class EntireSeries { U, V, W };

Complex entire_coefficient(EntireSeries s, int power);
Complex entire_eval(EntireSeries s, Complex z);

struct SeriesResult {
  CrossSection section;
  double tail_bound = 0.0;  // l1 bound on the dropped series tail
  int terms = 0;
};

// Truncated power series in the convolution algebra; the truncation order K
// is chosen so the l1 tail bound sum_{k>K} |c_k| ||Phi||_1^k stays below tol.
SeriesResult entire_apply(EntireSeries s, const CrossSection& phi, double tol);

struct ExpResult {
  Unital value;           // (1, u(t Phi)) = e^{it Phi}
  double budget = 0.0;    // total l1 error bound (series + squaring + pruning)
  int squarings = 0;
  int series_terms = 0;
};

// e^{it Phi} by scaling and squaring: m = ceil(log2(1+|t| ||Phi||_1)),
// series at t/2^m, then m squarings in the unitization.
ExpResult exp_it(const CrossSection& phi, double t, double tol);

struct OperatorGrowthProfile {
  std::vector<double> t;
  std::vector<double> norm;           // ||u(t Phi)||_1 (weighted when nu given)
  double slope = 0.0;                 // log-log fit over the upper half
  double residual = 0.0;
  double c_hat = 0.0;                 // max norm / t^slope over the grid
  double theoretical_exponent = 0.0;  // 2d+2, or 2d+2+4delta weighted
};

OperatorGrowthProfile growth_profile_op(const CrossSection& phi,
                                        const std::vector<double>& t_grid,
                                        const Weight* nu = nullptr,
                                        double point_tol_rel = 1e-6);

struct DixContractionReport {
  double lhs = 0.0;  // ||v(Phi)||_{l2e}
  double rhs = 0.0;  // 0.5 ||Phi||_{l2e} + tol
  bool pass = false;
  double w_sup = 0.0;  // numerical sup over a real grid of |w|
};

DixContractionReport dix_contraction_check(const CrossSection& phi, double tol = 1e-9);

// Compactly supported test functions plus Gaussians.  All families provide
// a pointwise evaluator and a Fourier transform f^(t) = int f(x) e^{itx} dx
// (closed form for Gaussian and RaisedCosine, adaptive quadrature with
// error < 1e-10 otherwise).
class FunctionSpec {
 public:
  enum class Family { Gaussian, SmoothBump, RaisedCosine, PolyTimesBump, Product };

  static FunctionSpec gaussian(double center, double width);
  static FunctionSpec smooth_bump(double center, double radius);
  static FunctionSpec raised_cosine(double center, double radius);
  static FunctionSpec poly_times_bump(std::vector<double> coeffs, double center,
                                      double radius);
  static FunctionSpec product(const FunctionSpec& f, const FunctionSpec& g);

  Family family() const { return family_; }
  double eval(double x) const;
  Complex fourier(double t) const;
  double at_zero() const { return eval(0.0); }
  bool real_valued() const { return true; }

  // Effective integration bounds (exact support for compact families,
  // 1e-22 mass cutoff for Gaussians).
  double lower() const;
  double upper() const;

  // max over probes of |f^(t)| (1+|t|)^m; the decay envelope used by the
  // quadrature tail model.
  double decay_envelope(int m, double t_probe) const;

  std::string describe() const;

 private:
  FunctionSpec(Family f) : family_(f) {}
  Family family_;
  double center_ = 0.0, width_ = 1.0;
  std::vector<double> coeffs_;
  std::shared_ptr<const FunctionSpec> left_, right_;
};

Complex fourier_transform(const FunctionSpec& f, double t);

struct QuadratureSpec {
  double tol = 1e-4;
  double T = 0.0;    // truncation; 0 = choose from the tail model
  double dt = 0.0;   // step; 0 = halve until stable
  double t_cap = 400.0;
  int max_halvings = 10;
  // Growth model ||u(t Phi)||_1 <= c_hat |t|^{n_hat}; when c_hat <= 0 a
  // profile over t in [2,16] is measured, with n_hat capped at 2d+2.
  double c_hat = -1.0;
  double n_hat = 0.0;
};

struct ErrorBreakdown {
  double quadrature = 0.0;
  double tail = 0.0;
  double series = 0.0;  // node series + squaring + pruning budgets
  double total() const { return quadrature + tail + series; }
};

struct CalcResult {
  Unital value;
  ErrorBreakdown err;
  bool tolerance_met = false;
  double T = 0.0, dt = 0.0;
  int nodes = 0;

  explicit CalcResult(TwistedSystem::Ptr sys) : value(std::move(sys)) {}
};

// f(Phi) = (1/2pi) int f^(t) e^{it Phi} dt over [-T,T] by composite
// midpoint quadrature; the reported error adds the quadrature-halving
// estimate, the tail bound int_{|t|>T} |f^|(1 + c_hat |t|^{n_hat}) dt / 2pi,
// and the per-node series/pruning budgets.  Returns best effort with its
// true budget when the tolerance cannot be met within the caps.
CalcResult dixmier_baillet(const FunctionSpec& f, const CrossSection& phi,
                           const QuadratureSpec& quad);

struct HomomorphismReport {
  double product_residual = 0.0;  // ||(f g)(Phi) - f(Phi) * g(Phi)||
  double adjoint_residual = 0.0;  // ||conj(f)(Phi) - f(Phi)^*||
  double budget_sum = 0.0;        // combined reported budgets
  double allowance = 0.0;         // norm-weighted bound the residuals must meet
  bool pass = false;
};

HomomorphismReport calculus_homomorphism_check(const FunctionSpec& f,
                                               const FunctionSpec& g,
                                               const CrossSection& phi,
                                               const QuadratureSpec& quad);

}  // namespace fellband

#endif
