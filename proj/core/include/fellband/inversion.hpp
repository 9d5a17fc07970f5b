#ifndef FELLBAND_INVERSION_HPP
#define FELLBAND_INVERSION_HPP

#include "fellband/norms.hpp"

namespace fellband {

// Constants attached to a polynomial weight nu with nu^{-1} in l^p:
//   B = ||nu^{-1}||_p^p,   A = 2 B^{1/(p+1)},   D = max{2CA, 1},
//   theta = (4p+3)/(p+1),  delta = 1 + log2(C).
struct WeightConstants {
  double p = 0.0;
  double B = 0.0;
  double A = 0.0;
  double C = 1.0;
  double D = 1.0;
  double theta = 0.0;
  double delta = 0.0;
  IntegrabilityReport integrability;
};

// Populates the constants; throws Diverged when the partial sums of
// sum nu^{-p} show no convergence.
WeightConstants weight_constants(const Weight& nu, double p, int n_max);

struct SubmultReport {
  bool pass = false;
  double worst_ratio = 0.0;   // lhs / rhs over the checked pairs
  double diffeq_worst = 0.0;  // ||Psi^{2n}||_{1,nu} / (2C ||Psi^n||_{1,nu} ||Psi^n||_1)
};

// ||Psi*Phi||_{1,nu} <= C( ||Psi||_{1,nu} ||Phi||_1 + ||Psi||_1 ||Phi||_{1,nu} ),
// plus the doubling specialization for n in {1,2,4}.
SubmultReport weighted_submult_check(const CrossSection& phi, const CrossSection& psi,
                                     const Weight& nu, double C);

struct GendiffReport {
  bool pass = false;
  double lhs = 0.0;  // ||Phi^4||_E
  double rhs = 0.0;  // D ||Phi||_{l2e}^{1/(p+1)} ||Phi||_E^{(4p+3)/(p+1)}
  double ratio = 0.0;
};

GendiffReport gendiff_check(const CrossSection& phi, const Weight& nu,
                            const WeightConstants& constants);

struct InversionResult {
  CrossSection inverse;
  double residual_weighted = 0.0;  // ||Phi * Phi^{-1} - 1||_{1,nu}
  double residual_plain = 0.0;
  int terms = 0;
  bool slow_convergence = false;

  explicit InversionResult(TwistedSystem::Ptr sys) : inverse(std::move(sys)) {}
};

struct NeumannOptions {
  double tol = 1e-8;
  int max_terms = 4096;
  std::size_t support_budget = 2'000'000;
};

// Phi^{-1} = ||Phi||_{C*}^{-2} (sum_n Psi^n) Phi^*,  Psi = 1 - Phi^* Phi / ||Phi||_{C*}^2.
// The C*-norms of Phi and Phi^{-1} are inputs (oracle or estimator), so bound
// and measurement share one source of truth.  Throws NotInvertible when
// ||Psi||_{C*} = 1 - 1/(cond^2) >= 1 - 1e-9.
InversionResult invert_neumann(const CrossSection& phi, double phi_cstar_norm,
                               double phi_inv_cstar_norm, const Weight& nu,
                               const NeumannOptions& opts = {});

struct NormControlBound {
  double log_value = 0.0;  // natural log of the bound
  double value = 0.0;      // inf when it overflows a double
  bool finite = true;      // the infinite product collapsed within k range
  bool overflow = false;   // linear value exceeds double range
  int terms_used = 0;
  double tail_estimate = 0.0;  // bound on the neglected log-factors
};

// Evaluates (in log space) the norm-controlled inversion bound
//   ||Phi||_E / ||Phi||_{C*}^2 *
//     prod_k sum_{j=0..3} ( D^{(theta^k-1)/(theta-1)}
//                           (1 - 1/cond^2)^{4^k - theta^k}
//                           (2 ||Phi||_E^2 / ||Phi||_{C*}^2)^{theta^k} )^j
// truncated at k_max with a tail estimate from the doubly-exponential
// collapse of the factors.
NormControlBound norm_control_bound(const WeightConstants& constants, double norm_E_value,
                                    double phi_cstar_norm, double phi_inv_cstar_norm,
                                    int k_max = 40);

struct RadiusLowerBoundReport {
  double best = 0.0;          // max_n ||Psi^2 * Phi^n||^{1/n} over truncations
  double gelfand_raw = 0.0;   // reference radius estimate for Phi
  int best_truncation = 0;    // truncation radius achieving the bound
  int n_used = 0;
};

// Diagnostic: searches truncations Psi of Phi for the lower bound
// limsup ||Psi^2 * Phi^n||^{1/n} >= rho(Phi) at n <= n_max; reported,
// never asserted.
RadiusLowerBoundReport truncation_radius_lower_bound(const CrossSection& phi,
                                                     int n_max = 32);

}  // namespace fellband

#endif
