#ifndef FELLBAND_SPECTRA_HPP
#define FELLBAND_SPECTRA_HPP

#include "fellband/inversion.hpp"
#include "fellband/norms.hpp"

namespace fellband {

struct SpectrumEstimate {
  enum class Method { FiniteExact, SymbolGrid, TruncatedOperator };

  Method method = Method::FiniteExact;
  std::vector<Complex> values;  // FiniteExact eigenvalues (sorted)
  bool has_hull = false;        // self-adjoint inputs report [lo, hi]
  double lo = 0.0, hi = 0.0;
  int resolution = 0;  // SymbolGrid
  int radius = 0;      // TruncatedOperator
  double tolerance = 0.0;
};

// Exact spectrum of a section over a finite group: eigenvalues of the
// left-multiplication matrix on the k^2 |G|-dimensional algebra.  The
// finite-dimensional spectrum is independent of the norm completion, so it
// anchors every l1-vs-C* comparison.
SpectrumEstimate finite_group_spectrum(const CrossSection& phi,
                                       std::size_t dim_cap = 4096);

// Full-radius covariant representation matrix (k |G| dimensional); an exact
// *-representation of the twisted algebra.
Eigen::MatrixXcd finite_rep_matrix(const CrossSection& phi,
                                   std::size_t dim_cap = 4096);

// Trigonometric-polynomial symbol of a scalar untwisted section on Z^d.
Complex zd_symbol(const CrossSection& phi, const std::vector<double>& theta);

// Symbol values on a grid of T^d, refined by doubling until the hull
// endpoints move by < 1e-6.
SpectrumEstimate zd_symbol_spectrum(const CrossSection& phi, int grid_n = 512);
double zd_symbol_opnorm(const CrossSection& phi, int grid_n = 512);
double zd_symbol_min_abs(const CrossSection& phi, int grid_n = 4096);

// Hull of the truncated self-adjoint operator's spectrum on B_R: Rayleigh
// values of the compression, so certified inner bounds of the true hull,
// widening monotonically in R.
SpectrumEstimate truncated_spectrum_hull(const CrossSection& phi, int radius,
                                         std::size_t element_budget = CayleyBall::kDefaultBudget);

// Rational-flux symbol of the twisted Z^2 algebra at theta = a/q: the q x q
// matrix  sum Phi(m,n) e^{i(k1 m + k2 n)} V^m U^n  with U the clock, V the
// shift.  A *-representation for each (k1,k2).
Eigen::MatrixXcd nc_torus_symbol_matrix(const CrossSection& phi, double k1, double k2);

// Union of symbol eigenvalues over a (k1,k2) grid; hull for self-adjoint
// sections.  Requires rational theta with denominator q <= 16.
SpectrumEstimate nc_torus_symbol_spectrum(const CrossSection& phi, int grid_n = 128);
double nc_torus_symbol_opnorm(const CrossSection& phi, int grid_n = 128);

struct RadiusInstance {
  enum class Oracle { FiniteExact, ZdSymbol, TorusSymbol, Truncated };

  std::string label;
  CrossSection phi;
  std::shared_ptr<Weight> nu;  // weighted Gelfand sequence when present
  int doublings = 6;
  std::size_t support_budget = 4'000'000;
  Oracle oracle = Oracle::Truncated;
  int oracle_param = 0;  // grid resolution or truncation radius (0 = auto)

  explicit RadiusInstance(CrossSection p) : phi(std::move(p)) {}
};

struct RadiusInstanceResult {
  std::string label;
  double rho_raw = 0.0, rho_aitken = 0.0;
  double rho_w_raw = 0.0, rho_w_aitken = 0.0;
  double opnorm = 0.0;
  std::string opnorm_method;
  double ratio = 0.0;    // rho_aitken / opnorm
  double w_ratio = 0.0;  // weighted counterpart (0 when unweighted)
  bool exact_pair_ok = true;  // finite groups: spectrum vs opnorm to 1e-8
  bool budget_hit = false;
  bool pass = false;
};

struct RadiusSuiteResult {
  std::vector<RadiusInstanceResult> rows;
  double tol_ratio = 2e-2;
  bool pass = false;
};

// Spectral-radius invariance evidence: per instance the l1 and weighted-l1
// Gelfand radii against the operator-norm oracle.  Per-instance budget
// failures are reported in the row, not thrown.
RadiusSuiteResult radius_invariance_suite(std::vector<RadiusInstance> instances,
                                          double tol_ratio = 2e-2);

struct WienerReport {
  bool invertible = false;
  double symbol_min = 0.0;
  double residual_weighted = 0.0;
  double oracle_max_dev = 0.0;  // coefficientwise gap to Fourier division
  double weighted_tail = 0.0;   // sum_{|n|>N} nu |inv(n)| at the report radius
  int tail_from = 0;
  bool pass = false;
};

// Classical Wiener-lemma check on Z: inverts a scalar self-adjoint section
// with min symbol >= margin via the Neumann series and compares against
// grid Fourier division; NotInvertible propagates when the symbol vanishes.
WienerReport wiener_inversion_check(const CrossSection& phi, double margin,
                                    const Weight& nu, double tol = 1e-8);

}  // namespace fellband

#endif
