#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stable_extrema/core.hpp"
#include "stable_extrema/ftau.hpp"
#include "stable_extrema/types.hpp"

namespace stable_extrema {

// phi(z) = E exp(-z S), S the supremum of X up to an independent unit
// exponential time.

enum class PhiMethod {
  Auto,
  DoubleGamma,
  RationalAlpha,
  CklProduct,
  LogSeries,
  QProduct,
  DarlingQuadrature,
};

std::string to_string(PhiMethod m);
PhiMethod phi_method_from_string(const std::string& s);

// Auto: C_{k,l} product when a certificate is found, the Clausen product
// when alpha is an exact rational and z > 0, otherwise double gamma.
EvalResult phi(const Parameters& params, cplx z, PhiMethod method = PhiMethod::Auto);

// Ratio of four Barnes G functions with tau = alpha.
EvalResult phi_double_gamma(const Parameters& params, cplx z);
// Same formula evaluated at z = exp(w) for any complex w, i.e. on the
// Riemann surface of log z. Accepts any alpha > 0 and rho in (0, 1).
EvalResult phi_double_gamma_log(double alpha, double rho, cplx w);

// Finite product with Clausen-function prefactor for alpha = m/n, z > 0.
EvalResult phi_rational_alpha(const RationalAlpha& ra, double rho, double z);

// Finite q-Pochhammer ratio for processes in C_{k,l}.
EvalResult phi_ckl(const Parameters& params, const CklClass& ckl, cplx z);

inline constexpr double kDefaultSmallDenominatorGuard = 1e-8;

// Exponentiated power series in z and z^alpha, with phi(z) = z^{-alpha rho}
// phi(1/z) applied when |z| > 1. Throws SmallDenominatorError if alpha
// fails the irrationality diagnostic or a sin(pi k alpha), sin(pi k/alpha)
// denominator drops below guard.
EvalResult phi_log_series(const Parameters& params, cplx z,
                          double guard = kDefaultSmallDenominatorGuard);
// Complex alpha variant, used for Im alpha > 0 comparisons.
EvalResult phi_log_series(cplx alpha, double rho, cplx z,
                          double guard = kDefaultSmallDenominatorGuard);

// Ratio of four infinite q-Pochhammer symbols; needs Im alpha > 0 and
// |z| < min(sqrt|q|, sqrt|q~|).
EvalResult phi_qproduct(cplx alpha, double rho, cplx z);

// Darling's integral for log phi, Re z > 0.
EvalResult phi_darling_quadrature(const Parameters& params, cplx z);

// Infinite product of gamma functions truncated to n_factors factors. The
// truncation error is O(1/N); when n_factors is a multiple of 8 the partial
// products at N/8, N/4, N/2, N are extrapolated in 1/N.
EvalResult phi_gamma_product(const Parameters& params, cplx z, long n_factors);

// Wiener-Hopf factor for killing rate q: phi(z q^{-1/alpha}).
EvalResult phi_q(const Parameters& params, cplx z, double q, PhiMethod method = PhiMethod::Auto);

// Continued-fraction check that alpha is not too well approximated by
// rationals: fails when |alpha - p/q| < 1e-12 for some q <= 1e6, or a
// convergent has |alpha - p/q| < 1e-6 * 2^-q.
struct IrrationalityReport {
  bool passed = true;
  long worst_p = 0;
  long worst_q = 0;
  double worst_error = 0.0;
};
IrrationalityReport irrationality_diagnostic(double alpha);

// Roots and poles of w -> phi(exp(w)) on the lattice w_{m,n} +- pi i rho.
struct LatticeRoot {
  long m = 0;
  long n = 0;
  cplx w;
  int quadrant = 1;  // 1: m, n >= 0; 3: m, n < 0
};

struct PoleZeroReport {
  std::vector<LatticeRoot> zeros;
  std::vector<LatticeRoot> poles;
  // phi has simple poles at -exp(+-pi i (rho - 1/alpha)) iff alpha rho > 1
  bool simple_poles_of_phi = false;
  std::vector<cplx> simple_pole_locations;
};

// Lists lattice entries with 0 <= m, n < count (first quadrant) and
// -count <= m, n < 0 (third quadrant).
PoleZeroReport pole_zero_report(const Parameters& params, long count = 4);

}  // namespace stable_extrema
