#pragma once

#include <vector>

#include "stable_extrema/core.hpp"
#include "stable_extrema/types.hpp"

namespace stable_extrema {

// M(s) = E[S_1^{s-1}], S_1 the supremum of X on [0, 1]. Meromorphic in s.

// Ratio of six Barnes G functions with tau = alpha. Poles are detected on the
// G-zero lattices first: PoleError (residue attached) on a pole, the circle
// mean on a removable point, near_singular within 1e-6 of a pole.
EvalResult mellin(const Parameters& params, cplx s);
// Same formula for any alpha > 0, rho in (0, 1], used where the transformed
// parameters leave the admissible set (e.g. (1/alpha, alpha rho) = (1/2, 1)).
EvalResult mellin_double_gamma(double alpha, double rho, cplx s);

// Finite gamma/sine products for processes in C_{k,l}.
EvalResult mellin_ckl(const Parameters& params, const CklClass& ckl, cplx s);

// Residuals of the two quasi-periodicity relations (periods 1 and alpha) and
// of the two reflections (s -> 2 - alpha rho - s and s -> 1 - (1 - s)/alpha
// with parameters (1/alpha, alpha rho)). Relative to |M|.
struct ResidualPair {
  double first = 0.0;
  double second = 0.0;
};
ResidualPair mellin_recursion_check(const Parameters& params, cplx s);
ResidualPair mellin_reflections_check(const Parameters& params, cplx s);

// Interval of Re s around 1 where M is analytic.
struct MellinStrip {
  double c_min = 0.0;
  double c_max = 0.0;
};
MellinStrip mellin_strip(const Parameters& params);

// Residue coefficients. a, b need the generic pole structure; c+ (l > 0)
// and c- (l < 0) belong to a C_{k,l} certificate. SmallDenominatorError when
// a sine denominator drops below 1e-12.
double residue_a(const Parameters& params, long m, long n);
double residue_b(const Parameters& params, long m, long n);
double residue_c_plus(const Parameters& params, const CklClass& ckl, long m, long n);
double residue_c_minus(const Parameters& params, const CklClass& ckl, long m, long n);

enum class ResidueKind {
  Generic,  // s+_{m,n} = m + alpha n (m, n >= 1), s-_{m,n} = 1 - alpha rho - m - alpha n
  CklPos,   // s_{m,n} = m + alpha n, residue c+_{m-1,n}
  CklNeg,   // s_{m,n} = m + alpha n, residue c-_{m-1,n}
};

struct ResidueEntry {
  double s = 0.0;
  double residue = 0.0;
  long m = 0;
  long n = 0;
};

struct ResidueTable {
  Parameters params;
  ResidueKind kind = ResidueKind::Generic;
  CklClass ckl;
  std::vector<ResidueEntry> entries;  // sorted by s
};

// Generic: 0 <= m <= m_max, 0 <= n <= n_max for both families (s+ uses m, n
// >= 1). C_{k,l}: every pole with |m| <= m_max, |n| <= n_max allowed by the
// certificate.
ResidueTable residue_coeffs(const Parameters& params, ResidueKind kind, long m_max, long n_max);

// (1 / 2 pi i) times the integral of M over a circle around s0, by the
// trapezoid rule.
cplx mellin_numeric_residue(const Parameters& params, cplx s0, double radius = 1e-3, int nodes = 64);

// Leading decay of ln|M(x + i y)| per unit |y|:
// (pi / (2 alpha)) (alpha (1 - rho) + 1 - alpha rho).
double mellin_decay_rate(const Parameters& params);
// -rate |y|; y enters only through |y| (needs |y| >= 10).
double mellin_decay_bound(const Parameters& params, double x, double y);

// |int_0^inf z^{s-1} phi(z) dz - Gamma(s) Gamma(1 - s/alpha) M(1 - s)| for
// 0 < Re s < alpha rho, with phi from Darling's integral (or the C_{k,l}
// product when a certificate exists).
double phi_mellin_bridge(const Parameters& params, cplx s);

}  // namespace stable_extrema
