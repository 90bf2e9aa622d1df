#pragma once

#include <string>
#include <vector>

#include "stable_extrema/core.hpp"
#include "stable_extrema/types.hpp"

namespace stable_extrema {

// Density p(x) and distribution function of S_1 = sup_{t <= 1} X_t.

enum class SeriesRegion { SmallX, LargeX };
enum class SeriesKind { Convergent, Asymptotic };

struct SeriesPlan {
  SeriesRegion region = SeriesRegion::SmallX;
  SeriesKind kind = SeriesKind::Asymptotic;
  long terms = 0;
  double cap = 0.0;  // last grade m + alpha n included (asymptotic) or reached (convergent)
  double err_est = 0.0;
  long precision_bits = 53;
};

// Dispatch: C_{k,l} series when a certificate exists, an asymptotic series
// when its error estimate is below tol, otherwise Mellin inversion.
// AccuracyError when nothing reaches tol. x = 0 is accepted only when
// alpha rho = 1 (finite limit p(0+)).
EvalResult pdf(const Parameters& params, double x, double tol = 1e-8);

// Power series at 0 from the poles of M(s) left of Re s = 1 (generic
// coefficients a_{m,n}). cap <= 0 selects optimal truncation (stop at the
// smallest term, error 3x that term); cap > 0 sums grades m + alpha n < cap
// and reports 3x the first omitted term.
EvalResult pdf_asymptotic_small_x(const Parameters& params, double x, double cap = 0.0,
                                  SeriesPlan* plan = nullptr);
// Expansion at infinity from the poles right of Re s = 1 (coefficients b).
// Refused (DomainError) for alpha = 2 where every algebraic term vanishes.
EvalResult pdf_asymptotic_large_x(const Parameters& params, double x, double cap = 0.0,
                                  SeriesPlan* plan = nullptr);

// Convergent series for C_{k,l}: poles left of Re s = 1 when alpha > 1,
// right of it when alpha < 1. Evaluated in multiple precision with the
// working precision set by the largest term. Falls back to the C_{k,l}
// asymptotic expansion on the other side when the convergent sum would need
// more than 1e5 terms or 2^16 bits and that expansion is accurate to 1e-10.
EvalResult pdf_ckl_series(const Parameters& params, const CklClass& ckl, double x,
                          SeriesPlan* plan = nullptr);

// (1/2 pi) int M(1 + it) x^{-1-it} dt by the trapezoid rule with step
// halving; truncation height from the decay rate of M with a 1.5 safety
// factor. tol is absolute. M values are cached per parameter set.
EvalResult pdf_mellin_inversion(const Parameters& params, double x, double tol = 1e-10);

// First derivative by term-wise differentiation of the active series, or
// of the inversion integral.
EvalResult pdf_derivative(const Parameters& params, double x, double tol = 1e-8);

// P(S_1 <= x): term-wise integration of the C_{k,l} series, otherwise
// inversion of M(s) / (1 - s) along Re s = 1 - alpha rho / 2.
EvalResult cdf(const Parameters& params, double x, double tol = 1e-8);
EvalResult cdf_ckl_series(const Parameters& params, const CklClass& ckl, double x);
EvalResult cdf_mellin_inversion(const Parameters& params, double x, double tol = 1e-10);

// Truncated moment int_0^x y^q p(y) dy from the convergent C_{k,l} series.
EvalResult partial_moment_ckl(const Parameters& params, const CklClass& ckl, double x, double q);

// S_t has the law of t^{1/alpha} S_1.
EvalResult pdf_at_time(const Parameters& params, double t, double x, double tol = 1e-8);
EvalResult cdf_at_time(const Parameters& params, double t, double x, double tol = 1e-8);

struct DensityProfile {
  std::vector<double> x;
  std::vector<double> p;
  std::vector<double> err;
  std::vector<std::string> method;
};

// pdf over a grid, parallel over points (STABLE_EXTREMA_THREADS caps the
// worker count).
DensityProfile density_profile(const Parameters& params, const std::vector<double>& xs, double tol = 1e-8);

// Opt-in diagnostic for generic alpha: partial sums of the series that is
// expected to converge (small x for alpha in (1,2), large x for alpha < 1)
// at growing caps, against Mellin inversion. Not used for values.
struct ConjectureProbe {
  std::vector<double> caps;
  std::vector<double> partial_sums;
  std::vector<double> last_terms;
  double reference = 0.0;
  std::string verdict;  // "converging", "diverging" or "inconclusive"
};
ConjectureProbe conjecture_probe(const Parameters& params, double x, double max_cap = 40.0);

}  // namespace stable_extrema
