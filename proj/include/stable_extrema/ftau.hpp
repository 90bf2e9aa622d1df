#pragma once

#include "stable_extrema/errors.hpp"
#include "stable_extrema/types.hpp"

namespace stable_extrema {

// F(z; tau) = int_R dx / ((1 + exp(z + i tau x)) (1 + exp(x))), Im tau > 0.
// It is analytic for z in the strip S(tau) = {|Re(z conj(tau))| < pi Im tau}.

struct StripCheck {
  cplx tau;
  bool in_S = false;
  bool in_P = false;  // S(tau) intersected with |Im z| < pi Im tau
};

StripCheck strip_check(cplx z, cplx tau);

// w_{m,n} = pi i ((2m + 1) / alpha + 2n + 1)
struct LatticePoint {
  long m = 0;
  long n = 0;
  cplx w;
};

LatticePoint lattice_point(long m, long n, cplx alpha);

// Direct double-exponential quadrature of the defining integral.
EvalResult f_quadrature(cplx z, cplx tau);

enum class FSeriesForm {
  Reciprocal,  // sum of 1/(1 + exp(.)) terms, needs Re tau != 0
  Hyperbolic,  // sum of exp(.)/sinh(.) terms, needs also Re z > 0
};

EvalResult f_series(cplx z, cplx tau, FSeriesForm form = FSeriesForm::Reciprocal);

// Closed form for tau = i m / n with coprime m, n and |Im z| < pi.
EvalResult f_rational(cplx z, long m, long n);

// F(z; tau) = (1/2) int_{R + i eps} exp(i z x / pi) / (sinh(x) sinh(i tau x)) dx
// for z in the parallelogram P(tau). eps <= 0 selects half the largest
// admissible shift.
EvalResult f_contour(cplx z, cplx tau, double eps = 0.0);

// z / (exp(z) - 1), with the removable point handled.
cplx z_over_expm1(cplx z);

}  // namespace stable_extrema
