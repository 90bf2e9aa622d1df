#pragma once

#include <vector>

#include "stable_extrema/errors.hpp"
#include "stable_extrema/types.hpp"

namespace stable_extrema {

// Cl2(theta) = sum sin(n theta) / n^2, absolute error below 1e-14.
double clausen(double theta);

// (a; q)_n = prod_{k=0}^{n-1} (1 - a q^k).
cplx qpochhammer(cplx a, cplx q, long n);
// (a; q)_inf; throws ConvergenceError unless |q| < 1.
cplx qpochhammer_inf(cplx a, cplx q);

// Principal-branch-continuous log Gamma (cut along the negative real axis).
// Throws PoleError at nonpositive integers.
cplx log_gamma(cplx z);
// 1/Gamma(x) for real x, exactly 0 at the poles of Gamma.
double rgamma(double x);
// sin(pi x), cos(pi x) with exact zeros at integers / half integers.
double sin_pi(double x);
double cos_pi(double x);
cplx sin_pi(cplx z);

// psi^(k)(z) for k in 0..4; PoleError at nonpositive integers.
cplx polygamma(int k, cplx z);
// psi^(0..kmax)(z) in one pass, any order.
std::vector<cplx> polygamma_all(int kmax, cplx z);

// Constants C(tau), D(tau) of the Barnes product for G(z; tau).
struct BarnesConstants {
  cplx tau;
  cplx C;
  cplx D;
  long m_used = 0;
  double err_est = 0.0;
};

BarnesConstants barnes_constants(cplx tau, double target_err = 1e-14);

// log G(z; tau) for the double gamma function normalized by G(1; tau) = 1.
// The imaginary part is only meaningful modulo 2 pi. Throws PoleOrZeroError
// on the zero lattice -(m tau + n); flags near_singular within
// 1e-8 (1 + |z|) of it.
EvalResult log_barnes_g(cplx z, cplx tau);

// Bernoulli numbers B_2, B_4, ..., B_60.
inline constexpr int kBernoulliCount = 30;
double bernoulli_2k(int k);

}  // namespace stable_extrema
