#include "stable_extrema/ftau.hpp"

#include <cmath>
#include <numeric>

#include "stable_extrema/quadrature.hpp"
#include "stable_extrema/specfun.hpp"

namespace stable_extrema {

namespace {

constexpr double kPoleGuard = 1e-8;
constexpr long kMaxSeriesTerms = 100000;

// 1 / (1 + exp(w)) without overflow
cplx inv1pexp(cplx w) {
  if (w.real() > 0.0) {
    const cplx e = std::exp(-w);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(w));
}

// exp(a) / sinh(b) without overflow
cplx exp_over_sinh(cplx a, cplx b) {
  if (b.real() >= 0.0) return 2.0 * std::exp(a - b) / (1.0 - std::exp(-2.0 * b));
  return -2.0 * std::exp(a + b) / (1.0 - std::exp(2.0 * b));
}

// a branch of log sinh(w), valid for exponentiation
cplx log_sinh(cplx w) {
  if (std::abs(w) < 1.0) return std::log(std::sinh(w));
  if (w.real() >= 0.0) return w - std::log(2.0) + std::log(1.0 - std::exp(-2.0 * w));
  return -w - std::log(2.0) + std::log(1.0 - std::exp(2.0 * w)) + cplx(0.0, kPi);
}

void require_upper(cplx tau) {
  if (!(tau.imag() > 0.0)) throw DomainError("F(z; tau) needs Im tau > 0");
}

// Distance of z to the boundary lines of S(tau), negative outside.
double strip_margin(cplx z, cplx tau) {
  return (kPi * tau.imag() - std::abs((z * std::conj(tau)).real())) / std::abs(tau);
}

void require_strip(cplx z, cplx tau) {
  const double d = strip_margin(z, tau);
  if (d <= 0.0) throw DomainError("z lies outside the strip S(tau)");
  if (d < kPoleGuard) throw PoleError("z within 1e-8 of a pole line of the F(z; tau) integrand");
}

}  // namespace

StripCheck strip_check(cplx z, cplx tau) {
  require_upper(tau);
  StripCheck c;
  c.tau = tau;
  c.in_S = strip_margin(z, tau) > 0.0;
  c.in_P = c.in_S && std::abs(z.imag()) < kPi * tau.imag();
  return c;
}

LatticePoint lattice_point(long m, long n, cplx alpha) {
  return {m, n, kI * kPi * ((2.0 * m + 1.0) / alpha + (2.0 * n + 1.0))};
}

cplx z_over_expm1(cplx z) {
  if (std::abs(z) < 1.0) {
    // sum B_k z^k / k!
    cplx s = 1.0 - 0.5 * z;
    const cplx z2 = z * z;
    cplx p = 1.0;
    double fact = 1.0;
    for (int k = 1; k <= 14; ++k) {
      p *= z2;
      fact *= (2.0 * k - 1.0) * (2.0 * k);
      s += bernoulli_2k(k) / fact * p;
    }
    return s;
  }
  if (z.real() > 0.0) {
    const cplx e = std::exp(-z);
    return z * e / (1.0 - e);
  }
  return z / (std::exp(z) - 1.0);
}

EvalResult f_quadrature(cplx z, cplx tau) {
  require_upper(tau);
  require_strip(z, tau);
  auto g = [&](double x) { return inv1pexp(z + kI * tau * x) * inv1pexp(cplx(x)); };
  const auto q = quad::integrate(g, quad::Range::Line);
  if (!q.converged && q.abs_err > 1e-8 * (1.0 + std::abs(q.value))) {
    throw QuadratureError("F(z; tau) quadrature did not converge");
  }
  EvalResult r;
  r.value = q.value;
  r.abs_err = q.abs_err;
  r.terms = q.evals;
  r.method = "quadrature";
  return r;
}

EvalResult f_series(cplx z, cplx tau, FSeriesForm form) {
  require_upper(tau);
  if (tau.real() == 0.0) throw DomainError("series forms of F(z; tau) need Re tau != 0");
  require_strip(z, tau);
  EvalResult r;
  cplx sum = 0.0;
  int small = 0;
  long k = 0;
  if (form == FSeriesForm::Reciprocal) {
    r.method = "series-reciprocal";
    const double delta = tau.real() > 0.0 ? 1.0 : -1.0;
    const cplx izt = kI * z / tau;
    for (k = 0; k < kMaxSeriesTerms; ++k) {
      const double kh = k + 0.5;
      const cplx term = delta * (2.0 * kPi * kI * inv1pexp(z + 2.0 * kPi * delta * kh * tau) +
                                 2.0 * kPi / tau * inv1pexp(izt + 2.0 * kPi * delta * kh / tau));
      sum += term;
      r.abs_err = std::abs(term);
      if (std::abs(term) < 1e-16 * std::abs(sum)) {
        if (++small >= 2) break;
      } else {
        small = 0;
      }
    }
  } else {
    if (!(z.real() > 0.0)) throw DomainError("hyperbolic series of F(z; tau) needs Re z > 0");
    r.method = "series-hyperbolic";
    for (k = 1; k < kMaxSeriesTerms; ++k) {
      const double kd = static_cast<double>(k);
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      const cplx term = -kPi * kI * sign *
                        (exp_over_sinh(-kd * z, kPi * kd * tau) -
                         kI / tau * exp_over_sinh(-kI * kd * z / tau, kPi * kd / tau));
      sum += term;
      r.abs_err = std::abs(term);
      if (std::abs(term) < 1e-16 * std::abs(sum)) {
        if (++small >= 2) break;
      } else {
        small = 0;
      }
    }
  }
  if (k >= kMaxSeriesTerms) throw ConvergenceError("F(z; tau) series exceeded 1e5 terms");
  r.value = sum;
  r.terms = k + 1;
  r.abs_err += 1e-16 * std::abs(sum) * std::sqrt(static_cast<double>(k + 1));
  return r;
}

EvalResult f_rational(cplx z, long m, long n) {
  if (m < 1 || n < 1 || std::gcd(m, n) != 1) {
    throw DomainError("f_rational needs coprime m, n >= 1");
  }
  if (!(std::abs(z.imag()) < kPi)) throw DomainError("f_rational needs |Im z| < pi");
  const double md = static_cast<double>(m), nd = static_cast<double>(n);
  EvalResult r;
  r.terms = m + n + 1;

  // Individual terms of the closed form can have cancelling singularities
  // inside the strip; near them use the double sum of F(w; i) = w/(e^w - 1).
  bool near = false;
  const bool odd = (m * n) % 2 == 1;
  if (!odd && std::abs(std::exp(nd * z) + 1.0) < 1e-3) near = true;
  for (long k = 0; k < n && !near; ++k) {
    if (std::abs(std::exp(z + kI * kPi * md * (2.0 * k + 1.0) / nd) + 1.0) < 1e-3) near = true;
  }
  for (long j = 0; j < m && !near; ++j) {
    if (std::abs(std::exp(z * nd / md + kI * kPi * nd * (2.0 * j + 1.0) / md) + 1.0) < 1e-3) near = true;
  }

  if (near) {
    cplx s = 0.0;
    for (long k = 0; k < n; ++k) {
      for (long j = 0; j < m; ++j) {
        s += z_over_expm1(z / md + kI * kPi * (nd - 2.0 * k - 1.0) / nd +
                          kI * kPi * (md - 2.0 * j - 1.0) / md);
      }
    }
    r.value = s / md;
    r.terms = m * n;
    r.method = "rational-double-sum";
  } else {
    cplx s = odd ? z_over_expm1(nd * z) / md : -(nd / md) * z * inv1pexp(nd * z);
    for (long k = 0; k < n; ++k) {
      s += kI * kPi / nd * (nd - 2.0 * k - 1.0) * inv1pexp(z + kI * kPi * md / nd * (2.0 * k + 1.0));
    }
    for (long j = 0; j < m; ++j) {
      s += nd / md * kI * kPi / md * (md - 2.0 * j - 1.0) *
           inv1pexp(z * nd / md + kI * kPi * nd / md * (2.0 * j + 1.0));
    }
    r.value = s;
    r.method = "rational-closed-form";
  }
  r.abs_err = 1e-15 * (1.0 + std::abs(z)) * static_cast<double>(r.terms);
  return r;
}

EvalResult f_contour(cplx z, cplx tau, double eps) {
  require_upper(tau);
  const auto c = strip_check(z, tau);
  if (!c.in_P) throw DomainError("f_contour needs z in the parallelogram P(tau)");
  require_strip(z, tau);
  const double eps_max = std::min(kPi / 2.0, (-kPi / (2.0 * tau)).imag());
  if (eps <= 0.0) eps = 0.5 * eps_max;
  if (eps >= eps_max) throw DomainError("contour shift outside the admissible range");
  auto g = [&](double t) {
    const cplx x(t, eps);
    return 0.5 * std::exp(kI * z * x / kPi - log_sinh(x) - log_sinh(kI * tau * x));
  };
  const auto q = quad::integrate(g, quad::Range::Line);
  if (!q.converged && q.abs_err > 1e-8 * (1.0 + std::abs(q.value))) {
    throw QuadratureError("contour quadrature for F(z; tau) did not converge");
  }
  EvalResult r;
  r.value = q.value;
  r.abs_err = q.abs_err;
  r.terms = q.evals;
  r.method = "contour";
  return r;
}

}  // namespace stable_extrema
