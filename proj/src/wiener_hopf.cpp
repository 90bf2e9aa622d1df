#include "stable_extrema/wiener_hopf.hpp"

#include <cmath>
#include <numeric>

#include "stable_extrema/quadrature.hpp"
#include "stable_extrema/specfun.hpp"

namespace stable_extrema {

namespace {

constexpr long kMaxLogSeriesTerms = 100000;

void check_arg(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("phi needs finite z");
  if (z.imag() == 0.0 && z.real() < 0.0) throw BranchCutError("phi is cut along the negative real axis");
}

EvalResult unit_result(const char* method) {
  EvalResult r;
  r.value = 1.0;
  r.method = method;
  return r;
}

cplx log1p_c(cplx w) {
  if (std::abs(w) < 1e-4) return w * (1.0 - w * (0.5 - w / 3.0));
  return std::log(1.0 + w);
}

// log(1 + c exp(x)) without overflow for large x
cplx log1p_cexp(cplx c, double x) {
  if (x > 30.0) return x + std::log(c) + log1p_c(std::exp(-x) / c);
  return log1p_c(c * std::exp(x));
}

}  // namespace

std::string to_string(PhiMethod m) {
  switch (m) {
    case PhiMethod::Auto: return "auto";
    case PhiMethod::DoubleGamma: return "double-gamma";
    case PhiMethod::RationalAlpha: return "rational-alpha";
    case PhiMethod::CklProduct: return "ckl-product";
    case PhiMethod::LogSeries: return "log-series";
    case PhiMethod::QProduct: return "q-product";
    case PhiMethod::DarlingQuadrature: return "darling-quadrature";
  }
  return "unknown";
}

PhiMethod phi_method_from_string(const std::string& s) {
  for (PhiMethod m : {PhiMethod::Auto, PhiMethod::DoubleGamma, PhiMethod::RationalAlpha,
                      PhiMethod::CklProduct, PhiMethod::LogSeries, PhiMethod::QProduct,
                      PhiMethod::DarlingQuadrature}) {
    if (to_string(m) == s) return m;
  }
  throw DomainError("unknown phi method '" + s + "'");
}

EvalResult phi_double_gamma_log(double alpha, double rho, cplx w) {
  if (!(alpha > 0.0) || !(rho > 0.0 && rho < 1.0)) {
    throw DomainError("double gamma formula needs alpha > 0 and rho in (0, 1)");
  }
  const cplx L = w / (kPi * kI);
  const double h = alpha / 2.0;
  const cplx tau = alpha;
  const EvalResult g[4] = {
      log_barnes_g(0.5 + h * (1.0 + rho + L), tau),
      log_barnes_g(0.5 + h * (1.0 - rho + L), tau),
      log_barnes_g(0.5 + h * (1.0 + rho - L), tau),
      log_barnes_g(0.5 + h * (1.0 - rho - L), tau),
  };
  // (2 pi sqrt z)^{-alpha rho}
  const cplx log_phi = -alpha * rho * (std::log(2.0 * kPi) + 0.5 * w) + g[0].value - g[1].value +
                       g[2].value - g[3].value;
  EvalResult r;
  r.value = std::exp(log_phi);
  r.method = "double-gamma";
  double err = 0.0;
  for (const auto& e : g) {
    err += e.abs_err;
    r.terms += e.terms;
    r.near_singular = r.near_singular || e.near_singular;
  }
  r.abs_err = std::abs(r.value) * err;
  return r;
}

EvalResult phi_double_gamma(const Parameters& params, cplx z) {
  check_arg(z);
  if (z == 0.0) return unit_result("double-gamma");
  return phi_double_gamma_log(params.alpha(), params.rho(), std::log(z));
}

EvalResult phi_rational_alpha(const RationalAlpha& ra, double rho, double z) {
  const auto params = make_params(ra, rho);
  if (!(z >= 0.0) || !std::isfinite(z)) throw DomainError("rational-alpha formula needs real z >= 0");
  if (z == 0.0) return unit_result("rational-alpha");
  const double alpha = ra.value;
  if (z > 1.0) {
    // phi(z) = z^{-alpha rho} phi(1/z) keeps the powers of z bounded
    auto r = phi_rational_alpha(ra, rho, 1.0 / z);
    r.value *= std::pow(z, -alpha * params.rho());
    r.abs_err *= std::pow(z, -alpha * params.rho());
    return r;
  }
  rho = params.rho();
  const long m = ra.m, n = ra.n;
  const double md = static_cast<double>(m), nd = static_cast<double>(n);
  const double sgn = ((m * n) % 2 == 0) ? 1.0 : -1.0;  // (-1)^{mn}
  const double mrho = md * rho;
  const bool mrho_integer = std::abs(mrho - std::round(mrho)) < 1e-12;

  // 1 + 2 c x + x^2 written to stay accurate near a double root at x = 1
  auto quad_factor = [](double c, double x, double& smallest) {
    const double v = (1.0 - x) * (1.0 - x) + 2.0 * x * (1.0 + c);
    smallest = std::min(smallest, v);
    return std::log(v);
  };
  auto log_phi_at = [&](double zz, double& smallest) {
    double lp = 0.0;
    const double zm = std::pow(zz, md);
    if (!mrho_integer) {
      const double s = sin_pi(mrho);
      const double theta = std::atan2(1.0, cos_pi(mrho) / s + sgn * zm / s);
      lp += (clausen(2.0 * theta) - clausen(2.0 * kPi * mrho) - clausen(2.0 * theta - 2.0 * kPi * mrho)) /
            (2.0 * kPi * md * nd);
    }
    lp -= rho / (2.0 * nd) * quad_factor(sgn * cos_pi(mrho), zm, smallest);
    const double za = std::pow(zz, alpha);
    for (long k = 0; k < n; ++k) {
      const double e = (nd - 2.0 * k - 1.0) / (2.0 * nd);
      if (e != 0.0) lp += e * quad_factor(cos_pi(alpha * (rho + 2.0 * k + 1.0)), za, smallest);
    }
    for (long j = 0; j < m; ++j) {
      const double e = (md - 2.0 * j - 1.0) / (2.0 * md);
      if (e != 0.0) lp += e * quad_factor(cos_pi((alpha * rho + 2.0 * j + 1.0) / alpha), zz, smallest);
    }
    return lp;
  };
  double smallest = INFINITY;
  double log_phi = log_phi_at(z, smallest);
  bool near = false;
  if (smallest < 1e-8) {
    // Individual factors vanish but log phi is smooth; symmetric
    // Richardson in log z around the removable point.
    const double d = 2e-3;
    double dummy = INFINITY;
    auto sym = [&](double t) { return 0.5 * (log_phi_at(z * std::exp(t), dummy) + log_phi_at(z * std::exp(-t), dummy)); };
    log_phi = (4.0 * sym(d) - sym(2.0 * d)) / 3.0;
    near = true;
  }
  EvalResult r;
  r.value = std::exp(log_phi);
  r.method = "rational-alpha";
  r.terms = m + n + 1;
  r.abs_err = std::abs(r.value) * 1e-15 * static_cast<double>(m + n + 4);
  if (near) {
    r.near_singular = true;
    r.abs_err = std::abs(r.value) * 1e-11;
  }
  return r;
}

EvalResult phi_ckl(const Parameters& params, const CklClass& ckl, cplx z) {
  check_arg(z);
  if (!satisfies_ckl(params.alpha(), params.rho(), ckl.k, ckl.l, 1e-8)) {
    throw DomainError("C_{k,l} certificate does not hold for these parameters");
  }
  if (ckl.l == 0) throw DomainError("C_{k,l} certificate needs l != 0");
  if (z == 0.0) return unit_result("ckl-product");
  const double a = params.alpha();
  const long k = ckl.k, l = ckl.l;
  // q^x = exp(2 pi i alpha x), q~^x = exp(-2 pi i x / alpha)
  auto qpow = [&](double x) { return std::exp(2.0 * kPi * kI * a * x); };
  auto qtpow = [&](double x) { return std::exp(-2.0 * kPi * kI * x / a); };
  const cplx q = qpow(1.0), qt = qtpow(1.0);
  auto sign = [](long e) { return (e % 2 == 0) ? 1.0 : -1.0; };
  // (x; p)_n, tracking the smallest factor
  auto poch = [](cplx x, cplx p, long n, double& smallest) {
    cplx prod = 1.0;
    for (long j = 0; j < n; ++j, x *= p) {
      prod *= 1.0 - x;
      smallest = std::min(smallest, std::abs(1.0 - x));
    }
    return prod;
  };
  auto eval = [&](cplx w, double& smallest) {
    const cplx wa = std::pow(w, a);
    if (l > 0) {
      return poch(wa * sign(1 - l) * qpow((1.0 - k) / 2.0), q, k, smallest) /
             poch(w * sign(1 - k) * qtpow((1.0 - l) / 2.0), qt, l, smallest);
    }
    return poch(w * sign(1 + k) * qtpow((1.0 + l) / 2.0), qt, -l, smallest) /
           poch(wa * sign(1 + l) * qpow((1.0 + k) / 2.0), q, -k, smallest);
  };
  EvalResult r;
  r.method = "ckl-product";
  r.terms = std::labs(k) + std::labs(l);
  double smallest = INFINITY;
  r.value = eval(z, smallest);
  if (smallest < 1e-6) {
    // Numerator and denominator share a zero here (the singularity is
    // removable); use the mean value over a small circle around z.
    const int npts = 16;
    const double rad = 1e-2 * std::abs(z) * std::min(1.0, std::abs(std::arg(z) - kPi));
    cplx s = 0.0;
    for (int j = 0; j < npts; ++j) {
      double dummy = INFINITY;
      s += eval(z + rad * std::exp(kI * (2.0 * kPi * (j + 0.5) / npts)), dummy);
    }
    r.value = s / static_cast<double>(npts);
    r.near_singular = true;
    r.terms *= npts;
  }
  r.abs_err = std::abs(r.value) * 4e-16 * static_cast<double>(r.terms + 2) * (1.0 + std::abs(std::log(std::abs(z))));
  if (r.near_singular) r.abs_err *= 100.0;
  return r;
}

IrrationalityReport irrationality_diagnostic(double alpha) {
  IrrationalityReport rep;
  // continued fraction convergents p/q of alpha
  double x = alpha;
  long p0 = 1, q0 = 0;
  long p1 = static_cast<long>(std::floor(x)), q1 = 1;
  double frac = x - std::floor(x);
  rep.worst_error = INFINITY;
  for (int it = 0; it < 64; ++it) {
    const double err = std::abs(alpha - static_cast<double>(p1) / static_cast<double>(q1));
    const double bound = 1e-6 * std::pow(2.0, -static_cast<double>(q1));
    if (err / std::max(bound, 1e-300) < rep.worst_error) {
      rep.worst_error = err;
      rep.worst_p = p1;
      rep.worst_q = q1;
    }
    if (err < 1e-12 || err < bound) {
      rep.passed = false;
      rep.worst_error = err;
      rep.worst_p = p1;
      rep.worst_q = q1;
      return rep;
    }
    if (frac < 1e-15) break;
    x = 1.0 / frac;
    const long a = static_cast<long>(std::floor(x));
    frac = x - std::floor(x);
    const long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > 1000000) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  rep.worst_error = std::abs(alpha - static_cast<double>(rep.worst_p) / static_cast<double>(rep.worst_q));
  return rep;
}

EvalResult phi_log_series(cplx alpha, double rho, cplx z, double guard) {
  check_arg(z);
  if (z == 0.0) return unit_result("log-series");
  if (!(guard > 0.0)) throw DomainError("guard must be positive");
  const double az = std::abs(z);
  if (std::abs(az - 1.0) < 1e-12) throw DomainError("log series does not converge on |z| = 1");
  if (az > 1.0) {
    auto r = phi_log_series(alpha, rho, 1.0 / z, guard);
    const cplx f = std::exp(-alpha * rho * std::log(z));
    r.value *= f;
    r.abs_err *= std::abs(f);
    return r;
  }
  const bool real_alpha = alpha.imag() == 0.0;
  auto sinpi = [&](cplx x) { return real_alpha ? cplx(sin_pi(x.real())) : sin_pi(x); };

  const cplx lz = std::log(z);
  const cplx za = std::exp(alpha * lz);
  const double aza = std::abs(za);
  cplx sum = 0.0;
  cplx zk = 1.0, zak = 1.0;
  double min_sin = 1.0;
  long k = 1;
  double tail = INFINITY;
  for (; k <= kMaxLogSeriesTerms; ++k) {
    zk *= -z;
    zak *= -za;
    const double kd = static_cast<double>(k);
    const cplx s1 = sinpi(kd / alpha);
    const cplx s2 = sinpi(kd * alpha);
    const double m = std::min(std::abs(s1), std::abs(s2));
    if (m < guard) {
      throw SmallDenominatorError("log series: sin denominator below guard at k = " + std::to_string(k));
    }
    min_sin = std::min(min_sin, m);
    const cplx t = sin_pi(kd * rho) * zk / (kd * s1) + sinpi(kd * alpha * rho) * zak / (kd * s2);
    sum += t;
    // geometric tail bound with the smallest denominator seen so far
    const double r1 = az, r2 = aza;
    tail = (std::pow(r1, kd + 1) / (1.0 - r1) + std::pow(r2, kd + 1) / (1.0 - r2)) *
           std::cosh(kPi * std::abs(alpha.imag()) * kd) / (min_sin * (kd + 1.0));
    if (tail < 1e-17 * std::max(1.0, std::abs(sum))) break;
  }
  if (k > kMaxLogSeriesTerms) throw ConvergenceError("log series exceeded 1e5 terms");
  EvalResult r;
  r.value = std::exp(sum);
  r.method = "log-series";
  r.terms = k;
  r.abs_err = std::abs(r.value) * (tail + 1e-16 * std::sqrt(static_cast<double>(k)) / min_sin);
  return r;
}

EvalResult phi_log_series(const Parameters& params, cplx z, double guard) {
  const auto rep = irrationality_diagnostic(params.alpha());
  if (!rep.passed) {
    throw SmallDenominatorError("alpha is too close to " + std::to_string(rep.worst_p) + "/" +
                                std::to_string(rep.worst_q) + " for the log series");
  }
  return phi_log_series(cplx(params.alpha()), params.rho(), z, guard);
}

EvalResult phi_qproduct(cplx alpha, double rho, cplx z) {
  check_arg(z);
  if (!(alpha.imag() > 0.0)) throw DomainError("q-product needs Im alpha > 0");
  const cplx q = std::exp(2.0 * kPi * kI * alpha);
  const cplx qt = std::exp(-2.0 * kPi * kI / alpha);
  if (!(std::abs(q) < 1.0) || !(std::abs(qt) < 1.0)) throw ConvergenceError("q-product needs |q|, |q~| < 1");
  if (!(std::abs(z) < std::min(std::sqrt(std::abs(q)), std::sqrt(std::abs(qt))))) {
    throw DomainError("q-product needs |z| < min(sqrt|q|, sqrt|q~|)");
  }
  if (z == 0.0) return unit_result("q-product");
  const cplx sq = std::exp(kPi * kI * alpha);
  const cplx sqt = std::exp(-kPi * kI / alpha);
  const cplx za = std::exp(alpha * std::log(z));
  const cplx epr = std::exp(kPi * kI * rho);
  const cplx epra = std::exp(kPi * kI * rho * alpha);
  const cplx num = qpochhammer_inf(-z * sqt / epr, qt) * qpochhammer_inf(-za * sq * epra, q);
  const cplx den = qpochhammer_inf(-z * sqt * epr, qt) * qpochhammer_inf(-za * sq / epra, q);
  EvalResult r;
  r.value = num / den;
  r.method = "q-product";
  const double lq = std::log(std::max(std::abs(q), std::abs(qt)));
  r.terms = static_cast<long>(std::ceil(std::log(1e-17) / lq));
  r.abs_err = std::abs(r.value) * 1e-16 * static_cast<double>(r.terms);
  return r;
}

EvalResult phi_darling_quadrature(const Parameters& params, cplx z) {
  check_arg(z);
  if (z == 0.0) return unit_result("darling-quadrature");
  if (!(z.real() > 0.0)) throw DomainError("Darling integral needs Re z > 0");
  const double a = params.alpha();
  const cplx c = std::exp(kI * kPi * params.gamma() / 2.0);
  const cplx cb = std::conj(c);
  const double t0 = std::log(std::abs(z));
  // u = exp(t0 + s), du / u = ds
  auto f = [&](double s) {
    const double t = t0 + s;
    const double u = std::exp(t);
    return log1p_cexp(c, a * t) / (u - kI * z) + log1p_cexp(cb, a * t) / (u + kI * z);
  };
  quad::Options opt;
  opt.rel_tol = 1e-15;
  opt.max_level = 12;
  const auto q = quad::integrate(f, quad::Range::Line, 0.0, 0.0, opt);
  const cplx log_phi = -z / (2.0 * kPi) * q.value;
  // what matters is the absolute error of log phi
  if (!q.converged && std::abs(z) / (2.0 * kPi) * q.abs_err > 1e-10 * (1.0 + std::abs(log_phi))) {
    throw QuadratureError("Darling integral did not converge");
  }
  EvalResult r;
  r.value = std::exp(log_phi);
  r.method = "darling-quadrature";
  r.terms = q.evals;
  r.abs_err = std::abs(r.value) * std::abs(z) / (2.0 * kPi) * q.abs_err;
  return r;
}

EvalResult phi_gamma_product(const Parameters& params, cplx z, long n_factors) {
  check_arg(z);
  if (z == 0.0) return unit_result("gamma-product");
  if (n_factors < 1) throw DomainError("gamma product needs at least one factor");
  const double a = params.alpha(), rho = params.rho();
  const cplx lz = std::log(z);
  const cplx L = lz / (kPi * kI);
  const auto k = barnes_constants(a);
  cplx s = -a * rho / 2.0 * lz - a * rho * (2.0 * k.C + (a + 1.0) * k.D);
  // The omitted factors contribute c1/N + c2/N^2 + ...; Richardson
  // extrapolation over the partial products at N/8, N/4, N/2 and N removes
  // the first three orders.
  const int levels = n_factors >= 8 && n_factors % 8 == 0 ? 4 : 1;
  std::vector<cplx> partial;
  for (long m = 0; m < n_factors; ++m) {
    const double md = static_cast<double>(m);
    if (m > 0) {
      const auto ps = polygamma_all(1, md * a);
      s += a * rho * (2.0 * ps[0] + (a + 1.0) * ps[1]);
    }
    s += log_gamma(0.5 + a / 2.0 * (2.0 * md + 1.0 - rho + L)) +
         log_gamma(0.5 + a / 2.0 * (2.0 * md + 1.0 - rho - L)) -
         log_gamma(0.5 + a / 2.0 * (2.0 * md + 1.0 + rho + L)) -
         log_gamma(0.5 + a / 2.0 * (2.0 * md + 1.0 + rho - L));
    if (levels > 1) {
      const long step = n_factors / 8;
      const long c = (m + 1) / step;
      if ((m + 1) % step == 0 && (c == 1 || c == 2 || c == 4 || c == 8)) partial.push_back(s);
    }
  }
  double tail_err = 0.0;
  if (levels > 1) {
    // partial sums at N/8, N/4, N/2, N: Neville table in h = 1/N
    std::vector<cplx> t = partial;
    for (int j = 1; j < 4; ++j) {
      for (int i = 3; i >= j; --i) {
        const double f = std::pow(2.0, j);
        t[i] = (f * t[i] - t[i - 1]) / (f - 1.0);
      }
    }
    s = t[3];
    tail_err = std::abs(t[3] - t[2]);
  }
  EvalResult r;
  r.value = std::exp(s);
  r.abs_err = std::abs(r.value) * tail_err;
  r.method = "gamma-product";
  r.terms = n_factors;
  return r;
}

EvalResult phi(const Parameters& params, cplx z, PhiMethod method) {
  switch (method) {
    case PhiMethod::DoubleGamma:
      return phi_double_gamma(params, z);
    case PhiMethod::RationalAlpha: {
      if (!params.rational_alpha()) throw DomainError("rational-alpha method needs an exact rational alpha");
      if (z.imag() != 0.0) throw DomainError("rational-alpha method needs real z");
      return phi_rational_alpha(*params.rational_alpha(), params.rho(), z.real());
    }
    case PhiMethod::CklProduct: {
      const auto c = detect_ckl(params);
      if (!c) throw DomainError("parameters are not in any C_{k,l} class");
      return phi_ckl(params, *c, z);
    }
    case PhiMethod::LogSeries:
      return phi_log_series(params, z);
    case PhiMethod::QProduct:
      throw DomainError("q-product needs complex alpha; call phi_qproduct");
    case PhiMethod::DarlingQuadrature:
      return phi_darling_quadrature(params, z);
    case PhiMethod::Auto:
      break;
  }
  check_arg(z);
  if (const auto c = detect_ckl(params)) return phi_ckl(params, *c, z);
  if (params.rational_alpha() && z.imag() == 0.0 && z.real() >= 0.0) {
    return phi_rational_alpha(*params.rational_alpha(), params.rho(), z.real());
  }
  return phi_double_gamma(params, z);
}

EvalResult phi_q(const Parameters& params, cplx z, double q, PhiMethod method) {
  if (!(q > 0.0)) throw DomainError("killing rate q must be positive");
  return phi(params, z * std::pow(q, -1.0 / params.alpha()), method);
}

PoleZeroReport pole_zero_report(const Parameters& params, long count) {
  PoleZeroReport rep;
  const double a = params.alpha(), rho = params.rho();
  const cplx shift = kI * kPi * rho;
  for (long m = 0; m < count; ++m) {
    for (long n = 0; n < count; ++n) {
      const cplx w = lattice_point(m, n, a).w;
      rep.zeros.push_back({m, n, w + shift, 1});
      rep.poles.push_back({m, n, w - shift, 1});
    }
  }
  for (long m = -count; m < 0; ++m) {
    for (long n = -count; n < 0; ++n) {
      const cplx w = lattice_point(m, n, a).w;
      rep.zeros.push_back({m, n, w - shift, 3});
      rep.poles.push_back({m, n, w + shift, 3});
    }
  }
  rep.simple_poles_of_phi = a * rho > 1.0 + 1e-15;
  if (rep.simple_poles_of_phi) {
    rep.simple_pole_locations = {-std::exp(kI * kPi * (rho - 1.0 / a)), -std::exp(-kI * kPi * (rho - 1.0 / a))};
  }
  return rep;
}

}  // namespace stable_extrema
