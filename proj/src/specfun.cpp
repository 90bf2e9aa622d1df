#include "stable_extrema/specfun.hpp"

#include <array>
#include <cmath>

namespace stable_extrema {

namespace {

constexpr std::array<double, kBernoulliCount> kBernoulli = {
    1.6666666666666666667e-1,  -3.3333333333333333333e-2, 2.3809523809523809524e-2,
    -3.3333333333333333333e-2, 7.5757575757575757576e-2,  -2.5311355311355311355e-1,
    1.1666666666666666667,     -7.0921568627450980392,    5.4971177944862155388e+1,
    -5.2912424242424242424e+2, 6.1921231884057971014e+3,  -8.6580253113553113553e+4,
    1.4255171666666666667e+6,  -2.7298231067816091954e+7, 6.0158087390064236838e+8,
    -1.5116315767092156863e+10, 4.2961464306116666667e+11, -1.3711655205088332772e+13,
    4.8833231897359316667e+14, -1.9296579341940068149e+16, 8.41693047573682615e+17,
    -4.0338071854059455413e+19, 2.1150748638081991606e+21, -1.2086626522296525935e+23,
    7.5008667460769643669e+24, -5.0387781014810689141e+26, 3.6528776484818123335e+28,
    -2.8498769302450882226e+30, 2.3865427499683627645e+32, -2.1399949257225333666e+34};

// zeta(2n) - 1 for n = 1..40
constexpr std::array<double, 40> kZetaMinusOne = {
    6.4493406684822643647e-1,  8.2323233711138191516e-2,  1.7343061984449139715e-2,
    4.0773561979443393787e-3,  9.9457512781808533715e-4,  2.4608655330804829864e-4,
    6.1248135058704829259e-5,  1.5282259408651871733e-5,  3.8172932649998398565e-6,
    9.5396203387279611315e-7,  2.3845050272773299e-7,     5.9608189051259479612e-8,
    1.4901554828365041235e-8,  3.7253340247884570548e-9,  9.3132743241966818287e-10,
    2.328311833676505492e-10,  5.8207720879027008892e-11, 1.4551921891041984236e-11,
    3.6379795473786511902e-12, 9.0949478402638892825e-13, 2.2737368458246525152e-13,
    5.6843419876275856093e-14, 1.421085482803160677e-14,  3.5527136913371136733e-15,
    8.8817842109308159031e-16, 2.220446050798041984e-16,  5.5511151248454812437e-17,
    1.3877787809725232763e-17, 3.4694469521659226247e-18, 8.6736173801199337283e-19,
    2.168404344997219785e-19,  5.4210108624566454109e-20, 1.3552527156101164581e-20,
    3.3881317890207968181e-21, 8.4703294725469983482e-22, 2.1175823681361947318e-22,
    5.293955920339870324e-23,  1.3234889800848990803e-23, 3.3087224502121715864e-24,
    8.2718061255303444774e-25};

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// sin(pi r) for r in [0, 1]
double sin_pi_unit(double r) {
  if (r > 0.5) r = 1.0 - r;
  if (r <= 0.25) return std::sin(kPi * r);
  return std::cos(kPi * (0.5 - r));
}

}  // namespace

double bernoulli_2k(int k) {
  if (k < 1 || k > kBernoulliCount) throw DomainError("bernoulli_2k index out of range");
  return kBernoulli[k - 1];
}

double sin_pi(double x) {
  if (!std::isfinite(x)) return std::nan("");
  double r = std::fmod(x, 2.0);
  if (r < 0.0) r += 2.0;
  if (r >= 1.0) return -sin_pi_unit(r - 1.0);
  return sin_pi_unit(r);
}

double cos_pi(double x) {
  if (!std::isfinite(x)) return std::nan("");
  double r = std::fmod(std::abs(x), 2.0);
  if (r > 1.0) r = 2.0 - r;
  // cos(pi r) = sin(pi (1/2 - r)) on [0, 1]
  if (r <= 0.5) return sin_pi_unit(0.5 - r);
  return -sin_pi_unit(r - 0.5);
}

cplx sin_pi(cplx z) {
  const double y = kPi * z.imag();
  return {sin_pi(z.real()) * std::cosh(y), cos_pi(z.real()) * std::sinh(y)};
}

double clausen(double theta) {
  if (!std::isfinite(theta)) throw DomainError("clausen needs a finite argument");
  const double t = std::remainder(theta, 2.0 * kPi);
  if (t == 0.0) return 0.0;
  const double a = std::abs(t);
  if (a >= kPi) return 0.0;
  const double two_pi = 2.0 * kPi;
  const double x2 = (a / two_pi) * (a / two_pi);
  double sum = 0.0;
  double p = 1.0;
  for (int n = 1; n <= 40; ++n) {
    p *= x2;
    const double term = kZetaMinusOne[n - 1] / (n * (2.0 * n + 1.0)) * p;
    sum += term;
    if (term < 1e-20 * sum) break;
  }
  const double v = 3.0 * a - a * std::log(a * (1.0 - x2)) -
                   two_pi * std::log((two_pi + a) / (two_pi - a)) + a * sum;
  return t < 0.0 ? -v : v;
}

cplx qpochhammer(cplx a, cplx q, long n) {
  if (n < 0) throw DomainError("qpochhammer needs n >= 0");
  cplx prod = 1.0;
  cplx term = a;
  for (long k = 0; k < n; ++k) {
    prod *= 1.0 - term;
    term *= q;
  }
  return prod;
}

cplx qpochhammer_inf(cplx a, cplx q) {
  if (!(std::abs(q) < 1.0)) throw ConvergenceError("(a;q)_inf needs |q| < 1");
  cplx prod = 1.0;
  cplx term = a;
  double log_mag = 0.0;
  for (long k = 0; k < 100000000L; ++k) {
    const cplx factor = 1.0 - term;
    prod *= factor;
    if (prod == 0.0) return prod;
    log_mag += std::log(std::abs(factor));
    if (std::abs(term) < 1e-17 * (1.0 + std::abs(log_mag))) return prod;
    term *= q;
  }
  throw ConvergenceError("(a;q)_inf did not converge; |q| too close to 1");
}

cplx log_gamma(cplx z) {
  if (is_nonpositive_integer(z)) throw PoleError("log_gamma at a nonpositive integer");
  // Shift up into the Stirling region; the sum of principal logs keeps the
  // standard cut along the negative real axis.
  cplx shift = 0.0;
  cplx w = z;
  while (w.real() < 0.5 || std::abs(w) < 10.0) {
    shift += std::log(w);
    w += 1.0;
  }
  const cplx inv = 1.0 / w;
  const cplx inv2 = inv * inv;
  cplx s = (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * kPi);
  cplx p = inv;
  for (int k = 1; k <= kBernoulliCount; ++k) {
    const cplx term = kBernoulli[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * p;
    s += term;
    if (std::abs(term) < 1e-18 * std::abs(s)) break;
    p *= inv2;
  }
  return s - shift;
}

double rgamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) return 0.0;
  if (x >= 0.5) {
    if (x > 171.0) return std::exp(-std::lgamma(x));
    return 1.0 / std::tgamma(x);
  }
  // 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
  const double y = 1.0 - x;
  if (y > 171.0) return sin_pi(x) * std::exp(std::lgamma(y)) / kPi;
  return sin_pi(x) * std::tgamma(y) / kPi;
}

std::vector<cplx> polygamma_all(int kmax, cplx z) {
  if (kmax < 0) throw DomainError("polygamma order must be nonnegative");
  if (is_nonpositive_integer(z)) throw PoleError("polygamma at a nonpositive integer");
  std::vector<cplx> out(kmax + 1, 0.0);

  // psi^(n)(z) = psi^(n)(z + N) - (-1)^n n! sum_{j<N} (z + j)^{-(n+1)}
  const double radius = 10.0 + kmax;
  std::vector<cplx> recur(kmax + 1, 0.0);
  cplx w = z;
  while (w.real() < 1.0 || std::abs(w) < radius) {
    const cplx inv = 1.0 / w;
    cplx p = inv;
    for (int n = 0; n <= kmax; ++n) {
      recur[n] += p;
      p *= inv;
    }
    w += 1.0;
  }

  const cplx inv = 1.0 / w;
  const cplx inv2 = inv * inv;
  // n = 0
  {
    cplx s = std::log(w) - 0.5 * inv;
    cplx p = inv2;
    for (int k = 1; k <= kBernoulliCount; ++k) {
      const cplx term = kBernoulli[k - 1] / (2.0 * k) * p;
      s -= term;
      if (std::abs(term) < 1e-18 * std::abs(s)) break;
      p *= inv2;
    }
    out[0] = s - recur[0];
  }
  // n >= 1: (-1)^(n+1) [(n-1)!/w^n + n!/(2 w^(n+1)) + sum B_2k (2k+n-1)!/((2k)! w^(2k+n))]
  double fact_nm1 = 1.0;  // (n-1)!
  cplx wpow = inv;        // w^-n
  for (int n = 1; n <= kmax; ++n) {
    if (n > 1) {
      fact_nm1 *= (n - 1);
      wpow *= inv;
    }
    const double fact_n = fact_nm1 * n;
    cplx s = fact_nm1 * wpow + fact_n * 0.5 * wpow * inv;
    // ratio (2k+n-1)!/(2k)! built incrementally
    double ratio = fact_nm1;  // k = 0 value (n-1)!/0!
    cplx p = wpow;
    double last = 0.0;
    for (int k = 1; k <= kBernoulliCount; ++k) {
      ratio *= static_cast<double>((2 * k + n - 2) * (2 * k + n - 1)) /
               static_cast<double>((2 * k - 1) * (2 * k));
      p *= inv2;
      const cplx term = kBernoulli[k - 1] * ratio * p;
      const double mag = std::abs(term);
      if (k > 2 && mag > last) break;  // asymptotic terms started growing
      s += term;
      last = mag;
      if (mag < 1e-18 * std::abs(s)) break;
    }
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;  // (-1)^(n+1)
    const double rsign = (n % 2 == 0) ? 1.0 : -1.0;  // (-1)^n
    out[n] = sign * s - rsign * fact_n * recur[n];
  }
  return out;
}

cplx polygamma(int k, cplx z) {
  if (k < 0 || k > 4) throw DomainError("polygamma order must lie in 0..4");
  return polygamma_all(k, z)[k];
}

}  // namespace stable_extrema
