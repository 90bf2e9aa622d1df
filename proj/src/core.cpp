#include "stable_extrema/core.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "stable_extrema/types.hpp"

namespace stable_extrema {

namespace {

constexpr double kBoundarySlack = 1e-12;

std::string describe(double alpha, double rho) {
  std::ostringstream os;
  os.precision(17);
  os << "(alpha=" << alpha << ", rho=" << rho << ")";
  return os.str();
}

// Returns rho, snapped onto an interval end when within the slack.
double validate(double alpha, double rho) {
  if (!std::isfinite(alpha) || !std::isfinite(rho)) {
    throw AdmissibilityError("non-finite parameters " + describe(alpha, rho));
  }
  if (alpha > 0.0 && alpha < 1.0) {
    if (rho == 0.0 || rho == 1.0) {
      throw SubordinatorError("subordinator case excluded " + describe(alpha, rho));
    }
    if (rho > 0.0 && rho < 1.0) return rho;
  } else if (alpha == 1.0) {
    if (std::abs(rho - 0.5) <= kBoundarySlack) return 0.5;
  } else if (alpha > 1.0 && alpha < 2.0) {
    const double lo = 1.0 - 1.0 / alpha;
    const double hi = 1.0 / alpha;
    if (rho >= lo - kBoundarySlack && rho <= hi + kBoundarySlack) {
      if (rho < lo) return lo;
      if (rho > hi) return hi;
      return rho;
    }
  } else if (alpha == 2.0) {
    if (std::abs(rho - 0.5) <= kBoundarySlack) return 0.5;
  }
  throw AdmissibilityError("parameters outside the admissible set " + describe(alpha, rho));
}

}  // namespace

RationalAlpha RationalAlpha::make(long m, long n) {
  if (m <= 0 || n <= 0) throw DomainError("rational alpha needs positive m and n");
  const long g = std::gcd(m, n);
  RationalAlpha r;
  r.m = m / g;
  r.n = n / g;
  r.value = static_cast<double>(r.m) / static_cast<double>(r.n);
  if (r.value > 2.0) throw DomainError("rational alpha must lie in (0, 2]");
  return r;
}

Parameters make_params(double alpha, double rho) {
  Parameters p;
  p.alpha_ = alpha;
  p.rho_ = validate(alpha, rho);
  p.gamma_ = alpha * (1.0 - 2.0 * p.rho_);
  // gamma = (2/pi) atan(-beta tan(pi alpha/2)); tan vanishes at alpha = 2
  // and is infinite at alpha = 1, where beta = 0 in both admissible cases.
  if (alpha == 1.0 || alpha == 2.0) {
    p.beta_ = 0.0;
  } else {
    p.beta_ = -std::tan(kPi * p.gamma_ / 2.0) / std::tan(kPi * alpha / 2.0);
    if (p.beta_ > 1.0) p.beta_ = 1.0;
    if (p.beta_ < -1.0) p.beta_ = -1.0;
  }
  return p;
}

Parameters make_params(const RationalAlpha& alpha, double rho) {
  Parameters p = make_params(alpha.value, rho);
  p.rational_ = alpha;
  return p;
}

double rho_from_beta(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("alpha must lie in (0, 2]");
  if (beta < -1.0 || beta > 1.0) throw DomainError("beta must lie in [-1, 1]");
  if (alpha == 1.0) {
    if (beta != 0.0) throw DomainError("alpha = 1 requires beta = 0");
    return 0.5;
  }
  if (alpha == 2.0) return 0.5;
  return 0.5 + std::atan(beta * std::tan(kPi * alpha / 2.0)) / (kPi * alpha);
}

bool satisfies_ckl(double alpha, double rho, long k, long l, double tol) {
  return std::abs(rho + static_cast<double>(k) - static_cast<double>(l) / alpha) <= tol;
}

std::optional<CklClass> detect_ckl(const Parameters& params,
                                   const std::optional<RationalAlpha>& alpha_as_rational,
                                   double tol) {
  if (!(tol > 0.0)) throw DomainError("detect_ckl needs tol > 0");
  const double alpha = params.alpha();
  const double rho = params.rho();

  std::optional<CklClass> best;
  long best_size = 0;
  for (long k = -kCklSearchLimit; k <= kCklSearchLimit; ++k) {
    // rho + k = l / alpha pins l; only the nearest integer can match.
    const double l_real = alpha * (rho + static_cast<double>(k));
    const long l = std::lround(l_real);
    if (std::labs(l) > kCklSearchLimit) continue;
    if (!satisfies_ckl(alpha, rho, k, l, tol)) continue;
    // Prefer the smallest k >= 0, else the smallest |k| + |l|.
    const long size = (k >= 0 ? 0 : 1000) + std::labs(k) + std::labs(l);
    if (!best || size < best_size) {
      best = CklClass{k, l, false};
      best_size = size;
    }
  }
  if (!best || !alpha_as_rational) return best;

  // (k + j n, l + j m) is equally valid; pick 0 <= k < n.
  const RationalAlpha& ra = *alpha_as_rational;
  long k = best->k;
  long l = best->l;
  const long j = (k >= 0) ? -(k / ra.n) : (-k + ra.n - 1) / ra.n;
  k += j * ra.n;
  l += j * ra.m;
  return CklClass{k, l, true};
}

std::optional<CklClass> detect_ckl(const Parameters& params, double tol) {
  return detect_ckl(params, params.rational_alpha(), tol);
}

Parameters dual(const Parameters& params) {
  const double rho = 1.0 - params.rho();
  if (params.rational_alpha()) return make_params(*params.rational_alpha(), rho);
  return make_params(params.alpha(), rho);
}

CklClass dual(const CklClass& ckl) { return CklClass{-ckl.k - 1, -ckl.l, ckl.exact}; }

Parameters inverse_alpha(const Parameters& params) {
  const double rho = params.alpha() * params.rho();
  if (params.rational_alpha()) {
    const RationalAlpha& ra = *params.rational_alpha();
    if (ra.n > 2 * ra.m) throw AdmissibilityError("1/alpha exceeds 2");
    return make_params(ra.inverse(), rho);
  }
  return make_params(1.0 / params.alpha(), rho);
}

CklClass inverse_alpha(const CklClass& ckl) { return CklClass{-ckl.l, -ckl.k, ckl.exact}; }

}  // namespace stable_extrema
