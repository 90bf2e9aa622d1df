#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "stable_extrema/types.hpp"

namespace stable_extrema::quad {

// Double-exponential quadrature. The trapezoid rule is applied in the
// transformed variable t, halving the step until two levels agree.

enum class Range {
  Interval,  // [a, b], tanh-sinh
  HalfLine,  // [a, inf), exp-sinh
  Line,      // (-inf, inf), sinh-sinh
};

struct Result {
  cplx value{};
  double abs_err = 0.0;
  long evals = 0;
  bool converged = false;
};

struct Options {
  double rel_tol = 1e-14;
  double abs_tol = 0.0;
  int max_level = 11;
  double h0 = 0.5;
};

namespace detail {

struct Node {
  double x;
  double w;
};

inline Node node(Range r, double a, double b, double t) {
  const double u = 0.5 * kPi * std::sinh(t);
  const double du = 0.5 * kPi * std::cosh(t);
  switch (r) {
    case Range::Interval: {
      const double c = 0.5 * (a + b), d = 0.5 * (b - a);
      const double ch = std::cosh(u);
      return {c + d * std::tanh(u), d * du / (ch * ch)};
    }
    case Range::HalfLine: {
      const double e = std::exp(u);
      return {a + e, du * e};
    }
    case Range::Line:
    default:
      return {std::sinh(u), du * std::cosh(u)};
  }
}

inline double t_limit(Range r) {
  // beyond these the node map saturates in double precision
  return r == Range::Interval ? 3.15 : 6.7;
}

}  // namespace detail

template <class F>
Result integrate(F&& f, Range range, double a = 0.0, double b = 0.0, Options opt = {}) {
  using detail::node;
  Result res;
  const double tmax = detail::t_limit(range);
  double h = opt.h0;

  auto term = [&](double t) -> cplx {
    const auto nd = node(range, a, b, t);
    if (nd.w == 0.0) return 0.0;
    if (range == Range::Interval && (nd.x <= a || nd.x >= b)) return 0.0;
    ++res.evals;
    const cplx v = cplx(f(nd.x)) * nd.w;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return cplx(NAN, NAN);
    return v;
  };

  // Level 0 fixes the truncation range [klo h, khi h].
  cplx sum = term(0.0);
  long khi = 0, klo = 0;
  for (int dir : {1, -1}) {
    int small = 0;
    for (long k = 1;; ++k) {
      const double t = dir * k * h;
      if (std::abs(t) > tmax) break;
      const cplx v = term(t);
      if (!std::isfinite(v.real())) break;
      sum += v;
      if (dir > 0) khi = k; else klo = -k;
      if (std::abs(v) <= 1e-18 * std::abs(sum) + 1e-300) {
        if (++small >= 3) break;
      } else {
        small = 0;
      }
    }
  }
  cplx prev = sum * h;
  const double tlo = klo * h, thi = khi * h;

  for (int level = 1; level <= opt.max_level; ++level) {
    h *= 0.5;
    cplx add = 0.0;
    for (double t = tlo + h; t < thi; t += 2.0 * h) {
      const cplx v = term(t);
      if (std::isfinite(v.real())) add += v;
    }
    sum += add;
    const cplx cur = sum * h;
    res.abs_err = std::abs(cur - prev);
    res.value = cur;
    prev = cur;
    if (level >= 2 && res.abs_err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(cur))) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

}  // namespace stable_extrema::quad
