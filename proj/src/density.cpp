#include "stable_extrema/density.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "pole_series.hpp"
#include "stable_extrema/mellin.hpp"
#include "stable_extrema/parallel.hpp"

namespace stable_extrema {

using detail::PoleSide;
using detail::SeriesSum;
using detail::TermWeight;

namespace {

constexpr double kMaxGrade = 80.0;
constexpr int kMaxLevels = 12;

EvalResult to_result(const SeriesSum& s, const char* method) {
  EvalResult r;
  r.value = s.value;
  r.abs_err = s.abs_err;
  r.terms = s.terms;
  r.method = method;
  return r;
}

void fill_plan(SeriesPlan* plan, const SeriesSum& s, PoleSide side, SeriesKind kind) {
  if (!plan) return;
  plan->region = side == PoleSide::Left ? SeriesRegion::SmallX : SeriesRegion::LargeX;
  plan->kind = kind;
  plan->terms = s.terms;
  plan->cap = s.grade;
  plan->err_est = s.abs_err;
  plan->precision_bits = s.bits;
}

void require_positive(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("x must be positive and finite");
}

PoleSide convergent_side(const Parameters& p) {
  if (p.alpha() == 1.0) throw DomainError("no C_{k,l} series at alpha = 1");
  return p.alpha() > 1.0 ? PoleSide::Left : PoleSide::Right;
}

PoleSide other(PoleSide s) { return s == PoleSide::Left ? PoleSide::Right : PoleSide::Left; }

double grade_limit(const Parameters& p, double cap) {
  return std::max(cap + 2.0, std::min(kMaxGrade, std::sqrt(6000.0 * std::min(1.0, p.alpha()))));
}

// Convergent C_{k,l} sum, or the expansion on the other side when the
// convergent one is out of reach and the expansion is good to 1e-10.
SeriesSum ckl_sum(const Parameters& p, const CklClass& ckl, double x, TermWeight w, PoleSide* used) {
  const PoleSide side = convergent_side(p);
  try {
    *used = side;
    return detail::ckl_convergent_sum(p, ckl, side, x, w);
  } catch (const ConvergenceError&) {
    const auto poles = detail::ckl_poles(p, ckl, other(side), kMaxGrade);
    if (poles.empty()) throw;
    const auto s = detail::asymptotic_sum(poles, other(side), x, w, 0.0);
    if (s.abs_err > 1e-10) throw;
    *used = other(side);
    return s;
  }
}

enum class Kernel { Density, Derivative, Cdf };

// (1/pi) Re int_0^inf f(t) dt with f(t) = M(c + it) k(c + it), trapezoid
// rule with step halving and a tail estimate from the decay rate of M.
EvalResult invert(const Parameters& p, double x, double tol, Kernel kind) {
  require_positive(x);
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const double c = kind == Kernel::Cdf ? 1.0 - 0.5 * p.alpha() * p.rho() : 1.0;
  const double rate = mellin_decay_rate(p);
  const double lx = std::log(x);
  long evals = 0;
  auto f = [&](double t) -> cplx {
    const cplx s(c, t);
    ++evals;
    const cplx m = mellin(p, s).value;
    const cplx g = std::exp(-s * lx);
    switch (kind) {
      case Kernel::Density: return m * g;
      case Kernel::Derivative: return -m * s * g / x;
      case Kernel::Cdf: return m * g * x / (1.0 - s);
    }
    return 0.0;
  };

  double h = std::min(0.5, 2.0 / (1.0 + std::abs(lx)));
  std::vector<cplx> vals;  // f(j h) at the current level
  double prev = NAN, tail = 0.0, err = INFINITY, value = NAN;
  for (int level = 0; level <= kMaxLevels; ++level) {
    std::vector<cplx> next;
    int small = 0;
    const double geo = 1.0 - std::exp(-rate * h);
    for (long j = 0;; ++j) {
      cplx v;
      if (level > 0 && j % 2 == 0 && static_cast<std::size_t>(j / 2) < vals.size()) v = vals[j / 2];
      else v = f(j * h);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw AccuracyError("non-finite Mellin value on the inversion contour");
      next.push_back(v);
      const double t_est = 1.5 * h * std::abs(v) / (kPi * geo);
      if (j * h >= 2.0 && t_est < 0.1 * tol) {
        if (++small >= 3) { tail = t_est; break; }
      } else {
        small = 0;
      }
      if (j * h > 2000.0) throw AccuracyError("inversion contour did not decay");
    }
    vals = std::move(next);
    double sum = 0.5 * vals[0].real();
    for (std::size_t j = 1; j < vals.size(); ++j) sum += vals[j].real();
    value = h * sum / kPi;
    if (level > 0) {
      err = std::abs(value - prev) + tail;
      if (level >= 2 && err < tol) break;
    }
    prev = value;
    h *= 0.5;
  }
  EvalResult r;
  r.value = value;
  r.abs_err = err;
  r.terms = evals;
  r.method = kind == Kernel::Cdf ? "cdf_mellin_inversion" : "mellin_inversion";
  return r;
}

EvalResult at_zero(const Parameters& p) {
  if (std::abs(p.alpha() * p.rho() - 1.0) > 1e-12) throw DomainError("p(0+) is infinite unless alpha rho = 1");
  EvalResult r;
  r.value = residue_a(p, 0, 0);
  r.abs_err = 1e-16 * std::abs(r.value.real());
  r.method = "limit_at_zero";
  return r;
}

}  // namespace

EvalResult pdf_asymptotic_small_x(const Parameters& params, double x, double cap, SeriesPlan* plan) {
  require_positive(x);
  const auto poles = detail::generic_poles(params, PoleSide::Left, grade_limit(params, cap));
  const auto s = detail::asymptotic_sum(poles, PoleSide::Left, x, {}, cap);
  fill_plan(plan, s, PoleSide::Left, SeriesKind::Asymptotic);
  return to_result(s, "asymptotic_small_x");
}

EvalResult pdf_asymptotic_large_x(const Parameters& params, double x, double cap, SeriesPlan* plan) {
  require_positive(x);
  if (params.alpha() == 2.0) throw DomainError("no algebraic tail expansion for alpha = 2");
  const auto poles = detail::generic_poles(params, PoleSide::Right, grade_limit(params, cap));
  const auto s = detail::asymptotic_sum(poles, PoleSide::Right, x, {}, cap);
  fill_plan(plan, s, PoleSide::Right, SeriesKind::Asymptotic);
  return to_result(s, "asymptotic_large_x");
}

EvalResult pdf_ckl_series(const Parameters& params, const CklClass& ckl, double x, SeriesPlan* plan) {
  require_positive(x);
  PoleSide used;
  const auto s = ckl_sum(params, ckl, x, {}, &used);
  const bool conv = used == convergent_side(params);
  fill_plan(plan, s, used, conv ? SeriesKind::Convergent : SeriesKind::Asymptotic);
  return to_result(s, conv ? "ckl_series" : "ckl_asymptotic");
}

EvalResult pdf_mellin_inversion(const Parameters& params, double x, double tol) {
  return invert(params, x, tol, Kernel::Density);
}

namespace {

EvalResult pdf_dispatch(const Parameters& params, double x, double tol) {
  if (const auto ckl = detect_ckl(params)) {
    try {
      auto r = pdf_ckl_series(params, *ckl, x);
      if (r.abs_err <= tol) return r;
    } catch (const ConvergenceError&) {
    } catch (const SmallDenominatorError&) {
    }
  }
  for (auto fn : {&pdf_asymptotic_small_x, &pdf_asymptotic_large_x}) {
    try {
      auto r = fn(params, x, 0.0, nullptr);
      if (r.abs_err <= std::min(tol, 1e-8)) return r;
    } catch (const SmallDenominatorError&) {
    } catch (const DomainError&) {
    } catch (const ConvergenceError&) {
    }
  }
  auto r = pdf_mellin_inversion(params, x, 0.1 * tol);
  if (r.abs_err > tol) throw AccuracyError("no density method reached the requested tolerance");
  return r;
}

}  // namespace

EvalResult pdf(const Parameters& params, double x, double tol) {
  if (x == 0.0) return at_zero(params);
  require_positive(x);
  auto r = pdf_dispatch(params, x, tol);
  // rounding far in the tails can leave tiny negative values
  if (r.value.real() < 0.0) {
    r.abs_err += -r.value.real();
    r.value = 0.0;
  }
  return r;
}

EvalResult pdf_derivative(const Parameters& params, double x, double tol) {
  require_positive(x);
  const TermWeight w{TermWeight::Derivative, 0.0};
  if (const auto ckl = detect_ckl(params)) {
    try {
      PoleSide used;
      const auto s = ckl_sum(params, *ckl, x, w, &used);
      if (s.abs_err <= tol) return to_result(s, "ckl_series");
    } catch (const ConvergenceError&) {
    } catch (const SmallDenominatorError&) {
    }
  }
  for (PoleSide side : {PoleSide::Left, PoleSide::Right}) {
    try {
      if (side == PoleSide::Right && params.alpha() == 2.0) continue;
      const auto poles = detail::generic_poles(params, side, grade_limit(params, 0.0));
      const auto s = detail::asymptotic_sum(poles, side, x, w, 0.0);
      if (s.abs_err <= std::min(tol, 1e-8)) return to_result(s, side == PoleSide::Left ? "asymptotic_small_x" : "asymptotic_large_x");
    } catch (const SmallDenominatorError&) {
    } catch (const ConvergenceError&) {
    } catch (const DomainError&) {
    }
  }
  auto r = invert(params, x, 0.1 * tol, Kernel::Derivative);
  if (r.abs_err > tol) throw AccuracyError("no derivative method reached the requested tolerance");
  return r;
}

EvalResult cdf_ckl_series(const Parameters& params, const CklClass& ckl, double x) {
  require_positive(x);
  PoleSide used;
  const auto s = ckl_sum(params, ckl, x, {TermWeight::Moment, 0.0}, &used);
  auto r = to_result(s, used == convergent_side(params) ? "ckl_series" : "ckl_asymptotic");
  if (used == PoleSide::Right) r.value = 1.0 - s.value;
  return r;
}

EvalResult cdf_mellin_inversion(const Parameters& params, double x, double tol) {
  return invert(params, x, tol, Kernel::Cdf);
}

EvalResult cdf(const Parameters& params, double x, double tol) {
  if (x < 0.0) throw DomainError("x must be nonnegative");
  if (x == 0.0) return EvalResult{0.0, 0.0, 0, "limit_at_zero", false};
  EvalResult r;
  bool done = false;
  if (const auto ckl = detect_ckl(params)) {
    try {
      r = cdf_ckl_series(params, *ckl, x);
      done = r.abs_err <= tol;
    } catch (const ConvergenceError&) {
    } catch (const SmallDenominatorError&) {
    }
  }
  if (!done) {
    r = cdf_mellin_inversion(params, x, 0.1 * tol);
    if (r.abs_err > tol) throw AccuracyError("no distribution-function method reached the requested tolerance");
  }
  const double v = r.value.real(), clamped = std::clamp(v, 0.0, 1.0);
  r.abs_err += std::abs(v - clamped);
  r.value = clamped;
  return r;
}

EvalResult partial_moment_ckl(const Parameters& params, const CklClass& ckl, double x, double q) {
  require_positive(x);
  const PoleSide side = convergent_side(params);
  if (side == PoleSide::Right && !(q < params.alpha())) throw DomainError("moment of order q needs q < alpha");
  if (q <= params.alpha() * params.rho() - 1.0) throw DomainError("moment diverges at 0");
  const auto s = detail::ckl_convergent_sum(params, ckl, side, x, {TermWeight::Moment, q});
  auto r = to_result(s, "ckl_series");
  if (side == PoleSide::Right) {
    // int_0^x = E[S^q] - int_x^inf
    const auto m = mellin(params, q + 1.0);
    r.value = m.value.real() - s.value;
    r.abs_err += m.abs_err;
  }
  return r;
}

EvalResult pdf_at_time(const Parameters& params, double t, double x, double tol) {
  if (!(t > 0.0)) throw DomainError("t must be positive");
  const double sc = std::pow(t, -1.0 / params.alpha());
  auto r = pdf(params, x * sc, tol / sc);
  r.value *= sc;
  r.abs_err *= sc;
  return r;
}

EvalResult cdf_at_time(const Parameters& params, double t, double x, double tol) {
  if (!(t > 0.0)) throw DomainError("t must be positive");
  return cdf(params, x * std::pow(t, -1.0 / params.alpha()), tol);
}

DensityProfile density_profile(const Parameters& params, const std::vector<double>& xs, double tol) {
  DensityProfile prof;
  prof.x = xs;
  prof.p.assign(xs.size(), 0.0);
  prof.err.assign(xs.size(), 0.0);
  prof.method.assign(xs.size(), "");
  parallel_for(xs.size(), [&](std::size_t i) {
    const auto r = pdf(params, xs[i], tol);
    const double v = r.value.real();
    prof.p[i] = std::max(0.0, v);
    prof.err[i] = r.abs_err + std::max(0.0, -v);
    prof.method[i] = r.method;
  });
  return prof;
}

ConjectureProbe conjecture_probe(const Parameters& params, double x, double max_cap) {
  require_positive(x);
  ConjectureProbe out;
  const bool small = params.alpha() > 1.0;
  out.reference = pdf_mellin_inversion(params, x, 1e-12).value.real();
  for (double cap = 2.0; cap <= max_cap + 1e-9; cap += 2.0) {
    const auto r = small ? pdf_asymptotic_small_x(params, x, cap) : pdf_asymptotic_large_x(params, x, cap);
    out.caps.push_back(cap);
    out.partial_sums.push_back(r.value.real());
    out.last_terms.push_back(r.abs_err / 3.0);
  }
  const std::size_t n = out.caps.size();
  out.verdict = "inconclusive";
  if (n >= 3) {
    const double e_last = std::abs(out.partial_sums[n - 1] - out.reference);
    const bool growing = out.last_terms[n - 1] > out.last_terms[n - 2] && out.last_terms[n - 2] > out.last_terms[n - 3];
    if (growing && out.last_terms[n - 1] > 1e-6) out.verdict = "diverging";
    else if (e_last < 1e-8 && out.last_terms[n - 1] < 1e-10) out.verdict = "converging";
  }
  return out;
}

}  // namespace stable_extrema
