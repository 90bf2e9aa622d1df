#include "stable_extrema/mellin.hpp"

#include <algorithm>
#include <cmath>

#include "stable_extrema/quadrature.hpp"
#include "stable_extrema/specfun.hpp"
#include "stable_extrema/wiener_hopf.hpp"

namespace stable_extrema {

namespace {

constexpr double kSinGuard = 1e-12;
constexpr double kNearPole = 1e-6;
constexpr double kCircleRadius = 1e-3;
constexpr int kCircleNodes = 32;

double parity_sign(long e) { return (e % 2 == 0) ? 1.0 : -1.0; }

cplx gamma_c(cplx z) { return std::exp(log_gamma(z)); }

cplx rgamma_c(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) return 0.0;
  return std::exp(-log_gamma(z));
}

bool near_nonpositive_integer(cplx z, double tol) {
  if (z.real() > 0.5) return false;
  return std::abs(z - std::round(z.real())) < tol;
}

// Number of (m, n) >= 0 with |z + m tau + n| < tol, tau > 0 real.
int lattice_hits(cplx z, double tau, double tol, double* nearest = nullptr) {
  int hits = 0;
  double best = INFINITY;
  if (std::abs(z.imag()) < 1.0 && z.real() < 1.0) {
    for (long m = 0; m * tau <= -z.real() + 1.0; ++m) {
      const double r = -z.real() - m * tau;
      const double n = std::max(0.0, std::round(r));
      const double d = std::abs(z + m * tau + n);
      best = std::min(best, d);
      if (d < tol) ++hits;
    }
  }
  if (nearest) *nearest = best;
  return hits;
}

struct CircleData {
  cplx mean;
  cplx residue;
  double max_abs = 0.0;
};

template <class F>
CircleData circle(F&& f, cplx s0, double r, int nodes) {
  CircleData c{0.0, 0.0, 0.0};
  for (int j = 0; j < nodes; ++j) {
    const cplx e = std::exp(kI * (2.0 * kPi * (j + 0.5) / nodes));
    const cplx v = f(s0 + r * e);
    c.mean += v;
    c.residue += v * r * e;
    c.max_abs = std::max(c.max_abs, std::abs(v));
  }
  c.mean /= static_cast<double>(nodes);
  c.residue /= static_cast<double>(nodes);
  return c;
}

// Decides between a pole and a removable point from values on a small
// circle: at a pole |residue| is comparable to r max|f|.
template <class F>
EvalResult resolve_singular_point(F&& f, cplx s, const char* method) {
  const auto c = circle(f, s, kCircleRadius, kCircleNodes);
  if (std::abs(c.residue) > 1e-6 * kCircleRadius * c.max_abs) {
    throw PoleError(std::string(method) + ": M(s) has a pole here", c.residue);
  }
  EvalResult r;
  r.value = c.mean;
  r.method = method;
  r.near_singular = true;
  r.terms = kCircleNodes;
  r.abs_err = 1e-12 * c.max_abs;
  return r;
}

EvalResult mellin_dg_regular(double a, double rho, cplx s) {
  const cplx tau = a;
  const EvalResult g[6] = {
      log_barnes_g(a * rho, tau),        log_barnes_g(a * (1.0 - rho) + 1.0, tau),
      log_barnes_g(a * (1.0 - rho) + 2.0 - s, tau), log_barnes_g(a * rho - 1.0 + s, tau),
      log_barnes_g(a - 1.0 + s, tau),    log_barnes_g(a + 1.0 - s, tau),
  };
  const cplx lm = (s - 1.0) * std::log(a) + g[0].value - g[1].value + g[2].value - g[3].value + g[4].value -
                  g[5].value;
  EvalResult r;
  r.value = std::exp(lm);
  r.method = "double-gamma";
  double err = 0.0;
  for (const auto& e : g) {
    err += e.abs_err;
    r.terms += e.terms;
  }
  r.abs_err = std::abs(r.value) * err;
  return r;
}

void require_ckl(const Parameters& p, const CklClass& c) {
  if (c.l == 0 || !satisfies_ckl(p.alpha(), p.rho(), c.k, c.l, 1e-8)) {
    throw DomainError("C_{k,l} certificate does not hold for these parameters");
  }
}

double sin_ratio_checked(double num_arg, double den_arg) {
  const double d = sin_pi(den_arg);
  if (std::abs(d) < kSinGuard) throw SmallDenominatorError("residue coefficient: sine denominator vanishes");
  return sin_pi(num_arg) / d;
}

}  // namespace

EvalResult mellin_double_gamma(double alpha, double rho, cplx s) {
  if (!(alpha > 0.0) || !(rho > 0.0 && rho <= 1.0)) {
    throw DomainError("double gamma formula for M(s) needs alpha > 0 and rho in (0, 1]");
  }
  const double tol = 1e-9 * (1.0 + std::abs(s));
  double d2 = INFINITY, d4 = INFINITY;
  const int den = lattice_hits(alpha * rho - 1.0 + s, alpha, tol, &d2) + lattice_hits(alpha + 1.0 - s, alpha, tol, &d4);
  const int num = lattice_hits(alpha * (1.0 - rho) + 2.0 - s, alpha, tol) + lattice_hits(alpha - 1.0 + s, alpha, tol);
  if (den + num > 0) {
    return resolve_singular_point([&](cplx x) { return mellin_dg_regular(alpha, rho, x).value; }, s,
                                  "double-gamma");
  }
  auto r = mellin_dg_regular(alpha, rho, s);
  if (std::min(d2, d4) < kNearPole * (1.0 + std::abs(s))) r.near_singular = true;
  return r;
}

EvalResult mellin(const Parameters& params, cplx s) {
  return mellin_double_gamma(params.alpha(), params.rho(), s);
}

EvalResult mellin_ckl(const Parameters& params, const CklClass& ckl, cplx s) {
  require_ckl(params, ckl);
  const double a = params.alpha();
  const long k = ckl.k, l = ckl.l;
  // smallest distance to a singular factor, used to route to the circle mean
  double closest = INFINITY;
  auto f = [&](cplx x, bool track) -> cplx {
    cplx v;
    auto den_sin = [&](cplx arg) {
      const cplx d = sin_pi(arg);
      if (track) closest = std::min(closest, std::abs(d) / kPi);
      return d;
    };
    if (l > 0) {
      if (track && near_nonpositive_integer(x, 1.0)) closest = std::min(closest, std::abs(x - std::round(x.real())));
      v = gamma_c(x) * rgamma_c(1.0 - (1.0 - x) / a);
      for (long j = 1; j <= l - 1; ++j) v *= sin_pi((x - 1.0 + static_cast<double>(j)) / a) / sin_pi(j / a);
      for (long j = 1; j <= k; ++j) v *= sin_pi(a * j) / den_sin(1.0 - x + a * static_cast<double>(j));
    } else {
      const cplx g = 1.0 + (1.0 - x) / a;
      if (track && near_nonpositive_integer(g, 1.0)) closest = std::min(closest, a * std::abs(g - std::round(g.real())));
      v = gamma_c(g) * rgamma_c(2.0 - x);
      for (long j = 1; j <= -k - 1; ++j) v *= sin_pi(x - 1.0 + a * static_cast<double>(j)) / sin_pi(a * j);
      for (long j = 1; j <= -l; ++j) v *= sin_pi(j / a) / den_sin((1.0 - x + static_cast<double>(j)) / a);
    }
    return v;
  };
  const double tol = 1e-9 * (1.0 + std::abs(s));
  cplx value;
  bool singular = false;
  try {
    value = f(s, true);
    singular = closest < tol || !std::isfinite(std::abs(value));
  } catch (const PoleError&) {
    singular = true;
  }
  if (singular) return resolve_singular_point([&](cplx x) { return f(x, false); }, s, "ckl-product");
  EvalResult r;
  r.value = value;
  r.method = "ckl-product";
  r.terms = std::labs(k) + std::labs(l) + 2;
  r.abs_err = std::abs(value) * 1e-15 * static_cast<double>(r.terms) * (1.0 + std::abs(s));
  r.near_singular = closest < kNearPole * (1.0 + std::abs(s));
  return r;
}

ResidualPair mellin_recursion_check(const Parameters& params, cplx s) {
  const double a = params.alpha(), rho = params.rho();
  const cplx m0 = mellin(params, s).value;
  const cplx m1 = mellin(params, s + 1.0).value;
  const cplx ma = mellin(params, s + a).value;
  const cplx r1 = a / kPi * sin_pi(rho - (1.0 - s) / a) * gamma_c(1.0 - s / a) * gamma_c(1.0 - (1.0 - s) / a) * m0;
  const cplx r2 = a / kPi * sin_pi(a * rho - 1.0 + s) * gamma_c(1.0 - s) * gamma_c(a - 1.0 + s) * m0;
  return {std::abs(m1 - r1) / std::abs(m1), std::abs(ma - r2) / std::abs(ma)};
}

ResidualPair mellin_reflections_check(const Parameters& params, cplx s) {
  const double a = params.alpha(), rho = params.rho();
  const cplx m0 = mellin(params, s).value;
  const cplx t = (1.0 - s) / a;
  const cplx r1 = gamma_c(a * rho - 1.0 + s) / gamma_c(1.0 - s) * gamma_c(1.0 - rho + t) * rgamma_c(1.0 - t) *
                  mellin(params, 2.0 - a * rho - s).value;
  const cplx r2 = gamma_c(s) / gamma_c(2.0 - s) * gamma_c(1.0 + t) * rgamma_c(1.0 - t) *
                  mellin_double_gamma(1.0 / a, a * rho, 1.0 - t).value;
  return {std::abs(m0 - r1) / std::abs(m0), std::abs(m0 - r2) / std::abs(m0)};
}

MellinStrip mellin_strip(const Parameters& params) {
  const double a = params.alpha();
  MellinStrip st{1.0 - a * params.rho(), 1.0 + a};
  if (const auto c = detect_ckl(params); c && c->l > 0 && c->k == 0) st.c_max = INFINITY;
  return st;
}

double residue_a(const Parameters& params, long m, long n) {
  const double a = params.alpha(), rho = params.rho();
  if (m < 0 || n < 0) throw DomainError("a_{m,n} needs m, n >= 0");
  double v = parity_sign(m + n) * rgamma(1.0 - rho - n - m / a) * rgamma(a * rho + m + a * n);
  for (long j = 1; j <= m; ++j) v *= sin_ratio_checked((a * rho + j - 1.0) / a, j / a);
  for (long j = 1; j <= n; ++j) v *= sin_ratio_checked(a * (rho + j - 1.0), a * j);
  return v;
}

double residue_b(const Parameters& params, long m, long n) {
  const double a = params.alpha(), rho = params.rho();
  if (m < 0 || n < 0) throw DomainError("b_{m,n} needs m, n >= 0");
  double v = parity_sign(m + n) * rgamma(1.0 + n + m / a) * rgamma(-m - a * n);
  for (long j = 1; j <= m; ++j) v *= sin_ratio_checked((a * rho + j - 1.0) / a, j / a);
  for (long j = 1; j <= n; ++j) v *= sin_ratio_checked(a * (rho + j - 1.0), a * j);
  return v;
}

double residue_c_plus(const Parameters& params, const CklClass& ckl, long m, long n) {
  require_ckl(params, ckl);
  const double a = params.alpha();
  const long k = ckl.k, l = ckl.l;
  if (l <= 0) throw DomainError("c+ needs l > 0");
  if (n < 0 || n > k) throw DomainError("c+_{m,n} needs 0 <= n <= k");
  double v = parity_sign(m * (k + 1) + n * l + 1) * rgamma(1.0 + n + m / a) * rgamma(-m - a * n);
  for (long j = 1; j <= l - 1; ++j) v *= sin_ratio_checked((j + m) / a, j / a);
  for (long j = 1; j <= k - n; ++j) v *= sin_ratio_checked(a * (j + n), a * j);
  return v;
}

double residue_c_minus(const Parameters& params, const CklClass& ckl, long m, long n) {
  require_ckl(params, ckl);
  const double a = params.alpha();
  const long k = ckl.k, l = ckl.l;
  if (l >= 0) throw DomainError("c- needs l < 0");
  if (m < 0 || m > -l) throw DomainError("c-_{m,n} needs 0 <= m <= |l|");
  double v = parity_sign(m * k + n * (l + 1) + 1) * rgamma(1.0 + n + m / a) * rgamma(-m - a * n);
  for (long j = 1; j <= -k - 1; ++j) v *= sin_ratio_checked(a * (j + n), a * j);
  for (long j = 1; j <= -l - m; ++j) v *= sin_ratio_checked((j + m) / a, j / a);
  return v;
}

ResidueTable residue_coeffs(const Parameters& params, ResidueKind kind, long m_max, long n_max) {
  if (m_max < 0 || n_max < 0) throw DomainError("residue table bounds must be nonnegative");
  ResidueTable t{params, kind, {}, {}};
  const double a = params.alpha(), rho = params.rho();
  if (kind == ResidueKind::Generic) {
    for (long m = 0; m <= m_max; ++m) {
      for (long n = 0; n <= n_max; ++n) {
        t.entries.push_back({1.0 - a * rho - m - a * n, residue_a(params, m, n), m, n});
        if (m >= 1 && n >= 1) t.entries.push_back({m + a * n, -residue_b(params, m - 1, n), m, n});
      }
    }
  } else {
    const auto c = detect_ckl(params);
    if (!c) throw DomainError("parameters are not in any C_{k,l} class");
    CklClass ckl = *c;
    if ((kind == ResidueKind::CklPos) != (ckl.l > 0)) {
      // the other sign of l: use the dual-free alternative certificate when one exists
      bool found = false;
      for (long k = -kCklSearchLimit; k <= kCklSearchLimit && !found; ++k) {
        for (long l = -kCklSearchLimit; l <= kCklSearchLimit && !found; ++l) {
          if (l == 0 || (kind == ResidueKind::CklPos) != (l > 0)) continue;
          if (satisfies_ckl(a, rho, k, l)) {
            ckl = {k, l, false};
            found = true;
          }
        }
      }
      if (!found) throw DomainError("no C_{k,l} certificate with the requested sign of l");
    }
    t.ckl = ckl;
    const long k = ckl.k, l = ckl.l;
    if (l > 0) {
      for (long n = 0; n <= std::min(k, n_max); ++n) {
        for (long m = -m_max; m <= 1 - l; ++m) t.entries.push_back({m + a * n, residue_c_plus(params, ckl, m - 1, n), m, n});
        if (n >= 1) {
          for (long m = 1; m <= m_max; ++m) t.entries.push_back({m + a * n, residue_c_plus(params, ckl, m - 1, n), m, n});
        }
      }
    } else {
      for (long m = 1; m <= -l + 1; ++m) {
        for (long n = 1; n <= n_max; ++n) t.entries.push_back({m + a * n, residue_c_minus(params, ckl, m - 1, n), m, n});
        if (m >= 2) {
          for (long n = -n_max; n <= k; ++n) t.entries.push_back({m + a * n, residue_c_minus(params, ckl, m - 1, n), m, n});
        }
      }
    }
  }
  std::sort(t.entries.begin(), t.entries.end(), [](const auto& x, const auto& y) { return x.s < y.s; });
  return t;
}

cplx mellin_numeric_residue(const Parameters& params, cplx s0, double radius, int nodes) {
  return circle([&](cplx x) { return mellin(params, x).value; }, s0, radius, nodes).residue;
}

double mellin_decay_rate(const Parameters& params) {
  const double a = params.alpha(), rho = params.rho();
  return kPi / (2.0 * a) * (a * (1.0 - rho) + 1.0 - a * rho);
}

double mellin_decay_bound(const Parameters& params, double /*x*/, double y) {
  if (std::abs(y) < 10.0) throw DomainError("decay bound needs |y| >= 10");
  return -mellin_decay_rate(params) * std::abs(y);
}

double phi_mellin_bridge(const Parameters& params, cplx s) {
  const double a = params.alpha(), rho = params.rho();
  if (!(s.real() > 0.0 && s.real() < a * rho)) throw DomainError("bridge needs 0 < Re s < alpha rho");
  const auto ckl = detect_ckl(params);
  auto phi_at = [&](double z) {
    if (z == 0.0) return cplx(1.0);
    return ckl ? phi_ckl(params, *ckl, z).value : phi_darling_quadrature(params, z).value;
  };
  // phi(e^w) = e^{-alpha rho w} phi(e^{-w}) keeps the argument bounded
  auto f = [&](double w) -> cplx {
    if (w <= 0.0) return std::exp(w * s) * phi_at(std::exp(w));
    return std::exp(w * (s - a * rho)) * phi_at(std::exp(-w));
  };
  quad::Options opt;
  opt.rel_tol = 1e-11;
  opt.max_level = 9;
  const auto q = quad::integrate(f, quad::Range::Line, 0.0, 0.0, opt);
  const cplx rhs = gamma_c(s) * gamma_c(1.0 - s / a) * mellin(params, 1.0 - s).value;
  return std::abs(q.value - rhs);
}

}  // namespace stable_extrema
