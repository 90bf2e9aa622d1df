#include "stable_extrema/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "stable_extrema/density.hpp"
#include "stable_extrema/ftau.hpp"
#include "stable_extrema/mc_oracle.hpp"
#include "stable_extrema/mellin.hpp"
#include "stable_extrema/quadrature.hpp"
#include "stable_extrema/specfun.hpp"
#include "stable_extrema/wiener_hopf.hpp"

namespace stable_extrema {

bool SuiteReport::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

double SuiteReport::max_residual() const {
  double m = 0.0;
  for (const auto& c : checks) m = std::max(m, std::isnan(c.residual) ? INFINITY : c.residual);
  return m;
}

void SuiteReport::add(std::string label, double residual, double tolerance) {
  checks.push_back({std::move(label), residual, tolerance, residual < tolerance, ""});
}

void SuiteReport::add_error(std::string label, const std::string& what) {
  checks.push_back({std::move(label), NAN, 0.0, false, what});
}

namespace {

double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string tag(const Parameters& p) { return fmt("alpha=%.10g rho=%.10g", p.alpha(), p.rho()); }

template <class F>
void guarded(SuiteReport& r, const std::string& label, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    r.add_error(label, e.what());
  }
}

}  // namespace

SuiteReport verify_phi_methods(const Parameters& params, const std::vector<double>& zs, double tol) {
  SuiteReport r{"phi-methods", {}};
  const auto ckl = detect_ckl(params);
  for (double z : zs) {
    std::vector<std::pair<std::string, cplx>> vals;
    auto attempt = [&](const char* name, auto&& f) {
      try {
        vals.emplace_back(name, f());
      } catch (const Error&) {
      }
    };
    attempt("double-gamma", [&] { return phi_double_gamma(params, z).value; });
    if (const auto& ra = params.rational_alpha()) attempt("rational-alpha", [&] { return phi_rational_alpha(*ra, params.rho(), z).value; });
    if (ckl) attempt("ckl-product", [&] { return phi_ckl(params, *ckl, z).value; });
    attempt("log-series", [&] { return phi_log_series(params, z).value; });
    attempt("darling-quadrature", [&] { return phi_darling_quadrature(params, z).value; });
    for (std::size_t i = 0; i < vals.size(); ++i) {
      for (std::size_t j = i + 1; j < vals.size(); ++j) {
        r.add(tag(params) + fmt(" z=%g ", z) + vals[i].first + " vs " + vals[j].first, rel_err(vals[i].second, vals[j].second), tol);
      }
    }
  }
  return r;
}

namespace {

void functional_checks(SuiteReport& r, const Parameters& p, double z, double tol) {
  const double a = p.alpha(), rho = p.rho();
  const std::string at = tag(p) + fmt(" z=%.10g", z);
  guarded(r, at + " inversion", [&] {
    r.add(at + " inversion", rel_err(phi(p, 1.0 / z).value, std::pow(z, a * rho) * phi(p, z).value), tol);
  });
  if (a * rho < 1.0 - 1e-12) {
    guarded(r, at + " power", [&] {
      const cplx rhs = phi_double_gamma_log(1.0 / a, a * rho, a * std::log(z)).value;
      r.add(at + " power", rel_err(phi(p, z).value, rhs), tol);
    });
  }
  if (a > 1.0) {
    guarded(r, at + " multiplication", [&] {
      const auto half = make_params(a / 2.0, rho);
      const cplx e = std::exp(kI * kPi / a);
      r.add(at + " multiplication", rel_err(phi(p, z).value, phi(half, z * e).value * phi(half, z / e).value), tol);
    });
  }
  for (double y : {z, -z}) {
    const std::string l = at + fmt(" dual product y=%.10g", y);
    guarded(r, l, [&] {
      const cplx iz(0, y);
      const double delta = y > 0 ? 1.0 : -1.0;
      const cplx lhs = phi(dual(p), iz).value * phi(p, -iz).value;
      const cplx rhs = 1.0 / (1.0 + std::exp(-delta * kI * kPi * a * rho) * std::pow(iz, a));
      r.add(l, rel_err(lhs, rhs), tol);
    });
  }
}

}  // namespace

SuiteReport verify_functional_equations(const Parameters& params, const std::vector<double>& zs, double tol) {
  SuiteReport r{"functional-equations", {}};
  for (double z : zs) functional_checks(r, params, z, tol);
  return r;
}

SuiteReport verify_functional_equations_random(int count, std::uint64_t seed, double tol) {
  SuiteReport r{"functional-equations", {}};
  std::mt19937_64 g(seed);
  auto u = [&] { return (g() >> 11) * 0x1p-53; };
  for (int i = 0; i < count; ++i) {
    const double a = 0.2 + 1.79 * u();
    const double lo = a < 1 ? 0.0 : 1 - 1 / a, hi = a < 1 ? 1.0 : 1 / a;
    const double rho = lo + (hi - lo) * (0.02 + 0.96 * u());
    const double z = std::exp(-3.0 + 6.0 * u());
    functional_checks(r, make_params(a, rho), z, tol);
  }
  return r;
}

SuiteReport verify_quasi_periodicity(const Parameters& params, double tol) {
  SuiteReport r{"quasi-periodicity", {}};
  const double a = params.alpha(), rho = params.rho();
  for (cplx w : {cplx(0.3, 0.2), cplx(-0.7, 1.0), cplx(1.1, -2.0), cplx(-1.5, -0.4)}) {
    const std::string l = tag(params) + fmt(" w=%g%+gi", w.real(), w.imag());
    guarded(r, l, [&] {
      const cplx f = phi_double_gamma_log(a, rho, w).value;
      const cplx r1 = phi_double_gamma_log(a, rho, w + 2.0 * kPi * kI).value;
      const cplx e1 = (1.0 + std::exp(a * w + kPi * kI * a * (1.0 - rho))) / (1.0 + std::exp(a * w + kPi * kI * a * (1.0 + rho)));
      r.add(l + " period 2 pi i", rel_err(r1, f * e1), tol);
      const cplx r2 = phi_double_gamma_log(a, rho, w + 2.0 * kPi * kI / a).value;
      const cplx e2 = (1.0 + std::exp(w + kPi * kI * (1.0 / a - rho))) / (1.0 + std::exp(w + kPi * kI * (1.0 / a + rho)));
      r.add(l + " period 2 pi i/alpha", rel_err(r2, f * e2), tol);
    });
  }
  return r;
}

SuiteReport verify_f_identities(std::uint64_t seed, double tol) {
  SuiteReport r{"f-identities", {}};
  std::mt19937_64 g(seed);
  auto u = [&] { return 2.0 * ((g() >> 11) * 0x1p-53) - 1.0; };
  int used = 0;
  while (used < 25) {
    const cplx tau(0.8 * u(), 0.5 + 0.6 * (u() + 1.0));
    const cplx z(1.5 * u(), 1.5 * u());
    if (!strip_check(z, tau).in_P) continue;
    ++used;
    const std::string at = fmt("z=%.6f%+.6fi ", z.real(), z.imag()) + fmt("tau=%.6f%+.6fi", tau.real(), tau.imag());
    guarded(r, at, [&] {
      const cplx f = f_quadrature(z, tau).value;
      r.add(at + " modular", std::abs(f - kI / tau * f_quadrature(kI * z / tau, -1.0 / tau).value), tol);
      if (strip_check(-z, tau).in_S) r.add(at + " reflection", std::abs(f - f_quadrature(-z, tau).value + kI * z / tau), tol);
      for (int n : {2, 3, 5}) {
        cplx s = 0.0;
        for (int k = 0; k < n; ++k) s += f_quadrature((z + kPi * kI * double(n - 2 * k - 1)) / double(n), tau).value;
        r.add(at + fmt(" multiplication n=%g", n), std::abs(f_quadrature(z, double(n) * tau).value - s / double(n)), tol);
      }
      r.add(at + " contour", std::abs(f_contour(z, tau).value - f), tol);
      if (tau.real() != 0.0) r.add(at + " series", std::abs(f_series(z, tau).value - f), tol);
      if (tau.real() != 0.0 && z.real() > 0.0) {
        r.add(at + " hyperbolic series", std::abs(f_series(z, tau, FSeriesForm::Hyperbolic).value - f), tol);
      }
    });
  }
  const long pairs[][2] = {{1, 1}, {1, 2}, {2, 1}, {3, 2}, {5, 3}, {2, 5}};
  for (const auto& p : pairs) {
    const cplx tau(0, static_cast<double>(p[0]) / p[1]);
    for (cplx z : {cplx(0.2), cplx(-1.1, 0.4), cplx(0.6, -1.3), cplx(2.0, 2.5), cplx(-0.3, -2.8), cplx(0.0, kPi / 2)}) {
      const std::string l = fmt("rational m/n=%g/%g ", p[0], p[1]) + fmt("z=%g%+gi", z.real(), z.imag());
      guarded(r, l, [&] { r.add(l, std::abs(f_rational(z, p[0], p[1]).value - f_quadrature(z, tau).value), tol); });
    }
  }
  return r;
}

SuiteReport verify_mellin_anchors(const std::optional<Parameters>& params) {
  SuiteReport r{"mellin-anchors", {}};
  auto unit = [&](const Parameters& p) {
    guarded(r, tag(p) + " M(1)", [&] { r.add(tag(p) + " M(1)", std::abs(mellin(p, 1.0).value - 1.0), 1e-12); });
  };
  if (params) {
    unit(*params);
    return r;
  }
  const double s2 = std::sqrt(2.0);
  for (const auto& p : {make_params(RationalAlpha::make(3, 2), 2.0 / 3.0), make_params(RationalAlpha::make(3, 2), 1.0 / 3.0),
                        make_params(1.5, 0.55), make_params(0.8, 0.5), make_params(s2, 0.45), make_params(2.0, 0.5),
                        make_params(0.5, 0.3), make_params(1.0, 0.5), make_params(1.9, 0.48), make_params(0.3, 0.9)}) {
    unit(p);
  }
  for (double s : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    const std::string l = fmt("Brownian closed form s=%g", s);
    guarded(r, l, [&] {
      const double ref = std::pow(2.0, s - 1.0) * std::tgamma(s / 2.0) / std::tgamma(0.5);
      r.add(l, rel_err(mellin_double_gamma(2.0, 0.5, s).value, ref), 1e-8);
    });
  }
  for (cplx s : {cplx(0.4), cplx(1.5), cplx(2.0), cplx(3.5), cplx(1.0, 2.0), cplx(0.7, -1.0)}) {
    const std::string l = fmt("C_{0,1} gamma ratio s=%g%+gi", s.real(), s.imag());
    guarded(r, l, [&] {
      const cplx closed = std::exp(log_gamma(s) - log_gamma(1.0 + (s - 1.0) / 1.5));
      r.add(l, rel_err(mellin_double_gamma(1.5, 2.0 / 3.0, s).value, closed), 1e-10);
    });
  }
  return r;
}

SuiteReport verify_residues(const Parameters& params, int count, double tol) {
  SuiteReport r{"residues", {}};
  guarded(r, tag(params) + " residue table", [&] {
    const auto ckl = detect_ckl(params);
    const auto kind = !ckl ? ResidueKind::Generic : ckl->l > 0 ? ResidueKind::CklPos : ResidueKind::CklNeg;
    auto entries = residue_coeffs(params, kind, 6, 6).entries;
    const auto strip = mellin_strip(params);
    auto dist = [&](double s) { return s < strip.c_min ? strip.c_min - s : s - strip.c_max; };
    std::stable_sort(entries.begin(), entries.end(), [&](const auto& a, const auto& b) { return dist(a.s) < dist(b.s); });
    for (int i = 0; i < count && i < static_cast<int>(entries.size()); ++i) {
      const auto& e = entries[i];
      const cplx num = mellin_numeric_residue(params, e.s);
      r.add(tag(params) + fmt(" pole s=%.10g", e.s), std::abs(num - e.residue) / std::max(1.0, std::abs(e.residue)), tol);
    }
  });
  return r;
}

SuiteReport verify_decay(const Parameters& params, double y, double tol) {
  SuiteReport r{"decay", {}};
  const std::string l = tag(params) + fmt(" y=%g", y);
  guarded(r, l, [&] {
    const double measured = std::log(std::abs(mellin(params, cplx(1.0, y)).value)) / y;
    const double predicted = -mellin_decay_rate(params);
    r.add(l, std::abs(measured / predicted - 1.0), tol);
  });
  return r;
}

namespace {

// int_a^b x^q p(x) dx over the C_{k,l} series; x = u^2 on [0, 1] absorbs
// the x^{alpha rho - 1} singularity at the origin.
double series_integral(const Parameters& p, const CklClass& c, double q, double a, double b) {
  quad::Options o;
  o.rel_tol = 1e-10;
  o.max_level = 9;
  auto f = [&](double x) { return std::pow(x, q) * pdf_ckl_series(p, c, x).real(); };
  if (std::isinf(b)) return quad::integrate(f, quad::Range::HalfLine, a, 0.0, o).value.real();
  if (a == 0.0) return quad::integrate([&](double u) { return 2.0 * u * f(u * u); }, quad::Range::Interval, 0.0, std::sqrt(b), o).value.real();
  return quad::integrate(f, quad::Range::Interval, a, b, o).value.real();
}

// int_0^inf x^q p(x) dx, and a bound on what was left out
std::pair<double, double> series_moment(const Parameters& p, const CklClass& c, double q) {
  if (p.alpha() * p.rho() > 1.0 - 1e-12) {
    // no positive jumps: all moments exist, P(S > X) <= E[S^30] / X^30
    const double X = 12.0;
    const double bound = mellin(p, 31.0).value.real() / std::pow(X, 30.0 - q);
    return {series_integral(p, c, q, 0.0, 1.0) + series_integral(p, c, q, 1.0, X), bound};
  }
  return {series_integral(p, c, q, 0.0, 1.0) + series_integral(p, c, q, 1.0, 20.0) + series_integral(p, c, q, 20.0, INFINITY), 0.0};
}

}  // namespace

SuiteReport verify_density(const Parameters& params, const CklClass& ckl, int points, double tol_pointwise, double tol_integral) {
  SuiteReport r{"density", {}};
  std::vector<double> xs(points);
  for (int i = 0; i < points; ++i) xs[i] = 0.05 * std::pow(400.0, points > 1 ? i / (points - 1.0) : 0.0);
  double worst = 0.0, worst_x = 0.0;
  std::string failure;
  for (double x : xs) {
    try {
      const double d = std::abs(pdf_ckl_series(params, ckl, x).real() - pdf_mellin_inversion(params, x, 1e-10).real());
      if (d >= worst) worst = d, worst_x = x;
    } catch (const std::exception& e) {
      failure = fmt("x=%g: ", x) + e.what();
      break;
    }
  }
  const std::string l = tag(params) + " series vs inversion sup";
  if (failure.empty()) {
    r.add(l + fmt(" (at x=%g)", worst_x), worst, tol_pointwise);
  } else {
    r.add_error(l, failure);
  }
  guarded(r, tag(params) + " total mass", [&] {
    const auto [m0, b0] = series_moment(params, ckl, 0.0);
    r.add(tag(params) + " total mass", std::abs(m0 - 1.0) + b0, tol_integral);
  });
  guarded(r, tag(params) + " first moment", [&] {
    const auto [m1, b1] = series_moment(params, ckl, 1.0);
    r.add(tag(params) + " first moment vs M(2)", std::abs(m1 - mellin(params, 2.0).value.real()) + b1, tol_integral);
  });
  return r;
}

SuiteReport verify_brownian_density(double tol) {
  SuiteReport r{"brownian-density", {}};
  const auto bm = make_params(2.0, 0.5);
  for (double x : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    const std::string l = fmt("x=%g", x);
    guarded(r, l, [&] {
      r.add(l, std::abs(pdf_mellin_inversion(bm, x, 1e-10).real() - std::exp(-x * x / 4.0) / std::sqrt(kPi)), tol);
    });
  }
  return r;
}

SuiteReport verify_monte_carlo(const MonteCarloConfig& cfg) {
  SuiteReport r{"monte-carlo", {}};
  const auto c01 = make_params(RationalAlpha::make(3, 2), 2.0 / 3.0);
  const auto bm = make_params(2.0, 0.5);
  const std::string size = fmt(" n=%g steps=%g", cfg.n_paths, cfg.n_steps);
  std::uint64_t seed = cfg.seed;
  for (const auto& p : {c01, bm}) {
    const std::string l = tag(p) + " KS vs cdf" + size;
    guarded(r, l, [&] {
      const auto batch = sample_supremum(p, cfg.n_paths, cfg.n_steps, seed);
      r.add(l, ks_statistic(batch.values, [&](double x) { return cdf(p, x).real(); }).ks_stat, cfg.tol);
    });
    ++seed;
  }
  {
    const auto p = make_params(1.5, 0.5);
    const std::string l = tag(p) + " reflected exponentials identity" + size;
    guarded(r, l, [&] { r.add(l, check_identity_products(p, Identity::ReflectedExponentials, cfg.n_paths, seed, cfg.n_steps).ks_stat, cfg.tol); });
    ++seed;
  }
  for (const auto& p : {c01, bm}) {
    const std::string l = tag(p) + " gamma product identity C_{0,1}" + size;
    guarded(r, l, [&] {
      const auto g = check_identity_products(p, Identity::CklGammaProducts, cfg.n_paths, seed, cfg.n_steps, CklClass{0, 1, false});
      r.add(l, g.ks_stat, cfg.tol);
    });
    ++seed;
  }
  return r;
}

}  // namespace stable_extrema
