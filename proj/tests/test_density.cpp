#include <cmath>
#include <algorithm>
#include <cstdlib>
#include <vector>

#include "doctest.h"
#include "stable_extrema/density.hpp"
#include "stable_extrema/mellin.hpp"
#include "stable_extrema/quadrature.hpp"

using namespace stable_extrema;

namespace {
const double kSqrt2 = std::sqrt(2.0);

// sup of sqrt(2) W on [0, 1]: reflection principle
double brownian_pdf(double x) { return std::exp(-x * x / 4.0) / std::sqrt(kPi); }
double brownian_cdf(double x) { return std::erf(x / 2.0); }

Parameters c01() { return make_params(RationalAlpha::make(3, 2), 2.0 / 3.0); }
Parameters c12() { return make_params(RationalAlpha::make(3, 2), 1.0 / 3.0); }

std::vector<double> log_grid(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a * std::pow(b / a, i / (n - 1.0)));
  return v;
}

// int_0^X x^q p(x) dx with x = u^2 near 0 to absorb the x^{alpha rho - 1} singularity.
double integrate_series(const Parameters& p, const CklClass& c, double q, double X) {
  quad::Options o;
  o.rel_tol = 1e-9;
  o.max_level = 8;
  auto f = [&](double x) { return std::pow(x, q) * pdf_ckl_series(p, c, x).real(); };
  const auto a = quad::integrate([&](double u) { return 2.0 * u * f(u * u); }, quad::Range::Interval, 0.0, 1.0, o);
  const auto b = quad::integrate(f, quad::Range::Interval, 1.0, X, o);
  return (a.value + b.value).real();
}
}  // namespace

TEST_CASE("Brownian density by inversion") {
  const auto bm = make_params(2.0, 0.5);
  for (double x : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    CAPTURE(x);
    const auto r = pdf_mellin_inversion(bm, x, 1e-10);
    CHECK(std::abs(r.real() - brownian_pdf(x)) < 1e-9);
    CHECK(r.abs_err < 1e-9);
    CHECK(std::abs(pdf(bm, x).real() - brownian_pdf(x)) < 1e-12);
  }
  CHECK(std::abs(pdf(bm, 0.0).real() - 1.0 / std::sqrt(kPi)) < 1e-15);
  CHECK(std::abs(pdf(bm, 1.0).real() - 0.4393912) < 1e-7);
  CHECK(std::abs(cdf(bm, 1.0).real() - 0.5204999) < 1e-7);
  for (double x : {0.2, 1.0, 3.0}) {
    CHECK(std::abs(cdf_mellin_inversion(bm, x, 1e-11).real() - brownian_cdf(x)) < 1e-9);
    CHECK(std::abs(cdf_ckl_series(bm, {0, 1, false}, x).real() - brownian_cdf(x)) < 1e-13);
    CHECK(std::abs(pdf_derivative(bm, x).real() + 0.5 * x * brownian_pdf(x)) < 1e-12);
  }
  CHECK_THROWS_AS(pdf(make_params(1.5, 0.5), 0.0), DomainError);
  CHECK_THROWS_AS(pdf_asymptotic_large_x(bm, 3.0), DomainError);
}

TEST_CASE("C_{k,l} series against inversion") {
  for (const auto& p : {c01(), c12()}) {
    const auto ck = *detect_ckl(p);
    CAPTURE(ck.k);
    for (double x : log_grid(0.05, 20.0, 9)) {
      CAPTURE(x);
      SeriesPlan plan;
      const auto s = pdf_ckl_series(p, ck, x, &plan);
      CHECK(plan.kind == SeriesKind::Convergent);
      CHECK(std::abs(s.real() - pdf_mellin_inversion(p, x, 1e-11).real()) < 1e-9);
    }
  }
  // both certificates of the same process
  for (double x : {0.05, 1.0, 5.0}) {
    CHECK(std::abs(pdf_ckl_series(c12(), {1, 2, true}, x).real() - pdf_ckl_series(c12(), {-1, -1, false}, x).real()) < 1e-13);
  }
  // alpha < 1: the series over the poles right of the contour
  const auto a23 = make_params(RationalAlpha::make(2, 3), 0.5);
  for (double x : {0.05, 0.5, 2.0, 10.0}) {
    const double inv = pdf_mellin_inversion(a23, x, 1e-12).real();
    CHECK(std::abs(pdf_ckl_series(a23, {1, 1, true}, x).real() - inv) < 1e-10);
    CHECK(std::abs(pdf_ckl_series(a23, {-2, -1, false}, x).real() - inv) < 1e-10);
  }
  CHECK(std::abs(pdf(c01(), 1.0).real() - pdf_mellin_inversion(c01(), 1.0, 1e-11).real()) < 1e-7);
}

TEST_CASE("normalization and moments") {
  // C_{0,1} has no positive jumps; P(S > 12) <= E[S^30] / 12^30 is negligible
  const auto p0 = c01();
  CHECK(mellin(p0, 31.0).real() / std::pow(12.0, 30) < 1e-15);
  CHECK(std::abs(integrate_series(p0, {0, 1, true}, 0.0, 12.0) - 1.0) < 1e-6);
  CHECK(std::abs(integrate_series(p0, {0, 1, true}, 1.0, 12.0) - 1.0 / std::tgamma(5.0 / 3.0)) < 1e-6);
  for (double s : {1.2, 1.5, 2.0}) {
    CHECK(std::abs(partial_moment_ckl(p0, {0, 1, true}, 12.0, s - 1.0).real() - mellin(p0, s).real()) < 1e-9);
  }
  // C_{1,2}: tail past 20 from the expansion at infinity
  const auto p1 = c12();
  const double tail = 1.0 - cdf_ckl_series(p1, {1, 2, true}, 60.0).real();
  const double head = integrate_series(p1, {1, 2, true}, 0.0, 60.0);
  CHECK(std::abs(head + tail - 1.0) < 1e-6);
  CHECK(std::abs(cdf_ckl_series(p1, {1, 2, true}, 3.0).real() - cdf_mellin_inversion(p1, 3.0, 1e-11).real()) < 1e-9);
  // symmetric alpha = 3/2 by inversion
  CHECK(std::abs(cdf(make_params(1.5, 0.5), 1e8).real() - 1.0) < 1e-6);
}

TEST_CASE("generic asymptotic expansions") {
  const auto g = make_params(kSqrt2, 0.45);
  const double ref = pdf_mellin_inversion(g, 0.05, 1e-12).real();
  CHECK(std::abs(pdf_asymptotic_small_x(g, 0.05).real() - ref) < 1e-5);

  // truncated sums stay within 3x the first omitted term
  const double r01 = pdf_mellin_inversion(g, 0.01, 1e-13).real();
  for (double cap : {0.5, 1.2, 1.5, 2.1, 2.5, 3.0}) {
    const auto a = pdf_asymptotic_small_x(g, 0.01, cap);
    CHECK(std::abs(a.real() - r01) <= a.abs_err);
  }
  CHECK((pdf_asymptotic_small_x(g, 0.01, 0.5).real() - r01) * (pdf_asymptotic_small_x(g, 0.01, 1.2).real() - r01) < 0.0);

  for (double x : {5.0, 10.0, 50.0}) {
    const auto a = pdf_asymptotic_large_x(g, x);
    CHECK(std::abs(a.real() - pdf_mellin_inversion(g, x, 1e-13).real()) < std::max(a.abs_err, 1e-12));
  }
  // leading tail coefficient
  CHECK(std::abs(pdf_mellin_inversion(g, 1e4, 1e-16).real() * std::pow(1e4, 1.0 + kSqrt2) / residue_b(g, 0, 1) - 1.0) < 1e-3);
  for (const auto& p : {make_params(0.5, 0.3), make_params(1.2, 0.5), make_params(1.8, 0.5), g}) CHECK(residue_b(p, 0, 1) > 0.0);

  // divergent expansion: the error estimate has an interior minimum in the cap
  std::vector<double> errs;
  for (double cap = 1.0; cap <= 40.0; cap += 3.0) errs.push_back(pdf_asymptotic_large_x(g, 3.0, cap).abs_err);
  const double best = *std::min_element(errs.begin(), errs.end());
  CHECK(errs.front() > 10 * best);
  CHECK(errs.back() > 2 * best);

  // leading behaviour at 0 for a rational alpha outside every C_{k,l} class
  const auto h = make_params(1.5, 0.5);
  CHECK(std::abs(pdf_mellin_inversion(h, 1e-4, 1e-12).real() / std::pow(1e-4, -0.25) / residue_a(h, 0, 0) - 1.0) < 1e-3);
  CHECK_THROWS_AS(pdf_asymptotic_small_x(h, 0.1), SmallDenominatorError);

  SeriesPlan plan;
  pdf_asymptotic_small_x(g, 0.3, 0.0, &plan);
  CHECK(plan.kind == SeriesKind::Asymptotic);
  CHECK(plan.region == SeriesRegion::SmallX);
  CHECK(plan.terms > 0);
}

TEST_CASE("inversion refinement and dispatch") {
  const auto h = make_params(1.5, 0.5);
  const double a = pdf_mellin_inversion(h, 1.0, 1e-9).real();
  const double b = pdf_mellin_inversion(h, 1.0, 1e-13).real();
  CHECK(std::abs(a - b) < 1e-8);
  CHECK(pdf(h, 1.0).method == "mellin_inversion");
  CHECK(pdf(c12(), 1.0).method == "ckl_series");
  CHECK(pdf(make_params(kSqrt2, 0.45), 0.05).method == "asymptotic_small_x");

  const auto g = make_params(kSqrt2, 0.45);
  const double fd = (pdf_mellin_inversion(g, 0.7005, 1e-13).real() - pdf_mellin_inversion(g, 0.6995, 1e-13).real()) / 1e-3;
  CHECK(std::abs(pdf_derivative(g, 0.7).real() - fd) < 1e-7);
}

TEST_CASE("distribution function") {
  for (const auto& p : {make_params(1.5, 0.5), make_params(kSqrt2, 0.45), make_params(0.6, 0.3), c12(), make_params(2.0, 0.5)}) {
    double prev = 0.0;
    for (double x = 0.1; x <= 10.0; x += 0.7) {
      const double f = cdf(p, x).real();
      CHECK(f >= prev);
      prev = f;
    }
    const double big = cdf(p, 1e6).real();
    CHECK(big >= 1.0 - 1e-3);
    CHECK(big <= 1.0);
  }
  CHECK(cdf(make_params(1.5, 0.5), 0.0).real() == 0.0);
}

TEST_CASE("time scaling") {
  const auto bm = make_params(2.0, 0.5);
  for (double t : {0.25, 4.0}) {
    // sup of sqrt(2) W over [0, t]
    CHECK(std::abs(cdf_at_time(bm, t, 1.3).real() - std::erf(1.3 / (2.0 * std::sqrt(t)))) < 1e-12);
    CHECK(std::abs(pdf_at_time(bm, t, 1.3).real() - std::exp(-1.69 / (4.0 * t)) / std::sqrt(kPi * t)) < 1e-12);
  }
}

TEST_CASE("density profile") {
  const auto xs = log_grid(0.1, 10.0, 12);
  const auto prof = density_profile(c12(), xs);
  REQUIRE(prof.p.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(prof.p[i] >= 0.0);
    CHECK(std::isfinite(prof.err[i]));
    CHECK(prof.p[i] == pdf(c12(), xs[i]).real());
  }
}

TEST_CASE("conjecture probe") {
  const auto a = conjecture_probe(make_params(kSqrt2, 0.45), 0.5, 30.0);
  CHECK(a.verdict == "converging");
  CHECK(std::abs(a.partial_sums.back() - a.reference) < 1e-10);
  const auto b = conjecture_probe(make_params(std::sqrt(0.5), 0.4), 3.0, 30.0);
  CHECK(b.verdict == "converging");
}
