#include <cmath>
#include <random>

#include "doctest.h"
#include "stable_extrema/ftau.hpp"
#include "test_util.hpp"

using namespace stable_extrema;

namespace {

// Reference values from an independent arbitrary-precision quadrature.
struct Ref {
  cplx z, tau, value;
};
const Ref kRefs[] = {
    {0.0, cplx(0, 1), 1.0},
    {1.0, cplx(0, 1), 0.58197670686932642},
    {0.5, cplx(0.3, 1), cplx(0.7389455106741331, 0.073336291153290795)},
    {0.5, cplx(-0.3, 1), cplx(0.7389455106741331, -0.073336291153290795)},
    {2.0, cplx(0.4, 0.8), cplx(0.28115425379060402, -0.013213612120102469)},
    {0.7, cplx(0, 2), 0.62349710649659691},
    {0.7, cplx(0, 1.5), 0.63566448156740563},
    {0.4, cplx(0, 1.2), 0.7633069258563238},
    {cplx(0.4, 0.3), cplx(0.5, 1.1), cplx(0.76078117456958161, -0.014061967591922498)},
    {0.3, cplx(0.2, 0.9), cplx(0.87365837836555801, 0.08851255428583956)},
};

}  // namespace

TEST_CASE("f_quadrature against reference values") {
  for (const auto& r : kRefs) {
    const auto v = f_quadrature(r.z, r.tau);
    CHECK(std::abs(v.value - r.value) < 1e-13);
    CHECK(v.abs_err >= 0.0);
  }
  CHECK_THROWS_AS(f_quadrature(cplx(0, 3.5), cplx(0, 1)), DomainError);
  CHECK_THROWS_AS(f_quadrature(0.0, cplx(1, 0)), DomainError);
}

TEST_CASE("f_series forms") {
  for (const auto& r : kRefs) {
    if (r.tau.real() == 0.0) continue;
    CHECK(std::abs(f_series(r.z, r.tau).value - r.value) < 1e-12);
    if (r.z.real() > 0.0) {
      CHECK(std::abs(f_series(r.z, r.tau, FSeriesForm::Hyperbolic).value - r.value) < 1e-12);
    }
  }
  CHECK_THROWS_AS(f_series(0.5, cplx(0, 1)), DomainError);
  CHECK_THROWS_AS(f_series(-0.5, cplx(0.3, 1), FSeriesForm::Hyperbolic), DomainError);
}

TEST_CASE("f_rational closed form") {
  CHECK(std::abs(f_rational(1.0, 1, 1).value - 1.0 / (std::exp(1.0) - 1.0)) < 1e-15);
  for (const auto& r : kRefs) {
    if (r.tau.real() != 0.0) continue;
    const double t = r.tau.imag();
    long m = 0, n = 0;
    if (t == 1.0) m = 1, n = 1;
    if (t == 2.0) m = 2, n = 1;
    if (t == 1.5) m = 3, n = 2;
    if (m == 0) continue;
    CHECK(std::abs(f_rational(r.z, m, n).value - r.value) < 1e-13);
  }
  // z where single terms of the closed form blow up but cancel
  const cplx zs = cplx(0, kPi / 2.0);
  const auto v = f_rational(zs, 3, 2);
  CHECK(v.method == "rational-double-sum");
  CHECK(std::abs(v.value - f_quadrature(zs, cplx(0, 1.5)).value) < 1e-12);
  CHECK(std::abs(f_rational(cplx(1.5, 0.5), 5, 6).value -
                 cplx(0.41747334046567513, -0.14884592955657772)) < 1e-13);
  CHECK_THROWS_AS(f_rational(1.0, 2, 4), DomainError);
  CHECK_THROWS_AS(f_rational(cplx(0, 3.2), 1, 1), DomainError);
}

TEST_CASE("rational consistency grid") {
  const long pairs[][2] = {{1, 1}, {1, 2}, {2, 1}, {3, 2}, {5, 3}};
  for (const auto& p : pairs) {
    const cplx tau(0, static_cast<double>(p[0]) / p[1]);
    for (cplx z : {cplx(0.2), cplx(-1.1, 0.4), cplx(0.6, -1.3), cplx(2.0, 2.5), cplx(-0.3, -2.8)}) {
      CHECK(std::abs(f_rational(z, p[0], p[1]).value - f_quadrature(z, tau).value) < 1e-11);
    }
  }
}

TEST_CASE("f_contour") {
  for (const auto& r : kRefs) {
    if (!strip_check(r.z, r.tau).in_P) continue;
    CHECK(std::abs(f_contour(r.z, r.tau).value - r.value) < 1e-11);
  }
  const cplx tau(0.5, 1.1), z(0.4, 0.3);
  const double eps_max = std::min(kPi / 2, (-kPi / (2.0 * tau)).imag());
  CHECK(std::abs(f_contour(z, tau, eps_max / 2).value - f_contour(z, tau, eps_max / 4).value) < 1e-12);
  CHECK_THROWS_AS(f_contour(cplx(0, 3.0), cplx(0, 0.5)), DomainError);
}

TEST_CASE("F identities on random grids") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    const cplx tau(0.8 * u(rng), 0.5 + 0.6 * (u(rng) + 1.0));
    const cplx z(1.5 * u(rng), 1.5 * u(rng));
    if (!strip_check(z, tau).in_P) continue;
    ++checked;
    const cplx f = f_quadrature(z, tau).value;
    // modular transformation
    CHECK(std::abs(f - kI / tau * f_quadrature(kI * z / tau, -1.0 / tau).value) < 1e-11);
    // reflection z -> -z
    if (strip_check(-z, tau).in_S) {
      CHECK(std::abs(f - f_quadrature(-z, tau).value + kI * z / tau) < 1e-12);
    }
    // multiplication in tau
    for (int n : {2, 3, 5}) {
      cplx s = 0.0;
      for (int k = 0; k < n; ++k) s += f_quadrature((z + kPi * kI * double(n - 2 * k - 1)) / double(n), tau).value;
      CHECK(std::abs(f_quadrature(z, double(n) * tau).value - s / double(n)) < 1e-11);
    }
    if (tau.real() != 0.0) CHECK(std::abs(f_series(z, tau).value - f) < 1e-11);
  }
  CHECK(checked > 15);
}

TEST_CASE("strip geometry") {
  const cplx tau(0.3, 0.8);
  const cplx z(0.5, 0.7);
  for (double a : {0.5, 2.0, 7.0}) CHECK(strip_check(z, a * tau).in_S == strip_check(z, tau).in_S);
  for (cplx w : {cplx(0.5, 0.7), cplx(2.0, -1.0), cplx(-0.1, 2.4), cplx(3.0, 0.1)}) {
    CHECK(strip_check(w, tau).in_P == strip_check(-kI * w / tau, -1.0 / tau).in_P);
  }
  const auto w = lattice_point(0, 0, 1.5);
  CHECK(std::abs(w.w - kI * kPi * (2.0 / 3.0 + 1.0)) < 1e-15);
}
