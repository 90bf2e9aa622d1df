#include <cmath>

#include "doctest.h"
#include "stable_extrema/specfun.hpp"
#include "test_util.hpp"

using namespace stable_extrema;
using test_util::log_distance;
using test_util::rel_err;

TEST_CASE("clausen") {
  CHECK(clausen(0.0) == 0.0);
  CHECK(clausen(kPi) == 0.0);
  CHECK(std::abs(clausen(kPi / 2) - 0.915965594177219) < 1e-14);
  // reference values from direct summation of sin(n t)/n^2
  CHECK(std::abs(clausen(1.0) - 1.0139591323607685) < 1e-14);
  CHECK(std::abs(clausen(0.01) - 0.056051715748776748) < 1e-14);
  for (double t : {0.1, 0.7, 2.0, 3.1, 5.5, -4.0, 17.3}) {
    CHECK(clausen(-t) == -clausen(t));
    CHECK(std::abs(clausen(t + 2 * kPi) - clausen(t)) < 1e-14);
  }
}

TEST_CASE("qpochhammer") {
  CHECK(qpochhammer(cplx(0.3, 0.2), 0.5, 0) == cplx(1.0));
  CHECK(std::abs(qpochhammer_inf(0.5, 0.5) - 0.288788095086602) < 1e-13);
  const cplx a(0.3, 0.1);
  const cplx q = 0.4;
  const cplx lhs = qpochhammer_inf(a, q) / qpochhammer_inf(a * std::pow(q, 5), q);
  CHECK(std::abs(lhs - qpochhammer(a, q, 5)) < 1e-14);
  const cplx q2(0.3, 0.6);
  for (long n : {0, 1, 3, 7}) {
    for (long m : {0, 2, 5}) {
      const cplx prod = qpochhammer(a, q2, n) * qpochhammer(a * std::pow(q2, n), q2, m);
      CHECK(rel_err(prod, qpochhammer(a, q2, n + m)) < 1e-14);
    }
  }
  CHECK_THROWS_AS(qpochhammer_inf(0.5, 1.0), ConvergenceError);
}

TEST_CASE("polygamma and log_gamma") {
  CHECK(std::abs(polygamma(0, 1.0) + 0.57721566490153286061) < 1e-15);
  CHECK(std::abs(polygamma(0, 2.0) - polygamma(0, 1.0) - 1.0) < 1e-15);
  CHECK(std::abs(polygamma(1, 1.0) - kPi * kPi / 6) < 1e-14);
  CHECK(rel_err(polygamma(2, cplx(0.3, 2)), cplx(0.25972863609064406155, -0.056859710283508986033)) < 1e-13);
  CHECK(rel_err(polygamma(4, cplx(-2.5, 0.5)), cplx(-0.052118778696378732893, -186.73601846639608147)) < 1e-13);
  CHECK(rel_err(polygamma(3, cplx(7, -3)), cplx(0.001501519105251637802, 0.0052044101696456212936)) < 1e-13);
  CHECK(rel_err(polygamma(0, -0.7), cplx(-2.0739527936287037831)) < 1e-14);
  CHECK_THROWS_AS(polygamma(0, -3.0), PoleError);
  CHECK_THROWS_AS(polygamma(5, 1.0), DomainError);

  CHECK(std::abs(log_gamma(cplx(0.3, 2)) - cplx(-2.3594493559375710212, -0.91690761351866975555)) < 1e-14);
  CHECK(std::abs(log_gamma(cplx(-2.5, 0.5)) - cplx(-0.93508562129827747868, -8.8709628852474591986)) < 1e-13);
  CHECK(std::abs(log_gamma(cplx(-5.5, 1e-3)) - cplx(-4.5178370256595570018, -18.847763010203761513)) < 1e-13);
  CHECK(rel_err(log_gamma(cplx(40, -300)), cplx(-244.90702905054253492, -1470.5883790561564668)) < 1e-14);
  CHECK(rel_err(log_gamma(cplx(-20.3, 15)), cplx(-83.513934945589864455, -18.683767478411007086)) < 1e-13);
  CHECK_THROWS_AS(log_gamma(0.0), PoleError);

  CHECK(rgamma(-2.0) == 0.0);
  CHECK(std::abs(rgamma(0.5) - 1 / std::sqrt(kPi)) < 1e-15);
  CHECK(std::abs(rgamma(-0.5) + 0.5 / std::sqrt(kPi)) < 1e-15);
  CHECK(sin_pi(3.0) == 0.0);
  CHECK(cos_pi(2.5) == 0.0);
}

TEST_CASE("barnes constants") {
  const auto c = barnes_constants(0.7, 1e-14);
  CHECK(c.m_used >= static_cast<long>(std::ceil(30 / 0.7)));
  CHECK(c.err_est < 1e-12);
  const cplx tau(0.4, 0.9);
  const auto a = barnes_constants(tau);
  const auto b = barnes_constants(std::conj(tau));
  CHECK(std::abs(a.C - std::conj(b.C)) < 1e-13);
  CHECK(std::abs(a.D - std::conj(b.D)) < 1e-13);
}

TEST_CASE("log_barnes_g anchors") {
  CHECK(std::abs(log_barnes_g(1.0, 0.83).value) < 1e-12);
  CHECK(log_distance(log_barnes_g(3.0, 1.0).value, 0.0) < 1e-12);
  CHECK(log_distance(log_barnes_g(2.0, 1.0).value, 0.0) < 1e-12);
  // tau = 1 is the classical Barnes G function
  CHECK(log_distance(log_barnes_g(2.5, 1.0).value, -0.053850349200240518071) < 1e-12);
  CHECK(log_distance(log_barnes_g(cplx(1.5, 2), 1.0).value,
                     cplx(0.36484896678394086428, -1.5345379960690983111)) < 1e-12);
  try {
    log_barnes_g(cplx(-2.0 * 0.7 - 1.0, 0), 0.7);
    FAIL("expected PoleOrZeroError");
  } catch (const PoleOrZeroError& e) {
    CHECK(e.lattice_m() == 2);
    CHECK(e.lattice_n() == 1);
  }
  CHECK(log_barnes_g(cplx(-1.4 - 1.0 + 1e-10, 0), 0.7).near_singular);
}

TEST_CASE("log_barnes_g quasi-periodicity") {
  for (cplx tau : {cplx(0.7), cplx(1.5), cplx(0.3, 0.8), cplx(-0.5, 1.2), cplx(2.0)}) {
    for (cplx z : {cplx(1.3), cplx(0.2, 0.5), cplx(-1.7, 2.2), cplx(3.5, -4.0), cplx(-0.4, -0.1)}) {
      const cplx g = log_barnes_g(z, tau).value;
      const cplx r1 = log_barnes_g(z + 1.0, tau).value - log_gamma(z / tau) - g;
      CHECK(log_distance(r1, 0.0) < 1e-11);
      const cplx r2 = log_barnes_g(z + tau, tau).value - g - log_gamma(z) -
                      (tau - 1.0) / 2.0 * std::log(2 * kPi) - (0.5 - z) * std::log(tau);
      CHECK(log_distance(r2, 0.0) < 1e-11);
    }
  }
}

TEST_CASE("log_barnes_g reflection with q-Pochhammer") {
  for (cplx tau : {cplx(0.3, 0.8), cplx(-0.4, 1.1), cplx(0.9, 0.6)}) {
    const cplx q = std::exp(2.0 * kPi * kI * tau);
    for (cplx z : {cplx(0.1), cplx(0.3, 0.2), cplx(-0.25, 0.1)}) {
      const cplx lhs = std::log(-2.0 * kPi * kI * tau) + log_barnes_g(0.5 + z, tau).value +
                       log_barnes_g(0.5 - z, -tau).value;
      const cplx rhs = std::log(qpochhammer_inf(-std::exp(2.0 * kPi * kI * z), q) / qpochhammer_inf(q, q));
      CHECK(log_distance(lhs, rhs) < 1e-10);
    }
  }
}

TEST_CASE("log_barnes_g transformation tau -> 1/tau") {
  for (cplx tau : {cplx(0.3, 0.8), cplx(1.2, 0.5), cplx(-0.6, 0.9)}) {
    for (cplx z : {cplx(0.7), cplx(0.4, 0.3), cplx(1.6, -0.5)}) {
      const cplx lt = std::log(tau);
      const cplx rhs = z / 2.0 * (1.0 - 1.0 / tau) * std::log(2 * kPi) +
                       (-z * z / (2.0 * tau) + z / 2.0 * (1.0 + 1.0 / tau) - 1.0) * lt +
                       log_barnes_g(z / tau, 1.0 / tau).value;
      CHECK(log_distance(log_barnes_g(z, tau).value, rhs) < 1e-10);
    }
  }
}
