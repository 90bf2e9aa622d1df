#include <cmath>

#include "doctest.h"
#include "stable_extrema/verify.hpp"

using namespace stable_extrema;

TEST_CASE("suite report bookkeeping") {
  SuiteReport r{"demo", {}};
  CHECK_FALSE(r.passed());  // an empty suite proves nothing
  r.add("small", 1e-12, 1e-9);
  CHECK(r.passed());
  r.add("large", 1e-6, 1e-9);
  CHECK_FALSE(r.passed());
  CHECK(r.max_residual() == 1e-6);
  r.add_error("thrown", "boom");
  CHECK(std::isinf(r.max_residual()));
  CHECK(r.checks.back().note == "boom");
}

TEST_CASE("suites on single parameter sets") {
  const auto g = make_params(std::sqrt(2.0), 0.45);
  CHECK(verify_functional_equations(g, {0.5, 2.0}).passed());
  CHECK(verify_quasi_periodicity(g).passed());
  CHECK(verify_mellin_anchors(g).passed());
  CHECK(verify_decay(g).passed());
  CHECK(verify_residues(g, 2).passed());
  const auto pm = verify_phi_methods(make_params(RationalAlpha::make(3, 2), 1.0 / 3.0), {0.7});
  CHECK(pm.passed());
  CHECK(pm.checks.size() == 6);  // double gamma, rational, C_{k,l}, quadrature
  // a tolerance no method can meet is reported, not hidden
  CHECK_FALSE(verify_phi_methods(g, {0.7}, 1e-30).passed());
}

TEST_CASE("small Monte-Carlo suite is reproducible") {
  const MonteCarloConfig cfg{2000, 64, 5, 0.1};
  const auto a = verify_monte_carlo(cfg), b = verify_monte_carlo(cfg);
  REQUIRE(a.checks.size() == 5);
  for (std::size_t i = 0; i < a.checks.size(); ++i) CHECK(a.checks[i].residual == b.checks[i].residual);
}
