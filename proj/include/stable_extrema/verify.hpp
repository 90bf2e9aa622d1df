#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stable_extrema/core.hpp"

namespace stable_extrema {

// Invariant checks shared by the CLI `verify` command and the acceptance
// runner. Every check reports a residual next to the tolerance it must meet.

struct CheckResult {
  std::string label;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;  // error text when the check could not be evaluated
};

struct SuiteReport {
  std::string name;
  std::vector<CheckResult> checks;
  bool passed() const;
  double max_residual() const;
  void add(std::string label, double residual, double tolerance);
  void add_error(std::string label, const std::string& what);
};

// phi at positive real z by every applicable method, pairwise relative
// differences. Methods that throw (not applicable) are left out.
SuiteReport verify_phi_methods(const Parameters& params, const std::vector<double>& zs, double tol = 1e-8);

// z -> 1/z, z -> z^alpha with (1/alpha, alpha rho), the multiplication
// formula with n = 2 (alpha > 1) and phi(z; 1 - rho) phi(-z; rho) on the
// imaginary axis.
SuiteReport verify_functional_equations(const Parameters& params, const std::vector<double>& zs, double tol = 1e-9);
// Same checks at `count` random admissible (alpha, rho, z).
SuiteReport verify_functional_equations_random(int count, std::uint64_t seed, double tol = 1e-9);

// Shifts of w -> phi(exp(w)) by 2 pi i and 2 pi i / alpha.
SuiteReport verify_quasi_periodicity(const Parameters& params, double tol = 1e-9);

// F(z; tau): modular transformation, multiplication in tau, reflection,
// series forms and the contour integral against quadrature on a random
// grid; the rational closed form against quadrature on a fixed grid.
SuiteReport verify_f_identities(std::uint64_t seed = 12345, double tol = 1e-10);

// M(1) = 1 for `params`; with no params, the Brownian closed form through
// the double-gamma formula, the C_{0,1} gamma ratio and M(1) = 1 over a
// fixed parameter list.
SuiteReport verify_mellin_anchors(const std::optional<Parameters>& params);

// Numerical residues of M at the `count` poles nearest the analytic strip
// against the closed-form coefficients (C_{k,l} table when a certificate
// exists, the generic one otherwise).
SuiteReport verify_residues(const Parameters& params, int count = 4, double tol = 1e-6);

// ln|M(1 + i y)| / y against the leading decay rate, relative.
SuiteReport verify_decay(const Parameters& params, double y = 200.0, double tol = 0.15);

// C_{k,l} series against Mellin inversion on `points` log-spaced x in
// [0.05, 20], total mass and the first moment against M(2).
SuiteReport verify_density(const Parameters& params, const CklClass& ckl, int points = 50, double tol_pointwise = 1e-6,
                           double tol_integral = 1e-5);
// Brownian supremum density by inversion against exp(-x^2/4)/sqrt(pi).
SuiteReport verify_brownian_density(double tol = 1e-7);

// KS of simulated suprema against the analytic cdf, and the two product
// identities in distribution, on the standard parameter sets.
struct MonteCarloConfig {
  long n_paths = 100000;
  long n_steps = 1L << 14;
  std::uint64_t seed = 1;
  double tol = 0.02;
};
SuiteReport verify_monte_carlo(const MonteCarloConfig& cfg);

}  // namespace stable_extrema
