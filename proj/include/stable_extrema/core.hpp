#pragma once

#include <optional>

#include "stable_extrema/errors.hpp"

namespace stable_extrema {

// Exact rational stability index m/n, stored in lowest terms.
struct RationalAlpha {
  long m = 1;
  long n = 1;
  double value = 1.0;

  // Reduces m/n; throws DomainError unless m, n > 0 and m/n lies in (0, 2].
  static RationalAlpha make(long m, long n);

  RationalAlpha inverse() const { return make(n, m); }
  bool operator==(const RationalAlpha&) const = default;
};

// Certificate that rho + k = l / alpha.
struct CklClass {
  long k = 0;
  long l = 1;
  bool exact = false;  // alpha was supplied as an exact rational

  bool operator==(const CklClass&) const = default;
};

// Validated parameters of a strictly stable process, parametrized by the
// stability index alpha and the positivity parameter rho = P(X_1 > 0).
// The skewness beta and gamma = alpha (1 - 2 rho) are cached.
class Parameters {
 public:
  double alpha() const noexcept { return alpha_; }
  double rho() const noexcept { return rho_; }
  double gamma() const noexcept { return gamma_; }
  double beta() const noexcept { return beta_; }
  const std::optional<RationalAlpha>& rational_alpha() const noexcept { return rational_; }

  bool is_brownian() const noexcept { return alpha_ == 2.0; }
  bool is_cauchy() const noexcept { return alpha_ == 1.0; }

 private:
  friend Parameters make_params(double alpha, double rho);
  friend Parameters make_params(const RationalAlpha& alpha, double rho);

  double alpha_ = 1.0;
  double rho_ = 0.5;
  double gamma_ = 0.0;
  double beta_ = 0.0;
  std::optional<RationalAlpha> rational_;
};

// Admissible set: alpha in (0,1) x rho in (0,1); alpha = 1, rho = 1/2;
// alpha in (1,2) x rho in [1 - 1/alpha, 1/alpha]; plus the Brownian limit
// alpha = 2, rho = 1/2. Interval ends are matched with a 1e-12 slack so
// that decimal inputs such as rho = 1/3 at alpha = 3/2 are accepted.
Parameters make_params(double alpha, double rho);
// Same, but alpha is exact; this is the only way to reach rational-alpha
// formulas.
Parameters make_params(const RationalAlpha& alpha, double rho);

// rho = 1/2 + atan(beta tan(pi alpha / 2)) / (pi alpha).
double rho_from_beta(double alpha, double beta);

inline constexpr double kDefaultCklTolerance = 1e-10;
inline constexpr long kCklSearchLimit = 64;

// Searches |k|, |l| <= 64 for rho + k = l / alpha within tol. With an exact
// rational alpha = m/n the answer is normalized to 0 <= k < n, 1 <= l < m.
// Otherwise the pair with the smallest k >= 0 is returned, or failing that
// the pair with the smallest |k| + |l|.
std::optional<CklClass> detect_ckl(const Parameters& params,
                                   const std::optional<RationalAlpha>& alpha_as_rational,
                                   double tol = kDefaultCklTolerance);
// Uses the rational alpha stored in params, if any.
std::optional<CklClass> detect_ckl(const Parameters& params, double tol = kDefaultCklTolerance);

// True when rho + k = l / alpha holds within tol.
bool satisfies_ckl(double alpha, double rho, long k, long l, double tol = kDefaultCklTolerance);

// Dual process -X: (alpha, 1 - rho). C_{k,l} maps to C_{-k-1,-l}.
Parameters dual(const Parameters& params);
CklClass dual(const CklClass& ckl);

// (1/alpha, alpha rho). C_{k,l} maps to C_{-l,-k}.
Parameters inverse_alpha(const Parameters& params);
CklClass inverse_alpha(const CklClass& ckl);

}  // namespace stable_extrema
