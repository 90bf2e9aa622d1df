#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stable_extrema/core.hpp"

namespace stable_extrema {

// Monte-Carlo reference for the law of S_1. Every path (or draw block) owns a
// generator seeded from (seed, index), so results do not depend on the
// number of worker threads.

struct SampleBatch {
  Parameters params;
  long n_paths = 0;
  long n_steps = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;
};

struct GofReport {
  double ks_stat = 0.0;
  long n = 0;
  std::string reference;
  bool skipped = false;  // identity not testable for these parameters
};

// i.i.d. copies of X_1 with E exp(i z X_1) = exp(-|z|^alpha e^{i pi gamma sgn(z) / 2})
// (Chambers-Mallows-Stuck; alpha = 2 gives sqrt(2) times a standard normal).
std::vector<double> sample_stable(const Parameters& params, long n, std::uint64_t seed);

// max(0, max_k X_{k/n}) for a random walk of n_steps stable increments of
// scale n_steps^{-1/alpha}. n_steps must be a power of 2.
SampleBatch sample_supremum(const Parameters& params, long n_paths, long n_steps, std::uint64_t seed);

// sup |F_n - F|.
GofReport ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf,
                       std::string reference = "model cdf");
// sup |F_n - G_m|.
GofReport ks_two_sample(std::vector<double> a, std::vector<double> b, std::string reference = "two-sample");

enum class Identity {
  // e1 (S_1 / e2)^alpha  =d  e3^alpha (S~_1 / e4), S~ with (1/alpha, alpha rho)
  ReflectedExponentials,
  // S_1 [e1 prod gamma ratios]^{1/alpha}  =d  e2 prod gamma ratios, C_{k,l} with l > 0
  CklGammaProducts,
};

// Two-sample KS between both sides of the identity, suprema from
// sample_supremum. DomainError outside the identity's parameter range;
// CklGammaProducts with a vanishing fractional part {j/alpha} or {alpha j}
// is reported as skipped. The certificate defaults to detect_ckl(params).
GofReport check_identity_products(const Parameters& params, Identity which, long n, std::uint64_t seed,
                                  long n_steps = 1L << 14, std::optional<CklClass> ckl = std::nullopt);

// Gamma(shape, 1) variate (Marsaglia-Tsang, with the u^{1/a} boost for
// shape < 1). Written out rather than std::gamma_distribution so that draws
// are identical across standard libraries.
double gamma_variate(double shape, std::mt19937_64& g);

}  // namespace stable_extrema
