#include "stable_extrema/mc_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "stable_extrema/parallel.hpp"
#include "stable_extrema/types.hpp"

namespace stable_extrema {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Generator for stream `index` of `seed`; `tag` separates unrelated uses.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed ^ splitmix64(tag)) + index));
}

// uniform on the open interval (0, 1)
double uniform(std::mt19937_64& g) { return (static_cast<double>(g() >> 11) + 0.5) * 0x1p-53; }
double exponential(std::mt19937_64& g) { return -std::log(uniform(g)); }

class StableDraw {
 public:
  explicit StableDraw(const Parameters& p)
      : a_(p.alpha()), b_(kPi * (p.rho() - 0.5)), brownian_(p.alpha() == 2.0), cauchy_(p.alpha() == 1.0) {}

  double operator()(std::mt19937_64& g) {
    if (brownian_) {
      // Box-Muller, both outputs used
      if (have_spare_) {
        have_spare_ = false;
        return spare_;
      }
      const double r = std::sqrt(4.0 * exponential(g));  // sqrt(2) * sqrt(-2 log u)
      const double t = 2.0 * kPi * uniform(g);
      spare_ = r * std::sin(t);
      have_spare_ = true;
      return r * std::cos(t);
    }
    const double u = kPi * (uniform(g) - 0.5);
    if (cauchy_) return std::tan(u);
    const double w = exponential(g);
    const double v = a_ * (u + b_);
    // sin(v) / cos(u)^{1/a} * (cos(u - v) / w)^{(1-a)/a}
    return std::sin(v) * std::exp(((1.0 - a_) * std::log(std::cos(u - v) / w) - std::log(std::cos(u))) / a_);
  }

 private:
  double a_, b_;
  bool brownian_, cauchy_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

constexpr std::uint64_t kTagStable = 1, kTagPath = 2, kTagAux = 3;
constexpr long kBlock = 4096;

double frac(double x) { return x - std::floor(x); }

}  // namespace

double gamma_variate(double shape, std::mt19937_64& g) {
  if (!(shape > 0.0)) throw DomainError("gamma shape must be positive");
  if (shape < 1.0) return gamma_variate(shape + 1.0, g) * std::pow(uniform(g), 1.0 / shape);
  const double d = shape - 1.0 / 3.0, c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      // standard normal by the polar method
      double s, u1, u2;
      do {
        u1 = 2.0 * uniform(g) - 1.0;
        u2 = 2.0 * uniform(g) - 1.0;
        s = u1 * u1 + u2 * u2;
      } while (s >= 1.0 || s == 0.0);
      x = u1 * std::sqrt(-2.0 * std::log(s) / s);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform(g);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::vector<double> sample_stable(const Parameters& params, long n, std::uint64_t seed) {
  if (n < 0) throw DomainError("sample count must be nonnegative");
  std::vector<double> out(static_cast<std::size_t>(n));
  const long blocks = (n + kBlock - 1) / kBlock;
  parallel_for(static_cast<std::size_t>(blocks), [&](std::size_t b) {
    auto g = stream(seed, kTagStable, b);
    StableDraw draw(params);
    const long lo = static_cast<long>(b) * kBlock, hi = std::min(n, lo + kBlock);
    for (long i = lo; i < hi; ++i) out[i] = draw(g);
  });
  return out;
}

SampleBatch sample_supremum(const Parameters& params, long n_paths, long n_steps, std::uint64_t seed) {
  if (n_paths < 0) throw DomainError("path count must be nonnegative");
  if (n_steps < 1 || (n_steps & (n_steps - 1)) != 0) throw DomainError("n_steps must be a power of 2");
  SampleBatch batch{params, n_paths, n_steps, seed, std::vector<double>(static_cast<std::size_t>(n_paths))};
  const double scale = std::pow(static_cast<double>(n_steps), -1.0 / params.alpha());
  parallel_for(static_cast<std::size_t>(n_paths), [&](std::size_t i) {
    auto g = stream(seed, kTagPath, i);
    StableDraw draw(params);
    double x = 0.0, m = 0.0;
    for (long k = 0; k < n_steps; ++k) {
      x += draw(g);
      m = std::max(m, x);
    }
    batch.values[i] = m * scale;
  });
  return batch;
}

GofReport ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf, std::string reference) {
  GofReport r{0.0, static_cast<long>(samples.size()), std::move(reference), false};
  if (samples.empty()) return r;
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  std::vector<double> f(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) { f[i] = cdf(samples[i]); });
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    d = std::max({d, (i + 1) / n - f[i], f[i] - i / n});
  }
  r.ks_stat = std::clamp(d, 0.0, 1.0);
  return r;
}

GofReport ks_two_sample(std::vector<double> a, std::vector<double> b, std::string reference) {
  GofReport r{0.0, static_cast<long>(std::min(a.size(), b.size())), std::move(reference), false};
  if (a.empty() || b.empty()) return r;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  r.ks_stat = d;
  return r;
}

GofReport check_identity_products(const Parameters& params, Identity which, long n, std::uint64_t seed, long n_steps,
                                  std::optional<CklClass> ckl) {
  const double a = params.alpha();
  std::vector<double> lhs(static_cast<std::size_t>(n)), rhs(static_cast<std::size_t>(n));

  if (which == Identity::ReflectedExponentials) {
    if (!((a > 0.5 && a < 1.0) || (a > 1.0 && a < 2.0))) throw DomainError("identity needs alpha in (1/2, 1) or (1, 2)");
    const auto s = sample_supremum(params, n, n_steps, splitmix64(seed ^ 0x51));
    const auto st = sample_supremum(inverse_alpha(params), n, n_steps, splitmix64(seed ^ 0x52));
    for (long i = 0; i < n; ++i) {
      auto g = stream(seed, kTagAux, static_cast<std::uint64_t>(i));
      const double e1 = exponential(g), e2 = exponential(g), e3 = exponential(g), e4 = exponential(g);
      lhs[i] = e1 * std::pow(s.values[i] / e2, a);
      rhs[i] = std::pow(e3, a) * st.values[i] / e4;
    }
    return ks_two_sample(std::move(lhs), std::move(rhs), "e1 (S/e2)^alpha vs e3^alpha (S~/e4)");
  }

  const auto c = ckl ? ckl : detect_ckl(params);
  if (ckl && !satisfies_ckl(a, params.rho(), ckl->k, ckl->l)) throw DomainError("certificate does not hold for these parameters");
  if (!c || c->l <= 0) throw DomainError("identity needs a C_{k,l} certificate with l > 0");
  std::vector<double> left_shapes, right_shapes;
  for (long j = 1; j <= c->l - 1; ++j) left_shapes.push_back(frac(j / a));
  for (long j = 1; j <= c->k; ++j) right_shapes.push_back(frac(a * j));
  for (double f : left_shapes) {
    if (f < 1e-12 || f > 1.0 - 1e-12) return {0.0, 0, "skipped: {j/alpha} = 0 makes a gamma factor degenerate", true};
  }
  for (double f : right_shapes) {
    if (f < 1e-12 || f > 1.0 - 1e-12) return {0.0, 0, "skipped: {alpha j} = 0 makes a gamma factor degenerate", true};
  }
  const auto s = sample_supremum(params, n, n_steps, splitmix64(seed ^ 0x53));
  for (long i = 0; i < n; ++i) {
    auto g = stream(seed, kTagAux, static_cast<std::uint64_t>(i));
    double left = exponential(g);
    for (double f : left_shapes) left *= gamma_variate(f, g) / gamma_variate(1.0 - f, g);
    double right = exponential(g);
    for (double f : right_shapes) right *= gamma_variate(1.0 - f, g) / gamma_variate(f, g);
    lhs[i] = s.values[i] * std::pow(left, 1.0 / a);
    rhs[i] = right;
  }
  return ks_two_sample(std::move(lhs), std::move(rhs), "S [e1 prod gamma ratios]^{1/alpha} vs e2 prod gamma ratios");
}

}  // namespace stable_extrema
