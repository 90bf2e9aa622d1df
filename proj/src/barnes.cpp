#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "stable_extrema/specfun.hpp"

namespace stable_extrema {

namespace {

constexpr int kEulerMaclaurinTerms = 8;
constexpr long kMaxConstantsM = 1L << 20;

struct Summer {
  cplx sum = 0.0;
  cplx comp = 0.0;
  double scale = 0.0;

  void add(cplx x) {
    // Neumaier summation, componentwise
    auto step = [](double& s, double& c, double v) {
      const double t = s + v;
      if (std::abs(s) >= std::abs(v)) {
        c += (s - t) + v;
      } else {
        c += (v - t) + s;
      }
      s = t;
    };
    double sr = sum.real(), si = sum.imag(), cr = comp.real(), ci = comp.imag();
    step(sr, cr, x.real());
    step(si, ci, x.imag());
    sum = {sr, si};
    comp = {cr, ci};
    scale += std::abs(x);
  }
  cplx value() const { return sum + comp; }
};

// C(tau), D(tau) from the first m terms plus Euler-Maclaurin corrections.
std::pair<cplx, cplx> constants_at(cplx tau, long m, double* scale) {
  Summer c;
  Summer d;
  for (long k = 1; k < m; ++k) {
    const auto ps = polygamma_all(1, static_cast<double>(k) * tau);
    c.add(ps[0]);
    d.add(ps[1]);
  }
  const cplx w = static_cast<double>(m) * tau;
  const auto ps = polygamma_all(2 * kEulerMaclaurinTerms, w);
  c.add(0.5 * ps[0]);
  d.add(0.5 * ps[1]);
  c.add(-(log_gamma(w) - 0.5 * std::log(2.0 * kPi)) / tau);
  d.add(-ps[0] / tau);
  double fact = 1.0;
  cplx taupow = tau;  // tau^(2k-1)
  for (int k = 1; k <= kEulerMaclaurinTerms; ++k) {
    fact *= (2.0 * k - 1.0) * (2.0 * k);
    const double b = bernoulli_2k(k) / fact;
    c.add(-b * taupow * ps[2 * k - 1]);
    d.add(-b * taupow * ps[2 * k]);
    taupow *= tau * tau;
  }
  if (scale) *scale = c.scale + d.scale;
  return {c.value(), d.value()};
}

void check_tau(cplx tau) {
  if (tau == 0.0 || !std::isfinite(tau.real()) || !std::isfinite(tau.imag())) {
    throw DomainError("Barnes G needs a finite nonzero tau");
  }
  if (tau.imag() == 0.0 && tau.real() < 0.0) throw DomainError("Barnes G needs |arg tau| < pi");
}

// Per-tau data: constants and the z-independent parts of each product factor.
struct BarnesTable {
  BarnesConstants k;
  cplx a_tilde;
  cplx b_tilde;
  cplx log_tau;
  std::vector<cplx> lg;    // log Gamma(m tau), index m
  std::vector<cplx> psi0;  // psi(m tau)
  std::vector<cplx> psi1;  // psi'(m tau)
};

BarnesConstants compute_constants(cplx tau, double target_err) {
  check_tau(tau);
  if (!(target_err > 0.0)) throw DomainError("barnes_constants needs target_err > 0");
  long m = static_cast<long>(std::ceil(30.0 / std::abs(tau)));
  double scale = 0.0;
  auto prev = constants_at(tau, m, &scale);
  while (2 * m <= kMaxConstantsM) {
    m *= 2;
    const auto next = constants_at(tau, m, &scale);
    const double diff = std::abs(next.first - prev.first) + std::abs(next.second - prev.second);
    // rounding floor of the partial sums
    const double floor = 8.0 * 2.2e-16 * scale;
    if (diff <= std::max(target_err, floor)) {
      return BarnesConstants{tau, next.first, next.second, m, diff};
    }
    prev = next;
  }
  throw ConvergenceError("Barnes constants did not settle by m = 2^20");
}

std::mutex g_cache_mutex;
std::map<std::pair<double, double>, std::shared_ptr<const BarnesTable>> g_cache;

std::shared_ptr<const BarnesTable> table_for(cplx tau, long m_needed) {
  const auto key = std::make_pair(tau.real(), tau.imag());
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  std::shared_ptr<const BarnesTable> old;
  if (auto it = g_cache.find(key); it != g_cache.end()) {
    if (static_cast<long>(it->second->lg.size()) > m_needed) return it->second;
    old = it->second;
  }
  auto t = std::make_shared<BarnesTable>();
  if (old) {
    *t = *old;
  } else {
    t->k = compute_constants(tau, 1e-14);
    t->log_tau = std::log(tau);
    t->a_tilde = tau / 2.0 * std::log(2.0 * kPi * tau) + 0.5 * t->log_tau - tau * t->k.C;
    t->b_tilde = -tau * t->log_tau - tau * tau * t->k.D;
    t->lg.push_back(0.0);
    t->psi0.push_back(0.0);
    t->psi1.push_back(0.0);
  }
  const long target = std::max(m_needed + 1, 2 * static_cast<long>(t->lg.size()));
  for (long m = static_cast<long>(t->lg.size()); m < target; ++m) {
    const cplx w = static_cast<double>(m) * tau;
    const auto ps = polygamma_all(1, w);
    t->lg.push_back(log_gamma(w));
    t->psi0.push_back(ps[0]);
    t->psi1.push_back(ps[1]);
  }
  if (g_cache.size() > 256) g_cache.clear();
  g_cache[key] = t;
  return t;
}

// Distance from z to the lattice {-(m tau + n): m, n >= 0}, with the indices
// of the nearest point.
double lattice_distance(cplx z, cplx tau, long* m_out, long* n_out) {
  double best = INFINITY;
  auto consider = [&](long m, long n) {
    if (m < 0 || n < 0) return;
    const double d = std::abs(z + static_cast<double>(m) * tau + static_cast<double>(n));
    if (d < best) {
      best = d;
      *m_out = m;
      *n_out = n;
    }
  };
  const cplx mz = -z;
  if (std::abs(tau.imag()) > 1e-14 * std::abs(tau)) {
    const double m_real = mz.imag() / tau.imag();
    const long m0 = std::lround(m_real);
    for (long m = m0 - 1; m <= m0 + 1; ++m) {
      const long n0 = std::lround(mz.real() - static_cast<double>(m) * tau.real());
      for (long n = n0 - 1; n <= n0 + 1; ++n) consider(m, n);
    }
    return best;
  }
  // real positive tau: scan m
  const double x = mz.real();
  if (x < -1.0) return std::abs(z);  // far right of the lattice; any bound > 1e-8 works
  const long m_max = std::min<long>(static_cast<long>(x / tau.real()) + 1, 1000000L);
  for (long m = 0; m <= m_max; ++m) {
    const long n = std::lround(x - static_cast<double>(m) * tau.real());
    consider(m, n);
  }
  return best;
}

}  // namespace

BarnesConstants barnes_constants(cplx tau, double target_err) {
  return compute_constants(tau, target_err);
}

EvalResult log_barnes_g(cplx z, cplx tau) {
  check_tau(tau);
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("log_barnes_g needs a finite argument");
  }
  EvalResult r;
  r.method = "barnes-product";
  long lm = -1, ln = -1;
  const double dist = lattice_distance(z, tau, &lm, &ln);
  if (dist <= 1e-14 * (1.0 + std::abs(z))) {
    throw PoleOrZeroError("G(z; tau) vanishes on its lattice", lm, ln);
  }
  r.near_singular = dist < 1e-8 * (1.0 + std::abs(z));

  const double az = std::abs(z);
  const double at = std::abs(tau);
  const long M = static_cast<long>(std::ceil(std::max(16.0, 3.0 * az + 8.0) / at));
  const auto t = table_for(tau, M);

  Summer s;
  s.add(-t->log_tau);
  s.add(-log_gamma(z));
  s.add(t->a_tilde * z / tau);
  s.add(t->b_tilde * z * z / (2.0 * tau * tau));
  const cplx z2h = 0.5 * z * z;
  for (long m = 1; m < M; ++m) {
    s.add(t->lg[m] - log_gamma(z + static_cast<double>(m) * tau) + z * t->psi0[m] +
          z2h * t->psi1[m]);
  }

  // Tail sum over m >= M by Euler-Maclaurin. The integral of the summand is
  // (1/tau) sum_{j>=3} z^j / j! psi^(j-2)(M tau).
  const cplx w = static_cast<double>(M) * tau;
  const double ratio = az / std::abs(w);
  int jmax = 3;
  if (ratio > 0.0) jmax = std::max(3, static_cast<int>(std::ceil(std::log(1e-19) / std::log(ratio))) + 3);
  const int order = std::max(jmax - 2, 2 * kEulerMaclaurinTerms);
  const auto pw = polygamma_all(order, w);
  const auto pzw = polygamma_all(2 * kEulerMaclaurinTerms - 2, z + w);

  cplx integral = 0.0;
  cplx zp = z * z;
  double fact = 2.0;
  double last_taylor = 0.0;
  for (int j = 3; j <= jmax; ++j) {
    zp *= z;
    fact *= j;
    const cplx term = zp / fact * pw[j - 2];
    integral += term;
    last_taylor = std::abs(term);
  }
  s.add(integral / tau);
  s.add(0.5 * (t->lg[M] - log_gamma(z + w) + z * t->psi0[M] + z2h * t->psi1[M]));

  double fact2 = 1.0;
  cplx taupow = tau;  // tau^(2k-1)
  double last_em = 0.0;
  for (int k = 1; k <= kEulerMaclaurinTerms; ++k) {
    fact2 *= (2.0 * k - 1.0) * (2.0 * k);
    const int r1 = 2 * k - 1;
    const cplx deriv = taupow * (pw[r1 - 1] - pzw[r1 - 1] + z * pw[r1] + z2h * pw[r1 + 1]);
    const cplx term = -bernoulli_2k(k) / fact2 * deriv;
    s.add(term);
    last_em = std::abs(term);
    taupow *= tau * tau;
  }

  r.value = s.value();
  r.terms = M + jmax + kEulerMaclaurinTerms;
  r.abs_err = 4.0 * 2.2e-16 * s.scale + last_taylor / at + last_em + t->k.err_est * (az / at + az * az / (at * at));
  return r;
}

}  // namespace stable_extrema
