#include "pole_series.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <utility>

#include "stable_extrema/mellin.hpp"
#include "stable_extrema/specfun.hpp"

namespace stable_extrema::detail {

namespace {

class Mp {
 public:
  explicit Mp(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Mp(Mp&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  Mp(const Mp&) = delete;
  Mp& operator=(const Mp&) = delete;
  ~Mp() { mpfr_clear(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  operator mpfr_ptr() { return v_; }

 private:
  mpfr_t v_;
};

long parity(long e) { return ((e % 2) + 2) % 2; }
long floor_mod(long a, long b) { return ((a % b) + b) % b; }

// alpha = p / q exactly, either given or recovered from the double.
std::optional<std::pair<long, long>> exact_ratio(const Parameters& params) {
  if (const auto& r = params.rational_alpha()) return std::make_pair(r->m, r->n);
  const double a = params.alpha();
  long p0 = 1, q0 = 0, p1 = static_cast<long>(std::floor(a)), q1 = 1;
  double f = a - std::floor(a);
  for (int it = 0; it < 40; ++it) {
    if (std::abs(a - static_cast<double>(p1) / q1) <= 4e-16 * a) return std::make_pair(p1, q1);
    if (f < 1e-300) break;
    const double inv = 1.0 / f;
    const long c = static_cast<long>(std::floor(inv));
    f = inv - c;
    const long p2 = c * p1 + p0, q2 = c * q1 + q0;
    if (q2 > 10000) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
  }
  return std::nullopt;
}

// Index layout of the C_{k,l} residue terms. The coefficient c_{m,n} sits at
// the pole s = m + 1 + alpha n; along a ray one index runs to infinity.
struct Ray {
  long m0, n0, dm, dn;
};

std::vector<Ray> rays_for(const CklClass& c, PoleSide side) {
  std::vector<Ray> r;
  if (c.l > 0) {
    if (side == PoleSide::Left) {
      for (long n = 0; n <= c.k; ++n) r.push_back({-c.l, n, -1, 0});
    } else {
      for (long n = 1; n <= c.k; ++n) r.push_back({0, n, 1, 0});
    }
  } else {
    if (side == PoleSide::Left) {
      for (long m = 1; m <= -c.l; ++m) r.push_back({m, c.k, 0, -1});
    } else {
      for (long m = 0; m <= -c.l; ++m) r.push_back({m, 1, 0, 1});
    }
  }
  return r;
}

// log |1/Gamma(z)|, bounding |sin| by 1 for z <= 0.
double log_rgamma_bound(double z) {
  if (z > 0) return -std::lgamma(z);
  return std::lgamma(1.0 - z) - std::log(kPi);
}

double log_weight(const TermWeight& w, PoleSide side, double s, double x) {
  switch (w.kind) {
    case TermWeight::Density: return 0.0;
    case TermWeight::Derivative: return std::log(std::max(std::abs(s), 1e-300)) - std::log(x);
    case TermWeight::Moment: {
      const double d = side == PoleSide::Left ? w.q + 1.0 - s : s - w.q - 1.0;
      return (w.q + 1.0) * std::log(x) - std::log(d);
    }
  }
  return 0.0;
}

struct Coeff {
  long sign_exp;
  double log_s_bound;
};

// Sign exponent and a bound for log |sine product| at (m, n).
Coeff coeff_shape(const Parameters& p, const CklClass& c, long m, long n) {
  const double a = p.alpha();
  double b = 0.0;
  if (c.l > 0) {
    for (long j = 1; j <= c.l - 1; ++j) b -= std::log(std::abs(sin_pi(j / a)));
    for (long j = 1; j <= c.k - n; ++j) b -= std::log(std::abs(sin_pi(a * j)));
    return {m * (c.k + 1) + n * c.l + 1, b};
  }
  for (long j = 1; j <= -c.k - 1; ++j) b -= std::log(std::abs(sin_pi(a * j)));
  for (long j = 1; j <= -c.l - m; ++j) b -= std::log(std::abs(sin_pi(j / a)));
  return {m * c.k + n * (c.l + 1) + 1, b};
}

class SeriesEngine {
 public:
  SeriesEngine(const Parameters& p, const CklClass& c, PoleSide side, double x, TermWeight w,
               mpfr_prec_t prec)
      : p_(p), c_(c), side_(side), w_(w), prec_(prec), ratio_(exact_ratio(p)),
        x_(prec), alpha_(prec), pi_(prec), xa_(prec), sum_(prec), tmp_(prec), tmp2_(prec) {
    mpfr_set_d(x_, x, MPFR_RNDN);
    if (ratio_) {
      mpfr_set_si(alpha_, ratio_->first, MPFR_RNDN);
      mpfr_div_si(alpha_, alpha_, ratio_->second, MPFR_RNDN);
    } else {
      mpfr_set_d(alpha_, p.alpha(), MPFR_RNDN);
    }
    mpfr_const_pi(pi_, MPFR_RNDN);
    mpfr_pow(xa_, x_, alpha_, MPFR_RNDN);
    mpfr_set_zero(sum_, 1);
  }

  bool rational() const { return ratio_.has_value(); }

  // Adds terms i = 0..count-1 of the ray.
  void add_ray(const Ray& r, long count) {
    const long L = ratio_ ? (r.dm != 0 ? ratio_->first : ratio_->second) : 1;
    std::vector<Mp> rg1, rg2;
    std::vector<char> has1(L, 0), has2(L, 0);
    std::vector<long> prev1(L), prev2(L);
    for (long i = 0; i < L; ++i) {
      rg1.emplace_back(prec_);
      rg2.emplace_back(prec_);
    }
    Mp xpow(prec_), s(prec_), term(prec_), wv(prec_);
    // s = m0 + 1 + alpha n0
    mpfr_mul_si(s, alpha_, r.n0, MPFR_RNDN);
    mpfr_add_si(s, s, r.m0 + 1, MPFR_RNDN);
    mpfr_neg(tmp_, s, MPFR_RNDN);
    mpfr_pow(xpow, x_, tmp_, MPFR_RNDN);

    for (long i = 0; i < count; ++i) {
      const long m = r.m0 + r.dm * i, n = r.n0 + r.dn * i;
      if (i > 0) {
        if (r.dm > 0) { mpfr_div(xpow, xpow, x_, MPFR_RNDN); mpfr_add_si(s, s, 1, MPFR_RNDN); }
        if (r.dm < 0) { mpfr_mul(xpow, xpow, x_, MPFR_RNDN); mpfr_sub_si(s, s, 1, MPFR_RNDN); }
        if (r.dn > 0) { mpfr_div(xpow, xpow, xa_, MPFR_RNDN); mpfr_add(s, s, alpha_, MPFR_RNDN); }
        if (r.dn < 0) { mpfr_mul(xpow, xpow, xa_, MPFR_RNDN); mpfr_sub(s, s, alpha_, MPFR_RNDN); }
      }
      if (ratio_) {
        const long P = ratio_->first, Q = ratio_->second;
        const long cls = i % L;
        // z1 = 1 + n + m / alpha = (P (1 + n) + m Q) / P, z2 = -m - alpha n = -(m Q + n P) / Q
        advance(rg1[cls], has1[cls], prev1[cls], P * (1 + n) + m * Q, P);
        advance(rg2[cls], has2[cls], prev2[cls], -(m * Q + n * P), Q);
        mpfr_mul(term, rg1[cls], rg2[cls], MPFR_RNDN);
      } else {
        direct_rgamma(term, m, n);
      }
      if (mpfr_zero_p(term.get())) continue;
      mpfr_mul(term, term, sine_product(m, n), MPFR_RNDN);
      mpfr_mul(term, term, xpow, MPFR_RNDN);
      apply_weight(term, s, wv);
      if (parity(coeff_shape(p_, c_, m, n).sign_exp)) mpfr_neg(term, term, MPFR_RNDN);
      mpfr_add(sum_, sum_, term, MPFR_RNDN);
    }
  }

  double result() const {
    const double v = mpfr_get_d(sum_.get(), MPFR_RNDN);
    return side_ == PoleSide::Left ? v : -v;
  }

 private:
  void rgamma_exact(mpfr_ptr out, long num, long den) {
    if (num % den == 0 && num / den <= 0) {
      mpfr_set_zero(out, 1);
      return;
    }
    mpfr_set_si(tmp_, num, MPFR_RNDN);
    mpfr_div_si(tmp_, tmp_, den, MPFR_RNDN);
    mpfr_gamma(out, tmp_, MPFR_RNDN);
    mpfr_ui_div(out, 1, out, MPFR_RNDN);
  }

  // 1/Gamma(num/den) from the value at the previous member of the residue
  // class: z -> z + K multiplies by den^K / prod (num_old + t den).
  void advance(Mp& rg, char& has, long& prev, long num, long den) {
    if (!has || mpfr_zero_p(rg.get())) {
      rgamma_exact(rg, num, den);
      has = 1;
      prev = num;
      return;
    }
    const long K = (num - prev) / den;
    if (K > 0) {
      mpfr_set_ui(tmp_, 1, MPFR_RNDN);
      for (long t = 0; t < K; ++t) mpfr_mul_si(tmp_, tmp_, prev + t * den, MPFR_RNDN);
      mpfr_div(rg, rg, tmp_, MPFR_RNDN);
      for (long t = 0; t < K; ++t) mpfr_mul_si(rg, rg, den, MPFR_RNDN);
    } else if (K < 0) {
      for (long t = 1; t <= -K; ++t) mpfr_mul_si(rg, rg, prev - t * den, MPFR_RNDN);
      for (long t = 0; t < -K; ++t) mpfr_div_si(rg, rg, den, MPFR_RNDN);
    }
    prev = num;
  }

  void direct_rgamma(mpfr_ptr out, long m, long n) {
    // 1/Gamma(1 + n + m/alpha) / Gamma(-m - alpha n)
    mpfr_si_div(tmp_, m, alpha_, MPFR_RNDN);
    mpfr_add_si(tmp_, tmp_, 1 + n, MPFR_RNDN);
    if (mpfr_integer_p(tmp_) && mpfr_sgn(tmp_.get()) <= 0) { mpfr_set_zero(out, 1); return; }
    mpfr_gamma(out, tmp_, MPFR_RNDN);
    mpfr_mul_si(tmp2_, alpha_, -n, MPFR_RNDN);
    mpfr_sub_si(tmp2_, tmp2_, m, MPFR_RNDN);
    if (mpfr_integer_p(tmp2_) && mpfr_sgn(tmp2_.get()) <= 0) { mpfr_set_zero(out, 1); return; }
    mpfr_gamma(tmp2_, tmp2_, MPFR_RNDN);
    mpfr_mul(out, out, tmp2_, MPFR_RNDN);
    mpfr_ui_div(out, 1, out, MPFR_RNDN);
  }

  // sin(pi num / den) with exact reduction of the argument.
  void sinpi_ratio(mpfr_ptr out, long num, long den) {
    const long r = floor_mod(num, 2 * den);
    if (r % den == 0) { mpfr_set_zero(out, 1); return; }
    mpfr_mul_si(out, pi_, r, MPFR_RNDN);
    mpfr_div_si(out, out, den, MPFR_RNDN);
    mpfr_sin(out, out, MPFR_RNDN);
  }

  // sin(pi a t) for a = alpha (inv = false) or 1/alpha (inv = true).
  void sinpi_alpha(mpfr_ptr out, long t, bool inv) {
    if (ratio_) {
      const long P = ratio_->first, Q = ratio_->second;
      inv ? sinpi_ratio(out, t * Q, P) : sinpi_ratio(out, t * P, Q);
      return;
    }
    inv ? mpfr_si_div(out, t, alpha_, MPFR_RNDN) : mpfr_mul_si(out, alpha_, t, MPFR_RNDN);
    mpfr_mul(out, out, pi_, MPFR_RNDN);
    mpfr_sin(out, out, MPFR_RNDN);
  }

  mpfr_ptr sine_product(long m, long n) {
    std::pair<long, long> key{m, n};
    if (ratio_) {
      if (c_.l > 0) key.first = floor_mod(m, 2 * ratio_->first);
      else key.second = floor_mod(n, 2 * ratio_->second);
    }
    auto it = sines_.find(key);
    if (it != sines_.end()) return it->second;
    Mp v(prec_), num(prec_), den(prec_);
    mpfr_set_ui(v, 1, MPFR_RNDN);
    auto ratio = [&](long tn, long td, bool inv) {
      sinpi_alpha(num, tn, inv);
      sinpi_alpha(den, td, inv);
      mpfr_mul(v, v, num, MPFR_RNDN);
      mpfr_div(v, v, den, MPFR_RNDN);
    };
    if (c_.l > 0) {
      for (long j = 1; j <= c_.l - 1; ++j) ratio(j + m, j, true);
      for (long j = 1; j <= c_.k - n; ++j) ratio(j + n, j, false);
    } else {
      for (long j = 1; j <= -c_.k - 1; ++j) ratio(j + n, j, false);
      for (long j = 1; j <= -c_.l - m; ++j) ratio(j + m, j, true);
    }
    if (!ratio_) {
      // irrational alpha: no periodicity to exploit, keep the cache small
      if (sines_.size() > 4096) sines_.clear();
    }
    return sines_.emplace(key, std::move(v)).first->second;
  }

  void apply_weight(mpfr_ptr term, mpfr_ptr s, mpfr_ptr wv) {
    switch (w_.kind) {
      case TermWeight::Density: return;
      case TermWeight::Derivative:
        mpfr_mul(term, term, s, MPFR_RNDN);
        mpfr_div(term, term, x_, MPFR_RNDN);
        mpfr_neg(term, term, MPFR_RNDN);
        return;
      case TermWeight::Moment:
        mpfr_set_d(wv, w_.q + 1.0, MPFR_RNDN);
        if (side_ == PoleSide::Left) mpfr_sub(wv, wv, s, MPFR_RNDN);
        else mpfr_sub(wv, s, wv, MPFR_RNDN);
        mpfr_div(term, term, wv, MPFR_RNDN);
        mpfr_set_d(wv, w_.q + 1.0, MPFR_RNDN);
        mpfr_pow(wv, x_, wv, MPFR_RNDN);
        mpfr_mul(term, term, wv, MPFR_RNDN);
        return;
    }
  }

  const Parameters& p_;
  CklClass c_;
  PoleSide side_;
  TermWeight w_;
  mpfr_prec_t prec_;
  std::optional<std::pair<long, long>> ratio_;
  Mp x_, alpha_, pi_, xa_, sum_, tmp_, tmp2_;
  std::map<std::pair<long, long>, Mp> sines_;
};

}  // namespace

SeriesSum ckl_convergent_sum(const Parameters& params, const CklClass& ckl, PoleSide side, double x,
                             TermWeight w, long max_terms, long max_bits) {
  if (!(x > 0.0)) throw DomainError("series needs x > 0");
  if (!satisfies_ckl(params.alpha(), params.rho(), ckl.k, ckl.l)) throw DomainError("invalid C_{k,l} certificate");
  const double a = params.alpha(), lx = std::log(x);
  // Tail terms must fall below exp(stop) in absolute value.
  constexpr double kStopAbs = -62.0;  // ~1e-27
  const auto rays = rays_for(ckl, side);

  // Envelope pass in double: term counts per ray and the largest term.
  std::vector<long> counts;
  double max_log = -INFINITY, grade = 0.0;
  long total = 0;
  for (const auto& r : rays) {
    double prev = INFINITY, ray_max = -INFINITY;
    long i = 0;
    for (;; ++i) {
      if (total + i > max_terms) throw ConvergenceError("C_{k,l} series needs more than the allowed number of terms");
      const long m = r.m0 + r.dm * i, n = r.n0 + r.dn * i;
      const double s = m + 1.0 + a * n;
      const double e = log_rgamma_bound(1.0 + n + m / a) + log_rgamma_bound(-m - a * n) +
                       coeff_shape(params, ckl, m, n).log_s_bound - s * lx + log_weight(w, side, s, x);
      ray_max = std::max(ray_max, e);
      if (i >= 2 && e < prev && e < std::min(kStopAbs, ray_max - 62.0)) break;
      prev = e;
    }
    counts.push_back(i + 1);
    total += i + 1;
    max_log = std::max(max_log, ray_max);
    const long m = r.m0 + r.dm * i, n = r.n0 + r.dn * i;
    grade = std::max(grade, std::abs(m + a * n));
  }
  const double floor_log = std::min(kStopAbs, max_log - 62.0);
  const double bits_d = (max_log - floor_log) / std::log(2.0) + std::log2(static_cast<double>(total) + 1.0) + 32.0;
  const long bits = std::max(64L, static_cast<long>(std::ceil(bits_d)));
  if (bits > max_bits) throw ConvergenceError("C_{k,l} series needs more working precision than allowed");

  SeriesEngine eng(params, ckl, side, x, w, bits);
  if (!eng.rational() && bits > 2048) {
    throw ConvergenceError("C_{k,l} series at irrational alpha limited to 2048 bits");
  }
  for (std::size_t j = 0; j < rays.size(); ++j) eng.add_ray(rays[j], counts[j]);

  SeriesSum out;
  out.value = eng.result();
  out.terms = total;
  out.bits = bits;
  out.grade = grade;
  // rounding in the largest terms plus the envelope tail
  out.abs_err = std::exp(floor_log) * 4.0 * static_cast<double>(rays.size()) +
                std::ldexp(std::exp(std::min(max_log, 700.0)), -static_cast<int>(bits - 16));
  out.abs_err += 4e-16 * std::abs(out.value);
  return out;
}

SeriesSum asymptotic_sum(const std::vector<PoleTerm>& terms, PoleSide side, double x, TermWeight w,
                         double cap) {
  if (!(x > 0.0)) throw DomainError("series needs x > 0");
  SeriesSum out;
  if (terms.empty()) throw DomainError("no poles on this side");
  const double sgn = side == PoleSide::Left ? 1.0 : -1.0;
  const double g0 = std::abs(terms.front().s - 1.0);
  std::vector<double> t;
  std::vector<double> grades;
  for (const auto& pt : terms) {
    double v = pt.residue * std::pow(x, -pt.s);
    switch (w.kind) {
      case TermWeight::Density: break;
      case TermWeight::Derivative: v *= -pt.s / x; break;
      case TermWeight::Moment:
        v *= std::pow(x, w.q + 1.0) / (side == PoleSide::Left ? w.q + 1.0 - pt.s : pt.s - w.q - 1.0);
        break;
    }
    if (!std::isfinite(v)) break;
    t.push_back(sgn * v);
    grades.push_back(std::abs(pt.s - 1.0) - g0);
  }
  if (t.empty()) throw ConvergenceError("asymptotic series overflowed at its first term");

  std::size_t stop = t.size();
  if (cap > 0.0) {
    stop = 0;
    while (stop < t.size() && grades[stop] < cap) ++stop;
  } else {
    // smallest nonzero term; ties at equal grades are grouped
    double best = INFINITY;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] == 0.0) continue;
      if (std::abs(t[i]) < best) {
        best = std::abs(t[i]);
        stop = i;
      }
    }
    while (stop > 0 && stop < t.size() && grades[stop] - grades[stop - 1] < 1e-12) --stop;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < stop; ++i) sum += t[i];
  out.value = sum;
  out.terms = static_cast<long>(stop);
  out.grade = stop > 0 ? grades[stop - 1] : 0.0;
  if (stop < t.size()) {
    double omitted = 0.0;
    for (std::size_t i = stop; i < t.size() && grades[i] - grades[stop] < 1e-12; ++i) omitted += t[i];
    out.abs_err = 3.0 * std::abs(omitted == 0.0 ? t[stop] : omitted);
  } else {
    out.abs_err = 3.0 * std::abs(t.back());
  }
  out.abs_err += 1e-16 * std::abs(sum) * std::sqrt(static_cast<double>(stop) + 1.0);
  return out;
}

std::vector<PoleTerm> generic_poles(const Parameters& params, PoleSide side, double max_grade) {
  const double a = params.alpha(), rho = params.rho();
  std::vector<PoleTerm> v;
  if (side == PoleSide::Left) {
    for (long n = 0; a * n <= max_grade; ++n)
      for (long m = 0; m + a * n <= max_grade; ++m)
        v.push_back({1.0 - a * rho - m - a * n, residue_a(params, m, n)});
  } else {
    // s = m + alpha n (m, n >= 1), residue -b_{m-1,n}
    for (long n = 1; a * (n - 1) <= max_grade; ++n)
      for (long m = 1; (m - 1) + a * (n - 1) <= max_grade; ++m)
        v.push_back({m + a * n, -residue_b(params, m - 1, n)});
  }
  std::sort(v.begin(), v.end(), [](const PoleTerm& p, const PoleTerm& q) { return std::abs(p.s - 1.0) < std::abs(q.s - 1.0); });
  return v;
}

std::vector<PoleTerm> ckl_poles(const Parameters& params, const CklClass& ckl, PoleSide side, double max_grade) {
  const double a = params.alpha();
  std::vector<PoleTerm> v;
  auto coeff = [&](long m, long n) {
    return ckl.l > 0 ? residue_c_plus(params, ckl, m, n) : residue_c_minus(params, ckl, m, n);
  };
  double s0 = NAN;
  for (const auto& r : rays_for(ckl, side)) {
    for (long i = 0;; ++i) {
      const long m = r.m0 + r.dm * i, n = r.n0 + r.dn * i;
      const double s = m + 1.0 + a * n;
      if (std::isnan(s0)) s0 = s;
      if (std::abs(s - 1.0) > max_grade + 2.0 + std::abs(s0 - 1.0)) break;
      v.push_back({s, coeff(m, n)});
    }
  }
  std::sort(v.begin(), v.end(), [](const PoleTerm& p, const PoleTerm& q) { return std::abs(p.s - 1.0) < std::abs(q.s - 1.0); });
  if (!v.empty()) {
    const double g0 = std::abs(v.front().s - 1.0);
    std::erase_if(v, [&](const PoleTerm& p) { return std::abs(p.s - 1.0) - g0 > max_grade; });
  }
  return v;
}

}  // namespace stable_extrema::detail
