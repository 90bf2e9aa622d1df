#pragma once

// Sums of residue terms Res(s) x^{-s} over the poles of M(s) on one side of
// Re s = 1. Private to the density module.

#include <vector>

#include "stable_extrema/core.hpp"

namespace stable_extrema::detail {

enum class PoleSide { Left, Right };

// What multiplies Res(s) x^{-s}:
//   Density     1
//   Derivative  -s / x
//   Moment      x^{q+1} / (q + 1 - s) on the left (integral over [0, x]),
//               x^{q+1} / (s - q - 1) on the right (integral over [x, inf))
struct TermWeight {
  enum Kind { Density, Derivative, Moment } kind = Density;
  double q = 0.0;
};

struct SeriesSum {
  double value = 0.0;
  double abs_err = 0.0;
  long terms = 0;
  long bits = 53;
  double grade = 0.0;  // largest |s - 1| summed
};

// Side sign: p = sum_left Res x^{-s} = -sum_right Res x^{-s}. The returned
// value includes it.
//
// Convergent C_{k,l} series in multiple precision. ConvergenceError when more
// than max_terms terms or max_bits bits would be needed.
SeriesSum ckl_convergent_sum(const Parameters& params, const CklClass& ckl, PoleSide side, double x,
                             TermWeight w, long max_terms = 100000, long max_bits = 65536);

struct PoleTerm {
  double s = 0.0;
  double residue = 0.0;
};

// Double-precision expansion over terms sorted by |s - 1|. cap <= 0: stop
// before the smallest term, err = 3x that term. cap > 0: terms with
// |s - 1| - (distance of the first pole) < cap, err = 3x the first omitted.
SeriesSum asymptotic_sum(const std::vector<PoleTerm>& terms, PoleSide side, double x, TermWeight w,
                         double cap);

// Pole lists sorted by |s - 1|, up to grade max_grade past the first pole.
std::vector<PoleTerm> generic_poles(const Parameters& params, PoleSide side, double max_grade);
std::vector<PoleTerm> ckl_poles(const Parameters& params, const CklClass& ckl, PoleSide side,
                                double max_grade);

}  // namespace stable_extrema::detail
