#pragma once

#include <complex>
#include <numbers>
#include <string>

namespace stable_extrema {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Value of a numerical evaluation together with its bookkeeping.
struct EvalResult {
  cplx value{};
  double abs_err = 0.0;  // estimated absolute error, always >= 0
  long terms = 0;        // series terms or quadrature nodes used
  std::string method;
  bool near_singular = false;  // evaluated close to a pole or lattice zero

  double real() const { return value.real(); }
};

}  // namespace stable_extrema
