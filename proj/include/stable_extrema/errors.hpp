#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace stable_extrema {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// (alpha, rho) outside the admissible set.
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

// alpha in (0,1) with rho in {0,1}: the process or its negative is a
// subordinator and the factorization is trivial.
class SubordinatorError : public AdmissibilityError {
 public:
  using AdmissibilityError::AdmissibilityError;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

class AccuracyError : public Error {
 public:
  using Error::Error;
};

// A sin(pi k alpha)-type denominator became too small (alpha is rational or
// too well approximated by rationals for the requested series).
class SmallDenominatorError : public Error {
 public:
  using Error::Error;
};

// arg z = +-pi for a function cut along the negative real axis.
class BranchCutError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Evaluation point sits on (or within tolerance of) a pole. When known, the
// residue there is attached.
class PoleError : public Error {
 public:
  explicit PoleError(const std::string& what,
                     std::optional<std::complex<double>> residue = std::nullopt)
      : Error(what), residue_(residue) {}

  const std::optional<std::complex<double>>& residue() const noexcept { return residue_; }

 private:
  std::optional<std::complex<double>> residue_;
};

// Barnes G evaluated on its zero lattice -(m tau + n), m,n >= 0.
class PoleOrZeroError : public PoleError {
 public:
  PoleOrZeroError(const std::string& what, long m, long n)
      : PoleError(what), m_(m), n_(n) {}

  long lattice_m() const noexcept { return m_; }
  long lattice_n() const noexcept { return n_; }

 private:
  long m_;
  long n_;
};

}  // namespace stable_extrema
