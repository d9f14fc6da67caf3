#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace szego {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

inline constexpr double kPi = 3.14159265358979323846;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller violated an operation precondition (bad argument, point outside
/// the domain, non-tangential direction, ...).
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// A numerical process failed (singular solve, step underflow, pole hit).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

/// A model left its declared validity region (non-positive kernel numerator).
class ModelValidityError : public Error {
 public:
  explicit ModelValidityError(const std::string& what) : Error(what) {}
};

/// Malformed config text or recipe expression.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

/// Rank-3 complex array with all dimensions equal to n.
class CTensor3 {
 public:
  CTensor3() : n_(0) {}
  explicit CTensor3(int n) : n_(n), data_(static_cast<size_t>(n) * n * n) {}

  Complex& operator()(int a, int b, int c) {
    return data_[(static_cast<size_t>(a) * n_ + b) * n_ + c];
  }
  Complex operator()(int a, int b, int c) const {
    return data_[(static_cast<size_t>(a) * n_ + b) * n_ + c];
  }
  int dim() const { return n_; }

 private:
  int n_;
  std::vector<Complex> data_;
};

}  // namespace szego
