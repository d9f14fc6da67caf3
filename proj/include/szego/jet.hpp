#pragma once

#include <array>
#include <memory>
#include <span>

#include "szego/common.hpp"

namespace szego {

// Truncated Taylor polynomial of total degree <= 3 in m formal variables with
// complex coefficients. For Wirtinger calculus in C^n we use m = 2n variables:
// index j in [0,n) stands for d/dz_j and j+n for d/dzbar_j.
class Jet {
 public:
  class Tables;

  static Jet constant(int nvars, Complex value);
  static Jet variable(int nvars, int index, Complex value);

  int nvars() const { return nvars_; }
  Complex value() const { return coeff_[0]; }

  Jet operator+(const Jet& o) const;
  Jet operator-(const Jet& o) const;
  Jet operator*(const Jet& o) const;
  Jet operator/(const Jet& o) const;
  Jet operator-() const;
  Jet operator+(Complex c) const;
  Jet operator-(Complex c) const;
  Jet operator*(Complex c) const;
  friend Jet operator*(Complex c, const Jet& j) { return j * c; }
  friend Jet operator+(Complex c, const Jet& j) { return j + c; }
  friend Jet operator-(Complex c, const Jet& j) { return (-j) + c; }

  /// Composition with a scalar function given by its value and first three
  /// derivatives at this->value().
  Jet compose(const std::array<Complex, 4>& derivs) const;

  Jet exp() const;
  Jet log() const;        // principal branch; error on zero value
  Jet inverse() const;
  Jet pow_int(int k) const;

  /// Formal conjugate under the Wirtinger pairing: swaps variable j with j+n
  /// and conjugates coefficients. nvars must be even.
  Jet wirt_conj() const;

  /// Partial derivative of given order: vars lists variable indices (with
  /// repetition), at most 3 entries. Returns the derivative value, i.e. the
  /// coefficient times the multi-index factorial.
  Complex derivative(std::span<const int> vars) const;
  Complex derivative(std::initializer_list<int> vars) const {
    return derivative(std::span<const int>(vars.begin(), vars.size()));
  }

 private:
  explicit Jet(std::shared_ptr<const Tables> tab);

  int nvars_;
  std::shared_ptr<const Tables> tab_;
  std::vector<Complex> coeff_;
};

}  // namespace szego
