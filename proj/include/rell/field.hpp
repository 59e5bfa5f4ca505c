#pragma once

// Exact arithmetic in Q and in the quadratic field Q(sqrt(-3)) = Q(w), w = e^{i pi/3}.
// Every singular abscissa of the equations studied here (roots of t, t^3 + 1, t^3 - 8)
// lies in this field.

#include <gmpxx.h>

#include <complex>
#include <optional>
#include <ostream>
#include <string>

namespace rell {

using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
bool is_integer(const Rational& q);
std::optional<Rational> sqrt_exact(const Rational& q);
std::string to_string(const Rational& q);

/// a + b*w with w^2 - w + 1 = 0.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(long v) : a_(v), b_(0) {}  // NOLINT(google-explicit-constructor)
  FieldElement(Rational a, Rational b = 0) : a_(std::move(a)), b_(std::move(b)) {}

  static FieldElement omega() { return FieldElement(0, 1); }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  bool is_rational() const { return sgn(b_) == 0; }
  bool is_integer() const { return is_rational() && rell::is_integer(a_); }

  /// Complex conjugate: w -> 1 - w.
  FieldElement conj() const;
  /// Field norm a^2 + ab + b^2 (= |x|^2).
  Rational norm() const;
  FieldElement inverse() const;

  std::complex<double> to_complex() const;
  std::complex<long double> to_complex_ld() const;

  /// Integer-pair style rendering "(a,b)" meaning a + b*w.
  std::string str() const;

  FieldElement operator-() const { return FieldElement(-a_, -b_); }
  FieldElement& operator+=(const FieldElement& o);
  FieldElement& operator-=(const FieldElement& o);
  FieldElement& operator*=(const FieldElement& o);
  FieldElement& operator/=(const FieldElement& o);

  friend FieldElement operator+(FieldElement x, const FieldElement& y) { return x += y; }
  friend FieldElement operator-(FieldElement x, const FieldElement& y) { return x -= y; }
  friend FieldElement operator*(FieldElement x, const FieldElement& y) { return x *= y; }
  friend FieldElement operator/(FieldElement x, const FieldElement& y) { return x /= y; }
  friend bool operator==(const FieldElement& x, const FieldElement& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const FieldElement& x, const FieldElement& y) { return !(x == y); }
  /// Lexicographic order on (a, b); only used to make outputs deterministic.
  friend bool operator<(const FieldElement& x, const FieldElement& y) {
    if (x.a_ != y.a_) return x.a_ < y.a_;
    return x.b_ < y.b_;
  }

 private:
  Rational a_{0};
  Rational b_{0};
};

std::ostream& operator<<(std::ostream& os, const FieldElement& x);

/// Exact square root in Q(w), if x is a square there.
std::optional<FieldElement> sqrt_exact(const FieldElement& x);

/// True when x/y is a nonzero square of Q(w).
bool same_square_class(const FieldElement& x, const FieldElement& y);

}  // namespace rell
