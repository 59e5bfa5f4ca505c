#include "rell/field.hpp"

#include <cmath>
#include <sstream>

#include "rell/errors.hpp"

namespace rell {

Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

std::optional<Rational> sqrt_exact(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (sgn(q) == 0) return Rational(0);
  const mpz_class& n = q.get_num();
  const mpz_class& d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) {
    return std::nullopt;
  }
  mpz_class rn;
  mpz_class rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& q) { return q.get_str(); }

FieldElement FieldElement::conj() const { return FieldElement(a_ + b_, -b_); }

Rational FieldElement::norm() const { return a_ * a_ + a_ * b_ + b_ * b_; }

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw Error("division by zero in Q(sqrt(-3))");
  Rational n = norm();
  FieldElement c = conj();
  return FieldElement(c.a_ / n, c.b_ / n);
}

std::complex<double> FieldElement::to_complex() const {
  const double a = a_.get_d();
  const double b = b_.get_d();
  return {a + 0.5 * b, b * (std::sqrt(3.0) / 2.0)};
}

std::complex<long double> FieldElement::to_complex_ld() const {
  // mpq -> long double through a quotient of mpz -> long double would lose range;
  // two doubles are enough for root reconstruction.
  const long double a = a_.get_d();
  const long double b = b_.get_d();
  return {a + 0.5L * b, b * (std::sqrt(3.0L) / 2.0L)};
}

std::string FieldElement::str() const {
  std::ostringstream os;
  os << "(" << a_.get_str() << "," << b_.get_str() << ")";
  return os.str();
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
  // (a + bw)(c + dw) = ac - bd + (ad + bc + bd) w, using w^2 = w - 1.
  Rational ac = a_ * o.a_;
  Rational bd = b_ * o.b_;
  Rational mid = a_ * o.b_ + b_ * o.a_ + bd;
  a_ = ac - bd;
  b_ = mid;
  return *this;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) { return *this *= o.inverse(); }

std::ostream& operator<<(std::ostream& os, const FieldElement& x) { return os << x.str(); }

std::optional<FieldElement> sqrt_exact(const FieldElement& x) {
  if (x.is_zero()) return FieldElement(0);
  // Work in the basis A + B sqrt(-3), sqrt(-3) = 2w - 1.
  const Rational A = x.a() + x.b() / 2;
  const Rational B = x.b() / 2;
  auto n = sqrt_exact(Rational(A * A + 3 * B * B));
  if (!n) return std::nullopt;
  auto build = [&](const Rational& C, const Rational& D) {
    // C + D sqrt(-3) = (C - D) + 2D w
    return FieldElement(C - D, 2 * D);
  };
  for (const Rational& m : {Rational(*n), Rational(-*n)}) {
    auto C = sqrt_exact(Rational((A + m) / 2));
    if (!C) continue;
    if (sgn(*C) != 0) {
      FieldElement y = build(*C, B / (2 * *C));
      if (y * y == x) return y;
    } else {
      auto D = sqrt_exact(Rational((m - A) / 6));
      if (!D) continue;
      FieldElement y = build(0, *D);
      if (y * y == x) return y;
    }
  }
  return std::nullopt;
}

bool same_square_class(const FieldElement& x, const FieldElement& y) {
  if (x.is_zero() || y.is_zero()) return false;
  return sqrt_exact(x / y).has_value();
}

}  // namespace rell
