#pragma once

// Dense univariate polynomials and rational functions over an exact field F.
// F must be default-constructible to zero, constructible from long, and provide
// field arithmetic, equality and is_zero().

#include <cassert>
#include <utility>
#include <vector>

#include "rell/errors.hpp"

namespace rell {

template <class F>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(const F& constant) : c_{constant} { trim(); }  // NOLINT(google-explicit-constructor)

  static Polynomial monomial(const F& coeff, int degree) {
    std::vector<F> c(static_cast<std::size_t>(degree) + 1);
    c.back() = coeff;
    return Polynomial(std::move(c));
  }
  static Polynomial variable() { return monomial(F(1), 1); }

  /// Polynomial with the given roots (with repetition) and leading coefficient.
  static Polynomial from_roots(const std::vector<F>& roots, const F& lead = F(1)) {
    Polynomial p(lead);
    for (const F& r : roots) p *= Polynomial(std::vector<F>{-r, F(1)});
    return p;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }

  F coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return F{};
    return c_[static_cast<std::size_t>(i)];
  }
  const std::vector<F>& coefficients() const { return c_; }
  F leading() const { return c_.empty() ? F{} : c_.back(); }

  /// Lowest power with a nonzero coefficient; -1 for the zero polynomial.
  int valuation() const {
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (!c_[i].is_zero()) return static_cast<int>(i);
    }
    return -1;
  }

  Polynomial monic() const {
    if (is_zero()) return *this;
    return *this * (F(1) / leading());
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<F> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * F(static_cast<long>(i));
    return Polynomial(std::move(d));
  }

  F operator()(const F& x) const {
    F acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  /// p(t + shift), by repeated synthetic division.
  Polynomial shifted(const F& shift) const {
    std::vector<F> a = c_;
    const int n = static_cast<int>(a.size());
    for (int i = 0; i < n; ++i) {
      for (int j = n - 2; j >= i; --j) {
        a[static_cast<std::size_t>(j)] += shift * a[static_cast<std::size_t>(j) + 1];
      }
    }
    return Polynomial(std::move(a));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  Polynomial& operator*=(const Polynomial& o) {
    *this = *this * o;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(const Polynomial& a) {
    std::vector<F> c = a.c_;
    for (F& x : c) x = -x;
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<F> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(const Polynomial& a, const F& s) {
    if (s.is_zero()) return {};
    std::vector<F> c = a.c_;
    for (F& x : c) x *= s;
    return Polynomial(std::move(c));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  std::vector<F> c_;
};

/// Euclidean division: a = q*b + r with deg r < deg b.
template <class F>
std::pair<Polynomial<F>, Polynomial<F>> divrem(const Polynomial<F>& a, const Polynomial<F>& b) {
  if (b.is_zero()) throw Error("polynomial division by zero");
  std::vector<F> r = a.coefficients();
  const int db = b.degree();
  const int da = a.degree();
  if (da < db) return {Polynomial<F>{}, a};
  std::vector<F> q(static_cast<std::size_t>(da - db) + 1);
  const F inv_lead = F(1) / b.leading();
  for (int i = da; i >= db; --i) {
    const F f = r[static_cast<std::size_t>(i)] * inv_lead;
    q[static_cast<std::size_t>(i - db)] = f;
    if (f.is_zero()) continue;
    for (int j = 0; j <= db; ++j) {
      r[static_cast<std::size_t>(i - db + j)] -= f * b.coeff(j);
    }
  }
  r.resize(static_cast<std::size_t>(db));
  return {Polynomial<F>(std::move(q)), Polynomial<F>(std::move(r))};
}

template <class F>
Polynomial<F> operator/(const Polynomial<F>& a, const Polynomial<F>& b) {
  return divrem(a, b).first;
}

template <class F>
Polynomial<F> operator%(const Polynomial<F>& a, const Polynomial<F>& b) {
  return divrem(a, b).second;
}

/// Monic gcd; gcd(0, 0) = 0.
template <class F>
Polynomial<F> gcd(Polynomial<F> a, Polynomial<F> b) {
  while (!b.is_zero()) {
    Polynomial<F> r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// Quotient in canonical form: gcd(num, den) = 1 and den monic.
template <class F>
class RationalFunction {
 public:
  RationalFunction() : den_(F(1)) {}
  RationalFunction(const F& c) : num_(c), den_(F(1)) {}  // NOLINT(google-explicit-constructor)
  RationalFunction(Polynomial<F> num) : num_(std::move(num)), den_(F(1)) {}  // NOLINT
  RationalFunction(Polynomial<F> num, Polynomial<F> den) : num_(std::move(num)), den_(std::move(den)) {
    normalize();
  }

  static RationalFunction variable() { return RationalFunction(Polynomial<F>::variable()); }

  const Polynomial<F>& numerator() const { return num_; }
  const Polynomial<F>& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  RationalFunction derivative() const {
    return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  F operator()(const F& x) const {
    const F d = den_(x);
    if (d.is_zero()) throw SingularInput("rational function evaluated at a pole");
    return num_(x) / d;
  }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ - b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a) {
    RationalFunction r = a;
    r.num_ = -r.num_;
    return r;
  }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw Error("rational function division by zero");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
  }
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

 private:
  void normalize() {
    if (den_.is_zero()) throw Error("rational function with zero denominator");
    if (num_.is_zero()) {
      den_ = Polynomial<F>(F(1));
      return;
    }
    Polynomial<F> g = gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
    const F lead = den_.leading();
    if (lead != F(1)) {
      const F inv = F(1) / lead;
      num_ = num_ * inv;
      den_ = den_ * inv;
    }
  }

  Polynomial<F> num_;
  Polynomial<F> den_;
};

}  // namespace rell
