#include "rell/kovacic.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "rell/errors.hpp"

namespace rell::kovacic {

RatFunc to_normal_form(const Poly& a2, const Poly& a1, const Poly& a0) {
  if (a2.is_zero()) throw Error("normal form needs a nonzero leading coefficient");
  const RatFunc p(a1, a2);
  const RatFunc q(a0, a2);
  const RatFunc quarter(FieldElement(make_rational(1, 4)));
  const RatFunc half(FieldElement(make_rational(1, 2)));
  return quarter * p * p + half * p.derivative() - q;
}

RatFunc to_normal_form(const variational::LinearODE2& e) {
  if (!e.is_exact()) throw Error("normal form needs exact coefficients");
  return to_normal_form(e.a2(), e.a1(), e.a0());
}

PoleProfile pole_profile(const RatFunc& r) {
  PoleProfile out;
  if (r.is_zero()) {
    out.infinity_order = 1000;
    return out;
  }
  for (const auto& [root, mult] : factor(r.denominator()).roots) out.finite.push_back({root, mult});
  out.infinity_order = r.denominator().degree() - r.numerator().degree();
  return out;
}

// ---------------------------------------------------------------------------------------------
// Surds

bool Surd::is_rational() const {
  return std::all_of(radicals.begin(), radicals.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

bool Surd::is_nonnegative_integer() const {
  return is_rational() && rational.is_integer() && rational.a() >= 0;
}

std::string Surd::str(const SquareClasses& classes) const {
  std::string s = rational.str();
  for (const auto& [id, c] : radicals) {
    if (c.is_zero()) continue;
    s += " + " + c.str() + "*sqrt" + classes.representative(id).str();
  }
  return s;
}

Surd operator+(Surd a, const Surd& b) {
  a.rational += b.rational;
  for (const auto& [id, c] : b.radicals) a.radicals[id] += c;
  return a;
}

Surd operator-(Surd a, const Surd& b) {
  a.rational -= b.rational;
  for (const auto& [id, c] : b.radicals) a.radicals[id] -= c;
  return a;
}

Surd operator*(const FieldElement& s, Surd a) {
  a.rational *= s;
  for (auto& kv : a.radicals) kv.second *= s;
  return a;
}

Surd SquareClasses::sqrt_of(const FieldElement& x) {
  Surd out;
  if (x.is_zero()) return out;
  if (auto root = sqrt_exact(x)) {
    out.rational = *root;
    return out;
  }
  for (std::size_t i = 0; i < reps_.size(); ++i) {
    if (same_square_class(x, reps_[i])) {
      out.radicals[static_cast<int>(i)] = *sqrt_exact(x / reps_[i]);
      return out;
    }
  }
  reps_.push_back(x);
  out.radicals[static_cast<int>(reps_.size() - 1)] = FieldElement(1);
  return out;
}

namespace {

Surd rational_surd(const FieldElement& x) {
  Surd s;
  s.rational = x;
  return s;
}

const FieldElement kHalf = FieldElement(make_rational(1, 2));

Poly linear(const FieldElement& c) { return Poly(std::vector<FieldElement>{-c, FieldElement(1)}); }

Poly power_of(const Poly& p, int n) {
  Poly acc(FieldElement(1));
  for (int i = 0; i < n; ++i) acc *= p;
  return acc;
}

RatFunc simple_pole(const FieldElement& coef, const FieldElement& c) {
  return RatFunc(Poly(coef), linear(c));
}

// sqrt(radicand) * unit; zero when unit is zero.
struct SqrtPart {
  FieldElement radicand{1};
  RatFunc unit;
};

// Solve images[d] + sum_{j<d} x_j images[j] = 0 for x exactly.
std::optional<std::vector<FieldElement>> solve_monic(const std::vector<Poly>& images) {
  const int d = static_cast<int>(images.size()) - 1;
  int rows = 0;
  for (const Poly& p : images) rows = std::max(rows, p.degree() + 1);
  if (rows == 0) return std::vector<FieldElement>(static_cast<std::size_t>(d));
  // Augmented matrix: columns 0..d-1 unknowns, column d the right side -images[d].
  std::vector<std::vector<FieldElement>> m(static_cast<std::size_t>(rows),
                                           std::vector<FieldElement>(static_cast<std::size_t>(d) + 1));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < d; ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = images[static_cast<std::size_t>(j)].coeff(i);
    m[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)] = -images[static_cast<std::size_t>(d)].coeff(i);
  }
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < d && row < rows; ++col) {
    int piv = -1;
    for (int i = row; i < rows; ++i) {
      if (!m[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)].is_zero()) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(m[static_cast<std::size_t>(piv)], m[static_cast<std::size_t>(row)]);
    auto& pr = m[static_cast<std::size_t>(row)];
    const FieldElement inv = pr[static_cast<std::size_t>(col)].inverse();
    for (auto& v : pr) v *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == row) continue;
      auto& ri = m[static_cast<std::size_t>(i)];
      const FieldElement f = ri[static_cast<std::size_t>(col)];
      if (f.is_zero()) continue;
      for (int j = col; j <= d; ++j) ri[static_cast<std::size_t>(j)] -= f * pr[static_cast<std::size_t>(j)];
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (int i = row; i < rows; ++i) {
    if (!m[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)].is_zero()) return std::nullopt;
  }
  std::vector<FieldElement> x(static_cast<std::size_t>(d));
  for (int i = 0; i < row; ++i) {
    x[static_cast<std::size_t>(pivot_col[static_cast<std::size_t>(i)])] = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)];
  }
  return x;
}

Poly monic_from(const std::vector<FieldElement>& lower) {
  std::vector<FieldElement> c = lower;
  c.emplace_back(1);
  return Poly(std::move(c));
}

// Least common multiple of the denominators, so that D * f is a polynomial for each f.
Poly common_denominator(const std::vector<RatFunc>& fs) {
  Poly d(FieldElement(1));
  for (const RatFunc& f : fs) {
    const Poly g = gcd(d, f.denominator());
    d = d * (f.denominator() / g);
  }
  return d;
}

Poly times_polynomial(const Poly& d, const RatFunc& f) {
  const RatFunc prod = RatFunc(d) * f;
  if (!prod.is_polynomial()) throw Error("common denominator does not clear a coefficient");
  return prod.numerator() * prod.denominator().coeff(0).inverse();
}

std::string degree_text(const Surd& d, const SquareClasses& classes) { return d.str(classes); }

// ---------------------------------------------------------------------------------------------
// Case 1

struct Case1Local {
  SqrtPart sqrt_part;
  Surd alpha_plus;
  Surd alpha_minus;
};

Case1Local case1_finite(const RatFunc& r, const Pole& pole, SquareClasses& classes) {
  Case1Local loc;
  if (pole.order == 1) {
    loc.alpha_plus = loc.alpha_minus = rational_surd(FieldElement(1));
  } else if (pole.order == 2) {
    const FieldElement b = laurent_at(r, pole.point, -2).coefficient(-2);
    const Surd root = classes.sqrt_of(FieldElement(1) + FieldElement(4) * b);
    loc.alpha_plus = rational_surd(kHalf) + kHalf * root;
    loc.alpha_minus = rational_surd(kHalf) - kHalf * root;
  } else {
    const int nu = pole.order / 2;
    const auto ls = laurent_at(r, pole.point, -nu - 1);
    const FieldElement r0 = ls.coefficient(-2 * nu);
    std::vector<FieldElement> f;
    for (int k = 0; k < nu; ++k) f.push_back(ls.coefficient(-2 * nu + k) / r0);
    const std::vector<FieldElement> g = series_sqrt_unit(f, nu);
    Poly num;
    for (int i = 0; i <= nu - 2; ++i) num += power_of(linear(pole.point), i) * g[static_cast<std::size_t>(i)];
    loc.sqrt_part = {r0, RatFunc(num, power_of(linear(pole.point), nu))};
    const Surd root = classes.sqrt_of(r0);
    const Surd shift = g[static_cast<std::size_t>(nu - 1)] * root;
    loc.alpha_plus = rational_surd(FieldElement(nu) * kHalf) + shift;
    loc.alpha_minus = rational_surd(FieldElement(nu) * kHalf) - shift;
  }
  return loc;
}

Case1Local case1_infinity(const RatFunc& r, int o, SquareClasses& classes) {
  Case1Local loc;
  if (o > 2) {
    loc.alpha_plus = rational_surd(FieldElement(0));
    loc.alpha_minus = rational_surd(FieldElement(1));
  } else if (o == 2) {
    const FieldElement b = laurent_at_infinity(r, 2).coefficient(2);
    const Surd root = classes.sqrt_of(FieldElement(1) + FieldElement(4) * b);
    loc.alpha_plus = rational_surd(kHalf) + kHalf * root;
    loc.alpha_minus = rational_surd(kHalf) - kHalf * root;
  } else {
    const int nu = -o / 2;
    const auto ls = laurent_at_infinity(r, 1 - nu);
    const FieldElement r0 = ls.coefficient(-2 * nu);
    std::vector<FieldElement> f;
    for (int k = 0; k <= nu + 1; ++k) f.push_back(ls.coefficient(-2 * nu + k) / r0);
    const std::vector<FieldElement> g = series_sqrt_unit(f, nu + 2);
    Poly part;
    for (int i = 0; i <= nu; ++i) part += Poly::monomial(g[static_cast<std::size_t>(i)], nu - i);
    loc.sqrt_part = {r0, RatFunc(part)};
    const Surd root = classes.sqrt_of(r0);
    const Surd shift = g[static_cast<std::size_t>(nu + 1)] * root;
    loc.alpha_plus = rational_surd(FieldElement(-nu) * kHalf) + shift;
    loc.alpha_minus = rational_surd(FieldElement(-nu) * kHalf) - shift;
  }
  return loc;
}

RatFunc signed_sqrt_part(const SqrtPart& sp, bool plus) {
  if (sp.unit.is_zero()) return RatFunc();
  const auto root = sqrt_exact(sp.radicand);
  if (!root) {
    throw IrreducibleOverField("candidate needs sqrt" + sp.radicand.str() +
                               ", outside Q(sqrt(-3)); algebraic extensions are not supported");
  }
  const RatFunc v = RatFunc(*root) * sp.unit;
  return plus ? v : -v;
}

FieldElement rational_value(const Surd& s) {
  if (!s.is_rational()) {
    throw IrreducibleOverField("admissible candidate has an irrational exponent; algebraic extensions are not supported");
  }
  return s.rational;
}

std::string sqrt_part_text(const SqrtPart& sp) {
  if (sp.unit.is_zero()) return "0";
  return "sqrt" + sp.radicand.str() + " * " + to_string(sp.unit);
}

CaseRecord run_case1(const RatFunc& r, const PoleProfile& prof) {
  CaseRecord rec;
  rec.case_id = 1;
  std::string bad;
  for (const Pole& p : prof.finite) {
    if (p.order > 2 && p.order % 2 == 1) bad += " pole " + p.point.str() + " has odd order " + std::to_string(p.order) + ";";
  }
  const int o = prof.infinity_order;
  if (o <= 2 && o % 2 != 0) bad += " order at infinity " + std::to_string(o) + " is odd and not above 2;";
  rec.necessary_conditions = bad.empty();
  rec.necessary_detail = bad.empty() ? "poles of order 1 or even order; order at infinity even or above 2" : bad.substr(1);
  if (!rec.necessary_conditions) return rec;

  SquareClasses classes;
  std::vector<Case1Local> locs;
  for (const Pole& p : prof.finite) {
    locs.push_back(case1_finite(r, p, classes));
    rec.local_data.push_back("pole " + p.point.str() + " order " + std::to_string(p.order) + ": [sqrt r] = " +
                             sqrt_part_text(locs.back().sqrt_part) + ", alpha+ = " + locs.back().alpha_plus.str(classes) +
                             ", alpha- = " + locs.back().alpha_minus.str(classes));
  }
  const Case1Local inf = case1_infinity(r, o, classes);
  rec.local_data.push_back("infinity order " + std::to_string(o) + ": [sqrt r] = " + sqrt_part_text(inf.sqrt_part) +
                           ", alpha+ = " + inf.alpha_plus.str(classes) + ", alpha- = " + inf.alpha_minus.str(classes));

  const std::size_t m = prof.finite.size();
  const std::size_t families = std::size_t{1} << (m + 1);
  for (std::size_t mask = 0; mask < families; ++mask) {
    auto plus = [&](std::size_t bit) { return ((mask >> bit) & 1U) == 0; };
    CandidateRecord cand;
    cand.signs = plus(0) ? "inf:+" : "inf:-";
    Surd d = plus(0) ? inf.alpha_plus : inf.alpha_minus;
    for (std::size_t i = 0; i < m; ++i) {
      cand.signs += plus(i + 1) ? " +" : " -";
      d = d - (plus(i + 1) ? locs[i].alpha_plus : locs[i].alpha_minus);
    }
    cand.degree = degree_text(d, classes);
    cand.admissible = d.is_nonnegative_integer();
    if (!cand.admissible) {
      cand.outcome = "d is not a nonnegative integer";
      rec.candidates.push_back(cand);
      continue;
    }
    ++rec.admissible_count;
    RatFunc theta = signed_sqrt_part(inf.sqrt_part, plus(0));
    for (std::size_t i = 0; i < m; ++i) {
      const bool s = plus(i + 1);
      theta += signed_sqrt_part(locs[i].sqrt_part, s);
      theta += simple_pole(rational_value(s ? locs[i].alpha_plus : locs[i].alpha_minus), prof.finite[i].point);
    }
    const int deg = static_cast<int>(mpz_class(d.rational.a().get_num()).get_si());
    // P'' + 2 theta P' + (theta' + theta^2 - r) P = 0
    const RatFunc A = RatFunc(FieldElement(2)) * theta;
    const RatFunc B = theta.derivative() + theta * theta - r;
    const Poly D = common_denominator({A, B});
    const Poly DA = times_polynomial(D, A);
    const Poly DB = times_polynomial(D, B);
    std::vector<Poly> images;
    for (int j = 0; j <= deg; ++j) {
      const Poly mono = Poly::monomial(FieldElement(1), j);
      images.push_back(D * mono.derivative().derivative() + DA * mono.derivative() + DB * mono);
    }
    const auto sol = solve_monic(images);
    if (!sol) {
      cand.outcome = "no monic polynomial of degree " + std::to_string(deg);
      rec.candidates.push_back(cand);
      continue;
    }
    const Poly P = monic_from(*sol);
    cand.outcome = "found P = " + to_string(P);
    rec.candidates.push_back(cand);
    rec.success = true;
    rec.theta = theta;
    rec.polynomial = P;
    rec.omega = theta + RatFunc(P.derivative(), P);
    return rec;
  }
  return rec;
}

// ---------------------------------------------------------------------------------------------
// Cases 2 and 3

// {2, 2 + 2 s, 2 - 2 s} restricted to integers, s = sqrt(1 + 4 b).
std::vector<long> case2_order2_set(const FieldElement& b) {
  std::vector<long> out{2};
  if (auto s = sqrt_exact(FieldElement(1) + FieldElement(4) * b)) {
    for (const FieldElement& e : {FieldElement(2) + FieldElement(2) * *s, FieldElement(2) - FieldElement(2) * *s}) {
      if (e.is_integer()) out.push_back(mpz_class(e.a().get_num()).get_si());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string set_text(const std::vector<long>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "}";
}

// Enumerate one choice per set; visit returns true to stop.
void for_each_choice(const std::vector<std::vector<long>>& sets,
                     const std::function<bool(const std::vector<long>&)>& visit, long cap) {
  std::vector<std::size_t> idx(sets.size(), 0);
  for (const auto& s : sets) {
    if (s.empty()) return;
  }
  long visited = 0;
  while (true) {
    if (++visited > cap) throw Error("exponent family enumeration exceeded its budget");
    std::vector<long> pick;
    for (std::size_t i = 0; i < sets.size(); ++i) pick.push_back(sets[i][idx[i]]);
    if (visit(pick)) return;
    std::size_t k = 0;
    while (k < sets.size()) {
      if (++idx[k] < sets[k].size()) break;
      idx[k] = 0;
      ++k;
    }
    if (k == sets.size()) return;
  }
}

CaseRecord run_case2(const RatFunc& r, const PoleProfile& prof) {
  CaseRecord rec;
  rec.case_id = 2;
  const bool ok = std::any_of(prof.finite.begin(), prof.finite.end(),
                              [](const Pole& p) { return p.order == 2 || (p.order > 2 && p.order % 2 == 1); });
  rec.necessary_conditions = ok;
  rec.necessary_detail = ok ? "some pole has order 2 or odd order above 2"
                            : "no pole of order 2 or of odd order above 2";
  if (!ok) return rec;

  std::vector<std::vector<long>> sets;
  for (const Pole& p : prof.finite) {
    std::vector<long> e;
    if (p.order == 1) {
      e = {4};
    } else if (p.order == 2) {
      e = case2_order2_set(laurent_at(r, p.point, -2).coefficient(-2));
    } else {
      e = {p.order};
    }
    rec.local_data.push_back("pole " + p.point.str() + " order " + std::to_string(p.order) + ": E = " + set_text(e));
    sets.push_back(e);
  }
  const int o = prof.infinity_order;
  std::vector<long> e_inf;
  if (o > 2) {
    e_inf = {0, 2, 4};
  } else if (o == 2) {
    e_inf = case2_order2_set(laurent_at_infinity(r, 2).coefficient(2));
  } else {
    e_inf = {o};
  }
  rec.local_data.push_back("infinity order " + std::to_string(o) + ": E = " + set_text(e_inf));
  sets.insert(sets.begin(), e_inf);

  for_each_choice(sets, [&](const std::vector<long>& pick) {
    CandidateRecord cand;
    long sum = 0;
    cand.signs = "inf:" + std::to_string(pick[0]);
    for (std::size_t i = 1; i < pick.size(); ++i) {
      sum += pick[i];
      cand.signs += " " + std::to_string(pick[i]);
    }
    const long twice_d = pick[0] - sum;
    cand.degree = twice_d % 2 == 0 ? std::to_string(twice_d / 2) : std::to_string(twice_d) + "/2";
    cand.admissible = twice_d >= 0 && twice_d % 2 == 0;
    if (!cand.admissible) {
      cand.outcome = "d is not a nonnegative integer";
      rec.candidates.push_back(cand);
      return false;
    }
    ++rec.admissible_count;
    const int deg = static_cast<int>(twice_d / 2);
    RatFunc theta;
    for (std::size_t i = 1; i < pick.size(); ++i) {
      theta += simple_pole(FieldElement(make_rational(pick[i], 2)), prof.finite[i - 1].point);
    }
    const RatFunc dth = theta.derivative();
    const RatFunc A1 = RatFunc(FieldElement(3)) * theta;
    const RatFunc A2 = RatFunc(FieldElement(3)) * theta * theta + RatFunc(FieldElement(3)) * dth - RatFunc(FieldElement(4)) * r;
    const RatFunc A3 = dth.derivative() + RatFunc(FieldElement(3)) * theta * dth + theta * theta * theta -
                       RatFunc(FieldElement(4)) * r * theta - RatFunc(FieldElement(2)) * r.derivative();
    const Poly D = common_denominator({A1, A2, A3});
    const Poly P1 = times_polynomial(D, A1);
    const Poly P2 = times_polynomial(D, A2);
    const Poly P3 = times_polynomial(D, A3);
    std::vector<Poly> images;
    for (int j = 0; j <= deg; ++j) {
      const Poly m0 = Poly::monomial(FieldElement(1), j);
      const Poly m1 = m0.derivative();
      const Poly m2 = m1.derivative();
      images.push_back(D * m2.derivative() + P1 * m2 + P2 * m1 + P3 * m0);
    }
    const auto sol = solve_monic(images);
    if (!sol) {
      cand.outcome = "no monic polynomial of degree " + std::to_string(deg);
      rec.candidates.push_back(cand);
      return false;
    }
    const Poly P = monic_from(*sol);
    cand.outcome = "found P = " + to_string(P);
    rec.candidates.push_back(cand);
    rec.success = true;
    rec.theta = theta;
    rec.polynomial = P;
    rec.omega = theta + RatFunc(P.derivative(), P);
    return true;
  }, 5'000'000);
  return rec;
}

// {6 + 12 k / n * sqrt(1 + 4 b) : k = -n/2 .. n/2} restricted to integers.
std::vector<long> case3_set(const FieldElement& b, int n) {
  std::vector<long> out;
  const auto s = sqrt_exact(FieldElement(1) + FieldElement(4) * b);
  for (int k = -n / 2; k <= n / 2; ++k) {
    if (!s && k != 0) continue;
    const FieldElement e = FieldElement(6) + FieldElement(make_rational(12 * k, n)) * (s ? *s : FieldElement(0));
    if (e.is_integer()) out.push_back(mpz_class(e.a().get_num()).get_si());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CaseRecord run_case3(const RatFunc& r, const PoleProfile& prof) {
  CaseRecord rec;
  rec.case_id = 3;
  std::string bad;
  for (const Pole& p : prof.finite) {
    if (p.order > 2) bad += " pole " + p.point.str() + " has order " + std::to_string(p.order) + ";";
  }
  if (prof.infinity_order < 2) bad += " order at infinity " + std::to_string(prof.infinity_order) + " is below 2;";
  rec.necessary_conditions = bad.empty();
  rec.necessary_detail = bad.empty() ? "poles of order at most 2 and order at infinity at least 2" : bad.substr(1);
  if (!rec.necessary_conditions) return rec;

  Poly S(FieldElement(1));
  for (const Pole& p : prof.finite) S *= linear(p.point);
  const Poly dS = S.derivative();
  const Poly S2r = times_polynomial(S * S, r);

  for (int n : {4, 6, 12}) {
    std::vector<std::vector<long>> sets;
    const FieldElement b_inf =
        prof.infinity_order == 2 ? laurent_at_infinity(r, 2).coefficient(2) : FieldElement(0);
    sets.push_back(case3_set(b_inf, n));
    rec.local_data.push_back("n=" + std::to_string(n) + " infinity: E = " + set_text(sets.back()));
    for (const Pole& p : prof.finite) {
      std::vector<long> e = p.order == 1 ? std::vector<long>{12}
                                         : case3_set(laurent_at(r, p.point, -2).coefficient(-2), n);
      rec.local_data.push_back("n=" + std::to_string(n) + " pole " + p.point.str() + ": E = " + set_text(e));
      sets.push_back(e);
    }
    bool found = false;
    for_each_choice(sets, [&](const std::vector<long>& pick) {
      CandidateRecord cand;
      long sum = 0;
      cand.signs = "n=" + std::to_string(n) + " inf:" + std::to_string(pick[0]);
      for (std::size_t i = 1; i < pick.size(); ++i) {
        sum += pick[i];
        cand.signs += " " + std::to_string(pick[i]);
      }
      const long scaled = n * (pick[0] - sum);
      cand.degree = scaled % 12 == 0 ? std::to_string(scaled / 12) : std::to_string(scaled) + "/12";
      cand.admissible = scaled >= 0 && scaled % 12 == 0;
      if (!cand.admissible) {
        cand.outcome = "d is not a nonnegative integer";
        rec.candidates.push_back(cand);
        return false;
      }
      ++rec.admissible_count;
      const int deg = static_cast<int>(scaled / 12);
      RatFunc theta;
      for (std::size_t i = 1; i < pick.size(); ++i) {
        theta += simple_pole(FieldElement(make_rational(n * pick[i], 12)), prof.finite[i - 1].point);
      }
      const Poly Stheta = times_polynomial(S, theta);
      std::vector<Poly> images;
      for (int j = 0; j <= deg; ++j) {
        // P_n = -P, P_{i-1} = -S P_i' + ((n - i) S' - S theta) P_i - (n - i)(i + 1) S^2 r P_{i+1}.
        Poly next;  // P_{i+1}
        Poly cur = -Poly::monomial(FieldElement(1), j);
        for (int i = n; i >= 0; --i) {
          const Poly prev = -(S * cur.derivative()) + (dS * FieldElement(n - i) - Stheta) * cur -
                            S2r * next * FieldElement(static_cast<long>(n - i) * (i + 1));
          next = cur;
          cur = prev;
        }
        images.push_back(cur);
      }
      const auto sol = solve_monic(images);
      if (!sol) {
        cand.outcome = "no monic polynomial of degree " + std::to_string(deg);
        rec.candidates.push_back(cand);
        return false;
      }
      const Poly P = monic_from(*sol);
      cand.outcome = "found P = " + to_string(P);
      rec.candidates.push_back(cand);
      rec.success = true;
      rec.n = n;
      rec.theta = theta;
      rec.polynomial = P;
      found = true;
      return true;
    }, 5'000'000);
    if (found) break;
  }
  return rec;
}

}  // namespace

CaseRecord run_case(const RatFunc& r, int case_id) {
  const PoleProfile prof = pole_profile(r);
  switch (case_id) {
    case 1:
      if (r.is_zero()) {
        CaseRecord rec;
        rec.case_id = 1;
        rec.necessary_conditions = true;
        rec.necessary_detail = "r = 0";
        rec.success = true;
        rec.theta = RatFunc();
        rec.polynomial = Poly(FieldElement(1));
        rec.omega = RatFunc();
        return rec;
      }
      return run_case1(r, prof);
    case 2:
      return run_case2(r, prof);
    case 3:
      return run_case3(r, prof);
    default:
      throw Error("Kovacic case must be 1, 2 or 3");
  }
}

bool verify_riccati(const RatFunc& omega, const RatFunc& r) { return omega.derivative() + omega * omega == r; }

Certificate kovacic_run(const RatFunc& r) {
  Certificate cert;
  cert.r = r;
  cert.profile = pole_profile(r);
  cert.identity_component = "not solvable";
  for (int c = 1; c <= 3; ++c) {
    cert.cases.push_back(run_case(r, c));
    const CaseRecord& rec = cert.cases.back();
    if (!rec.success) continue;
    cert.verdict = Verdict::Liouvillian;
    cert.liouvillian_case = c;
    cert.identity_component = c == 1 ? "solvable" : "abelian";
    if (c == 1) cert.riccati_verified = verify_riccati(*rec.omega, r);
    break;
  }
  return cert;
}

Certificate kovacic_run(const variational::LinearODE2& e) { return kovacic_run(to_normal_form(e)); }

std::string verdict_name(Verdict v) { return v == Verdict::Liouvillian ? "Liouvillian" : "GroupSL2"; }

}  // namespace rell::kovacic
