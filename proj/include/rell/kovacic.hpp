#pragma once

// Kovacic's decision procedure for Liouvillian solutions of y'' = r y, r in Q(sqrt(-3))(t).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rell/exact_algebra.hpp"
#include "rell/variational.hpp"

namespace rell::kovacic {

/// r = p^2/4 + p'/2 - q with p = a1/a2 and q = a0/a2, so that y = X exp(int p / 2) solves y'' = r y.
RatFunc to_normal_form(const Poly& a2, const Poly& a1, const Poly& a0);
RatFunc to_normal_form(const variational::LinearODE2& e);

struct Pole {
  FieldElement point;
  int order = 0;
};

struct PoleProfile {
  std::vector<Pole> finite;  // ascending by (a, b)
  int infinity_order = 0;    // deg(denominator) - deg(numerator); 1000 for r = 0
};

PoleProfile pole_profile(const RatFunc& r);

/// x + sum_j c_j sqrt(d_j) with square classes d_j drawn from a shared registry.
class SquareClasses;

struct Surd {
  FieldElement rational;
  std::map<int, FieldElement> radicals;  // class id -> coefficient

  bool is_rational() const;
  bool is_nonnegative_integer() const;
  std::string str(const SquareClasses& classes) const;

  friend Surd operator+(Surd a, const Surd& b);
  friend Surd operator-(Surd a, const Surd& b);
  friend Surd operator*(const FieldElement& s, Surd a);
};

class SquareClasses {
 public:
  /// sqrt(x) as a surd, registering a new class when needed.
  Surd sqrt_of(const FieldElement& x);
  const FieldElement& representative(int id) const { return reps_.at(static_cast<std::size_t>(id)); }

 private:
  std::vector<FieldElement> reps_;
};

struct CandidateRecord {
  std::string signs;   // choice per pole and infinity
  std::string degree;  // candidate d as text
  bool admissible = false;  // d is a nonnegative integer
  std::string outcome;
};

struct CaseRecord {
  int case_id = 0;
  bool necessary_conditions = false;
  std::string necessary_detail;
  std::vector<std::string> local_data;
  std::vector<CandidateRecord> candidates;
  int admissible_count = 0;
  bool success = false;
  int n = 0;                     // case 3 only
  std::optional<RatFunc> theta;  // successful candidate
  std::optional<Poly> polynomial;
  std::optional<RatFunc> omega;  // case 1: y'/y;  case 2: the trace phi
};

CaseRecord run_case(const RatFunc& r, int case_id);

enum class Verdict { Liouvillian, GroupSL2 };

struct Certificate {
  Verdict verdict = Verdict::GroupSL2;
  int liouvillian_case = 0;
  RatFunc r;
  PoleProfile profile;
  std::vector<CaseRecord> cases;
  /// "solvable" (case 1), "abelian" (cases 2 and 3: abelian identity component),
  /// or "not solvable" for the full SL2 group.
  std::string identity_component;
  bool riccati_verified = false;
};

Certificate kovacic_run(const RatFunc& r);
Certificate kovacic_run(const variational::LinearODE2& e);

/// omega' + omega^2 == r as an exact identity.
bool verify_riccati(const RatFunc& omega, const RatFunc& r);

std::string verdict_name(Verdict v);

}  // namespace rell::kovacic
