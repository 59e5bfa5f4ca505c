#pragma once

// Normal variational equation along orbits of the invariant plane, in time and in the
// t = q2 parametrization, the sheaf-shifted family and its k -> infinity limit.

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rell/exact_algebra.hpp"

namespace rell::variational {

using cplx = std::complex<double>;
using Matrix2 = std::array<std::array<cplx, 2>, 2>;

/// Block acting on (dp1, dq1): dp1' = -F1 dq1, dq1' = 2 q2 dp1, with F1 the calibrated closed form.
Matrix2 nve_time_matrix(cplx q2);
/// Same block with F1 replaced by the full second derivative d^2H/dq1^2 on the plane, which
/// also carries the kinetic contribution q2^5 p2^2 / (q2^3 + 1)^2.
Matrix2 nve_time_matrix_full(double q2, double p2, double tol_quad = 1e-14);

/// Point of the Riemann surface: t with continued values of
///   w = arccos(2 sqrt(2) t^{-3/2}),  u = sqrt(8 - t^3),  v = sqrt(t).
struct BranchState {
  cplx t;
  cplx w;
  cplx u;
  cplx v;

  /// Principal lift: v = sqrt(t), u = -i sqrt(t^3 - 8), w = arccos(2 sqrt(2) / v^3) with its sign
  /// chosen so that sin(w) = i u / v^3. Real on t > 2.
  static BranchState principal(cplx t);

  /// max(|u^2 - (8 - t^3)|, |v^2 - t|, |cos w - 2 sqrt(2) v^{-3}|, |sin w - i u v^{-3}|).
  double residual() const;
};

/// s = i w / (sqrt(2) u).
cplx s_value(const BranchState& b);
/// Shift of s produced by k sheet translations w -> w + 2 pi k.
cplx sigma_shift(const BranchState& b, long k);

struct Coeffs {
  cplx a2;
  cplx a1;
  cplx a0;
};

/// Polynomial coefficients {a2, a1, a0} of the limit equation; they multiply s in the base equation.
std::array<Poly, 3> limit_coefficients();

/// Member k of the sheaf-shifted family: s replaced by s + sigma_shift(b, k).
Coeffs shifted_coeffs(const BranchState& b, cplx E, long k);
/// The base normal variational equation in t (k = 0).
Coeffs base_coeffs(const BranchState& b, cplx E);
/// shifted_coeffs divided by the dominant factor s + sigma_shift(b, k).
Coeffs shifted_normalized(const BranchState& b, cplx E, long k);

/// Second-order linear ODE a2 X'' + a1 X' + a0 X = 0.
class LinearODE2 {
 public:
  enum class Kind { Exact, Family };

  static LinearODE2 exact(Poly a2, Poly a1, Poly a0, std::string tag);
  /// Member k of the sheaf-shifted family at energy E (printed normalization).
  static LinearODE2 family(cplx E, long k);

  Kind kind() const { return kind_; }
  bool is_exact() const { return kind_ == Kind::Exact; }
  const std::string& tag() const { return tag_; }
  cplx energy() const { return E_; }
  long shift() const { return k_; }

  const Poly& a2() const;
  const Poly& a1() const;
  const Poly& a0() const;

  /// Exact equations only.
  Coeffs eval(cplx t) const;
  /// Both kinds; exact equations ignore the branch data.
  Coeffs eval(const BranchState& b) const;

  /// Finite points where the coefficient a2 of an exact equation vanishes, or the roots of
  /// t (t^3 - 8)(t^3 + 1) for the family.
  std::vector<FieldElement> singular_points() const;

 private:
  Kind kind_ = Kind::Exact;
  std::string tag_;
  Poly a2_, a1_, a0_;
  std::array<std::vector<cplx>, 3> dense_;  // coefficients embedded in C, ascending
  cplx E_ = 0;
  long k_ = 0;
};

/// k -> infinity limit of the normalized family; exact polynomial coefficients.
LinearODE2 limit_equation();

struct IndicialExponents {
  FieldElement pole;
  FieldElement p_residue;   // coefficient of (t - pole)^{-1} in a1/a2
  FieldElement q_leading;   // coefficient of (t - pole)^{-2} in a0/a2
  FieldElement sum;         // 1 - p_residue
  FieldElement product;     // q_leading
  std::optional<std::pair<FieldElement, FieldElement>> exact;  // when the discriminant is a square
  std::pair<cplx, cplx> values;
};

/// Throws NotASingularity at ordinary points and IrregularSingular when the pole orders exceed 1 and 2.
IndicialExponents indicial_exponents(const LinearODE2& e, const FieldElement& pole);

struct InfinityAnalysis {
  int p_valuation = 0;  // order of vanishing of a1/a2 at infinity
  int q_valuation = 0;  // order of vanishing of a0/a2 at infinity
  bool regular = false;  // p_valuation >= 1 and q_valuation >= 2
};

InfinityAnalysis singularity_at_infinity(const LinearODE2& e);

/// Coefficients of the normal variational equation written in t = q2, derived from the full
/// Hessian and the true relation (dq2/dtau)^2 = 4 t^4 (E - V(t)) / (t^3 + 1), with V = J(0, .)
/// and E the physical energy. Real t > 2 only.
struct RealCoeffs {
  double a2 = 0;
  double a1 = 0;
  double a0 = 0;
};
RealCoeffs corrected_t_coeffs(double t, double E, double tol_quad = 1e-14);

struct NveSample {
  double tau = 0;
  double t = 0;
  double finite_diff = 0;     // (q1 of the perturbed orbit) / delta
  double time_full = 0;       // time-domain block with the full Hessian entry
  double time_printed = 0;    // time-domain block with the calibrated closed-form F1
  double base = 0;            // base equation in t, printed-normalization energy
  double corrected = 0;       // corrected_t_coeffs equation in t
};

struct NveCheckConfig {
  double energy = 1.95;  // physical energy R = E
  double t_start = 3;
  double t_end = 5;
  double delta = 1e-6;
  int samples = 40;
  double tol_ode = 1e-12;
  double tol_quad = 1e-14;
};

struct NveCheckResult {
  double energy = 0;
  double energy_printed = 0;  // energy / calibration factor, fed to the base equation
  double tau_end = 0;
  std::vector<NveSample> samples;
  double err_time_full = 0;   // max |X - X_fd| / max |X_fd|
  double err_time_printed = 0;
  double err_base = 0;
  double err_corrected = 0;
};

/// Finite-difference variational solution against the four model equations along the orbit that
/// starts at q2 = t_start moving outward and reaches t_end.
NveCheckResult nve_oracle_check(const NveCheckConfig& cfg);

}  // namespace rell::variational
