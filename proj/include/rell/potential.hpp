#pragma once

// The elliptic-integral potential
//   J(q1, q2) = int_0^inf dz / sqrt((z + 4/q2^2)(z^2 + r z + q2^2/4)),  r = sqrt(q1^2 + q2^2),
// its gradient, the second normal derivative F1 = d^2 J / dq1^2 on the axis q1 = 0, and the
// closed forms that hold on that axis.
//
// Branch conventions on the real half-line q2 > 2:
//   sqrt(q2^2) = q2,  sqrt(8 - t^3) = -i sqrt(t^3 - 8),  arccos is the principal branch.

#include <complex>
#include <vector>

#include "rell/field.hpp"

namespace rell::potential {

using cplx = std::complex<double>;

struct PotentialPoint {
  cplx q1;
  cplx q2;
  cplx r;

  /// r = principal sqrt(q1^2 + q2^2), except r = q2 on the axis q1 = 0.
  static PotentialPoint make(cplx q1, cplx q2);
};

cplx eval_J(const PotentialPoint& p, double tol = 1e-14);
double eval_J(double q1, double q2, double tol = 1e-14);

struct Gradient {
  double dq1 = 0;
  double dq2 = 0;
};

/// Gradient of J on the real domain, by differentiation under the integral sign.
Gradient grad_J(double q1, double q2, double tol = 1e-14);

/// {0} and the six points 2 e^{i k pi / 3}: the candidates for the singular set of J on q1 = 0.
std::vector<FieldElement> sigma_axis_candidates();

/// Distance from q2 to the nearest axis candidate.
double distance_to_axis_candidates(cplx q2);

/// sqrt(8 - t^3) with the convention -i sqrt(t^3 - 8) (principal inner root).
cplx sqrt_8_minus_cube(cplx t);
/// arccos(2 sqrt(2) t^{-3/2}), principal branches.
cplx arccos_term(cplx t);

/// sqrt(2) t arccos(2 sqrt(2) t^{-3/2}) / sqrt(t^3 - 8): the axis potential in the printed
/// normalization. Real and analytic for real t > 0 (removable singularity at t = 2).
double axis_potential_printed(double t);

cplx F1_closed(cplx q2);
cplx F1_quadrature(cplx q2, double tol = 1e-14);

struct CalibrationSample {
  double q2 = 0;
  double potential_ratio = 0;  // eval_J(0, q2) / axis_potential_printed(q2)
  double f1_ratio = 0;         // F1_quadrature(q2) / F1_closed(q2)
};

/// Constant factors by which the printed closed forms must be multiplied to agree with the
/// quadrature oracles. The oracle governs every downstream use.
struct Calibration {
  double potential_factor = 1;
  double f1_factor = 1;
  double potential_spread = 0;  // max |ratio - factor| over the samples
  double f1_spread = 0;
  std::vector<CalibrationSample> samples;
};

Calibration calibrate(double tol = 1e-14);
/// Calibration at the default sample points, computed once.
const Calibration& calibration();

struct OracleChainPoint {
  double q2 = 0;
  double closed = 0;      // f1_factor * F1_closed
  double quadrature = 0;  // F1_quadrature
  double finite_diff = 0; // central second difference of eval_J in q1
  double step = 0;
};

/// eps^(1/4) * max(1, |q2|), the usual step for a central second difference.
double second_difference_step(double q2);

/// F1 three ways at each abscissa. OpenMP-parallel over points. h <= 0 picks second_difference_step per point.
std::vector<OracleChainPoint> f1_oracle_chain(const std::vector<double>& q2s, double tol, double h);
/// Serial reference for f1_oracle_chain.
std::vector<OracleChainPoint> f1_oracle_chain_serial(const std::vector<double>& q2s, double tol,
                                                     double h);

/// eval_J on a batch of axis points. OpenMP-parallel.
std::vector<double> eval_J_axis_batch(const std::vector<double>& q2s, double tol);
std::vector<double> eval_J_axis_batch_serial(const std::vector<double>& q2s, double tol);

}  // namespace rell::potential
