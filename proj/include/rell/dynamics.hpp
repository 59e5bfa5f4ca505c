#pragma once

// The two-degree-of-freedom Hamiltonian
//   H = r (p1^2 + q2^4 p2^2 / (q2^4 + r)) + J(q1, q2),
// its restriction R to the invariant plane (q1, p1) = (0, 0), and the fixed points of R.

#include <array>
#include <ostream>
#include <vector>

#include "rell/ode.hpp"

namespace rell::dynamics {

/// Real phase point; the integrator works on the real domain q2 in (2, 6).
struct PhaseState {
  double t = 0;
  double q1 = 0;
  double q2 = 0;
  double p1 = 0;
  double p2 = 0;
};

double hamiltonian(const PhaseState& s, double tol_quad = 1e-14);

/// Axis potential in closed form, scaled by the calibration factor so that it equals J(0, q2).
double reduced_potential(double q2);
/// R(p2, q2) = q2^5 p2^2 / (q2^4 + q2) + reduced_potential(q2).
double reduced_R(double p2, double q2);

/// (dq1, dq2, dp1, dp2) / dt.
std::array<double, 4> vector_field(const PhaseState& s, double tol_quad = 1e-14);

struct IntegrateOptions {
  double tol = 1e-12;
  double tol_quad = 1e-14;
  /// Output times, monotone from 0 toward T. Empty means `samples` evenly spaced points.
  std::vector<double> sample_times;
  int samples = 101;
};

struct Trajectory {
  std::vector<PhaseState> states;
  double energy0 = 0;
  double max_energy_drift = 0;
  double max_plane_leakage = 0;  // max |q1| + |p1|
  OdeStats stats;
};

/// Throws SingularEncounter when the orbit reaches a singular configuration.
Trajectory integrate(const PhaseState& s0, double T, const IntegrateOptions& opt = {});

struct CriticalPoint {
  double x = 0;  // q2 abscissa
  double E = 0;  // 12 x / (x^3 + 16)
  int multiplicity = 1;
  double residual = 0;  // |2 sqrt(2) - x^{3/2} cosh(...)|
};

/// Left side of the fixed-point equation 2 sqrt(2) - x^{3/2} cosh(6 sqrt(2) sqrt(8 - x^3) / (x^3 + 16)).
double fixed_point_function(double x);
double fixed_point_energy(double x);

/// Real solutions in [lo, hi], including roots of even multiplicity.
std::vector<CriticalPoint> critical_points(double lo, double hi, int grid = 1000);

/// (t^3 + 1)(E - reduced_potential(t)) / t^4: the squared momentum p2^2 on the level R = E.
double phi_dot_sq(double t, double E);
/// (dq2/dtau)^2 = 4 t^4 (E - reduced_potential(t)) / (t^3 + 1) on the level R = E.
double q2_dot_sq(double t, double E);

/// CSV with header time,q1,q2,p1,p2,energy.
void write_csv(std::ostream& os, const Trajectory& tr, double tol_quad = 1e-14);

}  // namespace rell::dynamics
