#pragma once

// Analytic continuation of second-order linear equations along piecewise paths in the complex
// t-plane, monodromy generators, and the nested-commutator power test.
//
// Transfer matrices act on the coordinates (X, X') at the start of a path. Concatenation
// composes right to left: transport(a then b) = transport(b) * transport(a).

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rell/variational.hpp"

namespace rell::monodromy {

using cplx = std::complex<double>;
using variational::BranchState;
using variational::LinearODE2;
using variational::Matrix2;

Matrix2 identity();
Matrix2 multiply(const Matrix2& a, const Matrix2& b);
Matrix2 inverse(const Matrix2& a);
cplx det(const Matrix2& a);
/// Largest singular value.
double operator_norm(const Matrix2& a);
Matrix2 subtract(const Matrix2& a, const Matrix2& b);
Matrix2 power(Matrix2 a, int n);

struct Segment {
  enum class Kind { Line, Arc };
  Kind kind = Kind::Line;
  cplx from;       // line
  cplx to;         // line
  cplx center;     // arc
  double radius = 0;
  double angle0 = 0;  // arc start angle
  double angle1 = 0;  // arc end angle; angle1 > angle0 runs counter-clockwise

  static Segment line(cplx a, cplx b);
  static Segment arc(cplx center, double radius, double angle0, double angle1);

  cplx point(double s) const;    // s in [0, 1]
  cplx tangent(double s) const;  // d point / ds
  cplx start() const { return point(0); }
  cplx end() const { return point(1); }
  Segment reversed() const;
  double distance_to(cplx p) const;
  std::string describe() const;
};

struct LoopPath {
  cplx basepoint;
  std::vector<Segment> segments;
  std::optional<FieldElement> enclosed;
  std::string label;

  cplx end() const { return segments.empty() ? basepoint : segments.back().end(); }
  bool closed(double tol = 1e-14) const { return std::abs(end() - basepoint) <= tol; }
  /// The same path traversed backwards (starts at end()).
  LoopPath reversed() const;
  /// This path followed by `next`.
  LoopPath then(const LoopPath& next) const;
  double min_distance(const std::vector<cplx>& points) const;
};

/// Loop from `base` to the singular point `target`: a straight spoke, counter-clockwise
/// half-circle detours around intermediate singular points, a counter-clockwise circle of radius
/// min(cap, half the distance to the nearest other singular point) around `target`, and the
/// spoke back. A positive `radius` overrides the circle radius around the target.
LoopPath generator_loop(cplx base, const FieldElement& target, const std::vector<FieldElement>& singular,
                        double cap = 0.25, double radius = 0);

/// Circle |t - center| = |base - center| through base; counter-clockwise when ccw is true.
LoopPath circle_loop(cplx base, cplx center, bool ccw);

struct TransportOptions {
  double tol = 1e-12;
  double clearance = 1e-3;
};

struct TransportResult {
  Matrix2 matrix;
  std::optional<BranchState> branch_end;
  long steps = 0;
};

/// Family equations require `start`, the branch data at the start of the path.
TransportResult transport(const LinearODE2& e, const LoopPath& path, const TransportOptions& opt = {},
                          const std::optional<BranchState>& start = std::nullopt);

/// Continue (w, u, v) along a path without solving any linear equation.
BranchState continue_branch(const LoopPath& path, const BranchState& start, double tol = 1e-13);

struct MonodromyMatrix {
  Matrix2 entries;
  LoopPath loop;
  std::string equation;
  cplx det = 0;
  std::optional<cplx> predicted_det;
  double det_residual = 0;
};

/// exp(-2 pi i Res(a1/a2, pole)).
cplx det_prediction(const LinearODE2& e, const FieldElement& pole);

struct GeneratorOptions {
  cplx basepoint = 5.0;
  double cap = 0.25;
  TransportOptions transport;
};

struct GeneratorSet {
  std::vector<MonodromyMatrix> finite;  // in traversal order of the product relation
  MonodromyMatrix infinity;             // clockwise circle through the basepoint
  Matrix2 product;                      // finite[n-1] * ... * finite[0]
  double product_residual = 0;          // |product * infinity - I| / max(1, |product|)
};

/// One loop per finite singular point, transported in parallel.
GeneratorSet generators(const LinearODE2& e, const GeneratorOptions& opt = {});
/// Serial reference for generators().
GeneratorSet generators_serial(const LinearODE2& e, const GeneratorOptions& opt = {});

/// Largest |C^power - I| over `samples` random nested commutators C of depth `depth` built from
/// generators and their inverses, e.g. [[R1, R2], [R3, R4]] for depth 2. Parallel over samples.
/// Non-finite powers are reported as 1e300.
double derived_power_test(const std::vector<Matrix2>& gens, int depth, int power, int samples,
                          std::uint64_t seed);
double derived_power_test_serial(const std::vector<Matrix2>& gens, int depth, int power, int samples,
                                 std::uint64_t seed);

/// A loop through `base` along which w gains exactly 2 pi while t, u and v return: the sheet
/// translation. Built from two generator loops around roots of t^3 = 8.
LoopPath sheaf_shift_loop(cplx base, double cap = 0.25);

}  // namespace rell::monodromy
