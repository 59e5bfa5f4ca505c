#include "rell/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "rell/errors.hpp"
#include "rell/ode.hpp"

namespace rell::monodromy {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
constexpr double kTwoPi = 2 * M_PI;
const cplx kI(0, 1);

std::vector<cplx> embed_all(const std::vector<FieldElement>& pts) {
  std::vector<cplx> out;
  for (const auto& p : pts) out.push_back(p.to_complex());
  return out;
}

}  // namespace

Matrix2 identity() { return Matrix2{{{cplx(1), cplx(0)}, {cplx(0), cplx(1)}}}; }

Matrix2 multiply(const Matrix2& a, const Matrix2& b) {
  Matrix2 c{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  }
  return c;
}

cplx det(const Matrix2& a) { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }

Matrix2 inverse(const Matrix2& a) {
  const cplx d = det(a);
  if (d == cplx(0)) throw Error("singular transfer matrix");
  return Matrix2{{{a[1][1] / d, -a[0][1] / d}, {-a[1][0] / d, a[0][0] / d}}};
}

Matrix2 subtract(const Matrix2& a, const Matrix2& b) {
  Matrix2 c{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][j] - b[i][j];
  }
  return c;
}

double operator_norm(const Matrix2& a) {
  double frob = 0;
  for (const auto& row : a) {
    for (const cplx& x : row) frob += std::norm(x);
  }
  const double d = std::abs(det(a));
  const double disc = std::max(0.0, frob * frob - 4 * d * d);
  return std::sqrt(0.5 * (frob + std::sqrt(disc)));
}

Matrix2 power(Matrix2 a, int n) {
  Matrix2 result = identity();
  while (n > 0) {
    if (n & 1) result = multiply(result, a);
    n >>= 1;
    if (n > 0) a = multiply(a, a);
  }
  return result;
}

Segment Segment::line(cplx a, cplx b) {
  Segment s;
  s.kind = Kind::Line;
  s.from = a;
  s.to = b;
  return s;
}

Segment Segment::arc(cplx center, double radius, double angle0, double angle1) {
  Segment s;
  s.kind = Kind::Arc;
  s.center = center;
  s.radius = radius;
  s.angle0 = angle0;
  s.angle1 = angle1;
  return s;
}

cplx Segment::point(double s) const {
  if (kind == Kind::Line) {
    if (s == 1) return to;
    return from + s * (to - from);
  }
  return center + std::polar(radius, angle0 + s * (angle1 - angle0));
}

cplx Segment::tangent(double s) const {
  if (kind == Kind::Line) return to - from;
  const double theta = angle0 + s * (angle1 - angle0);
  return kI * std::polar(radius, theta) * (angle1 - angle0);
}

Segment Segment::reversed() const {
  if (kind == Kind::Line) return line(to, from);
  return arc(center, radius, angle1, angle0);
}

double Segment::distance_to(cplx p) const {
  if (kind == Kind::Line) {
    const cplx d = to - from;
    const double len2 = std::norm(d);
    double lambda = len2 == 0 ? 0 : std::real((p - from) * std::conj(d)) / len2;
    lambda = std::clamp(lambda, 0.0, 1.0);
    return std::abs(p - (from + lambda * d));
  }
  const cplx rel = p - center;
  const double lo = std::min(angle0, angle1);
  const double hi = std::max(angle0, angle1);
  if (std::abs(rel) > 0) {
    double theta = std::arg(rel);
    while (theta < lo) theta += kTwoPi;
    if (theta <= hi) return std::abs(std::abs(rel) - radius);
  }
  return std::min(std::abs(p - point(0)), std::abs(p - point(1)));
}

std::string Segment::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind == Kind::Line) {
    os << "line (" << from.real() << "," << from.imag() << ") -> (" << to.real() << "," << to.imag() << ")";
  } else {
    os << "arc center (" << center.real() << "," << center.imag() << ") radius " << radius << " angle "
       << angle0 << " -> " << angle1;
  }
  return os.str();
}

LoopPath LoopPath::reversed() const {
  LoopPath r;
  r.basepoint = end();
  r.enclosed = enclosed;
  r.label = label.empty() ? "" : "reverse(" + label + ")";
  for (auto it = segments.rbegin(); it != segments.rend(); ++it) r.segments.push_back(it->reversed());
  return r;
}

LoopPath LoopPath::then(const LoopPath& next) const {
  if (std::abs(end() - next.basepoint) > 1e-12) throw Error("paths do not join");
  LoopPath r = *this;
  r.enclosed.reset();
  r.label = label + " * " + next.label;
  r.segments.insert(r.segments.end(), next.segments.begin(), next.segments.end());
  return r;
}

double LoopPath::min_distance(const std::vector<cplx>& points) const {
  double d = std::numeric_limits<double>::infinity();
  for (const Segment& s : segments) {
    for (const cplx& p : points) d = std::min(d, s.distance_to(p));
  }
  return d;
}

LoopPath generator_loop(cplx base, const FieldElement& target, const std::vector<FieldElement>& singular,
                        double cap, double radius) {
  const std::vector<cplx> pts = embed_all(singular);
  const cplx c = target.to_complex();
  auto radius_of = [&](cplx p) {
    double d = std::numeric_limits<double>::infinity();
    for (const cplx& q : pts) {
      if (std::abs(q - p) > 1e-12) d = std::min(d, std::abs(q - p));
    }
    return std::min(cap, d / 2);
  };
  const double rho = radius > 0 ? radius : radius_of(c);
  const double length = std::abs(c - base);
  if (length <= rho) throw SingularityTooClose("basepoint lies inside the loop around " + target.str());
  const cplx dir = (c - base) / length;

  struct Detour {
    double lambda;
    double half;
    cplx center;
  };
  std::vector<Detour> detours;
  for (const cplx& p : pts) {
    if (std::abs(p - c) <= 1e-12) continue;
    const cplx rel = (p - base) * std::conj(dir);
    const double rp = radius_of(p);
    if (rel.real() > 0 && rel.real() < length - rho && std::abs(rel.imag()) < rp) {
      detours.push_back({rel.real(), std::sqrt(rp * rp - rel.imag() * rel.imag()), p});
    }
  }
  std::sort(detours.begin(), detours.end(), [](const Detour& a, const Detour& b) { return a.lambda < b.lambda; });

  LoopPath out;
  out.basepoint = base;
  out.enclosed = target;
  out.label = "loop around " + target.str();
  std::vector<Segment> outward;
  cplx cur = base;
  for (const Detour& d : detours) {
    const cplx enter = base + dir * (d.lambda - d.half);
    const cplx exit = base + dir * (d.lambda + d.half);
    outward.push_back(Segment::line(cur, enter));
    const double a0 = std::arg(enter - d.center);
    double a1 = std::arg(exit - d.center);
    while (a1 <= a0) a1 += kTwoPi;
    outward.push_back(Segment::arc(d.center, std::abs(enter - d.center), a0, a1));
    cur = exit;
  }
  const cplx entry = c - dir * rho;
  outward.push_back(Segment::line(cur, entry));
  out.segments = outward;
  const double theta = std::arg(entry - c);
  out.segments.push_back(Segment::arc(c, rho, theta, theta + kTwoPi));
  for (auto it = outward.rbegin(); it != outward.rend(); ++it) out.segments.push_back(it->reversed());
  return out;
}

LoopPath circle_loop(cplx base, cplx center, bool ccw) {
  LoopPath out;
  out.basepoint = base;
  const double theta = std::arg(base - center);
  const double r = std::abs(base - center);
  out.segments.push_back(Segment::arc(center, r, theta, ccw ? theta + kTwoPi : theta - kTwoPi));
  out.label = ccw ? "counter-clockwise circle" : "clockwise circle";
  return out;
}

namespace {

void snap_branch(BranchState& b) {
  const cplx t = b.t;
  cplx u = std::sqrt(8.0 - t * t * t);
  if (std::abs(-u - b.u) < std::abs(u - b.u)) u = -u;
  cplx v = std::sqrt(t);
  if (std::abs(-v - b.v) < std::abs(v - b.v)) v = -v;
  b.u = u;
  b.v = v;
}

// d(w, u, v)/dt along the surface.
std::array<cplx, 3> branch_rates(cplx t, cplx u, cplx v) {
  return {-3.0 * kSqrt2 * kI / (u * v * v), -3.0 * t * t / (2.0 * u), 1.0 / (2.0 * v)};
}

void check_clearance(const LoopPath& path, const std::vector<cplx>& singular, double clearance) {
  const double d = path.min_distance(singular);
  if (d < clearance) {
    std::ostringstream os;
    os << "path passes within " << d << " of a singular point (clearance " << clearance << ")";
    throw SingularityTooClose(os.str());
  }
}

}  // namespace

BranchState continue_branch(const LoopPath& path, const BranchState& start, double tol) {
  if (std::abs(start.t - path.basepoint) > 1e-12) throw Error("branch data is not at the path start");
  BranchState b = start;
  using State = OdeState<cplx, 3>;
  StepControl ctl;
  ctl.tol = tol;
  for (const Segment& seg : path.segments) {
    auto rhs = [&](double s, const State& y) -> State {
      const cplx t = seg.point(s);
      const cplx dt = seg.tangent(s);
      const auto r = branch_rates(t, y[1], y[2]);
      return {r[0] * dt, r[1] * dt, r[2] * dt};
    };
    State y{b.w, b.u, b.v};
    y = dp5_integrate<cplx, 3>(rhs, 0.0, 1.0, y, ctl);
    b = BranchState{seg.end(), y[0], y[1], y[2]};
    snap_branch(b);
  }
  return b;
}

TransportResult transport(const LinearODE2& e, const LoopPath& path, const TransportOptions& opt,
                          const std::optional<BranchState>& start) {
  check_clearance(path, embed_all(e.singular_points()), opt.clearance);
  TransportResult res;
  StepControl ctl;
  ctl.tol = opt.tol;
  OdeStats stats;
  if (e.is_exact()) {
    using State = OdeState<cplx, 4>;
    State y{cplx(1), cplx(0), cplx(0), cplx(1)};  // columns (X, X') of two solutions
    for (const Segment& seg : path.segments) {
      auto rhs = [&](double s, const State& z) -> State {
        const cplx t = seg.point(s);
        const cplx dt = seg.tangent(s);
        const auto c = e.eval(t);
        const cplx p = c.a1 / c.a2;
        const cplx q = c.a0 / c.a2;
        return {z[1] * dt, -(p * z[1] + q * z[0]) * dt, z[3] * dt, -(p * z[3] + q * z[2]) * dt};
      };
      y = dp5_integrate<cplx, 4>(rhs, 0.0, 1.0, y, ctl, &stats);
    }
    res.matrix = Matrix2{{{y[0], y[2]}, {y[1], y[3]}}};
  } else {
    if (!start) throw Error("family transport needs branch data at the path start");
    if (std::abs(start->t - path.basepoint) > 1e-12) throw Error("branch data is not at the path start");
    using State = OdeState<cplx, 7>;
    BranchState b = *start;
    State y{cplx(1), cplx(0), cplx(0), cplx(1), b.w, b.u, b.v};
    for (const Segment& seg : path.segments) {
      auto rhs = [&](double s, const State& z) -> State {
        const cplx t = seg.point(s);
        const cplx dt = seg.tangent(s);
        const auto c = e.eval(BranchState{t, z[4], z[5], z[6]});
        const cplx p = c.a1 / c.a2;
        const cplx q = c.a0 / c.a2;
        const auto r = branch_rates(t, z[5], z[6]);
        return {z[1] * dt, -(p * z[1] + q * z[0]) * dt, z[3] * dt, -(p * z[3] + q * z[2]) * dt,
                r[0] * dt, r[1] * dt, r[2] * dt};
      };
      y = dp5_integrate<cplx, 7>(rhs, 0.0, 1.0, y, ctl, &stats);
      b = BranchState{seg.end(), y[4], y[5], y[6]};
      snap_branch(b);
      y[5] = b.u;
      y[6] = b.v;
    }
    res.matrix = Matrix2{{{y[0], y[2]}, {y[1], y[3]}}};
    res.branch_end = b;
  }
  res.steps = stats.accepted;
  return res;
}

cplx det_prediction(const LinearODE2& e, const FieldElement& pole) {
  if (!e.is_exact()) throw Error("determinant prediction needs exact coefficients");
  if (!e.a2()(pole).is_zero()) throw NotAPole("determinant prediction at " + pole.str() + ", not a singular point");
  const RatFunc p(e.a1(), e.a2());
  const FieldElement res = pole_order(p, pole) > 0 ? residue_at(p, pole) : FieldElement(0);
  return std::exp(-kTwoPi * kI * res.to_complex());
}

namespace {

// Angle of c - base in [0, 2 pi), measured from the ray pointing from the origin side outward;
// points farther along the same ray come first because spokes pass them on the same side.
struct OrderedTarget {
  FieldElement point;
  double angle;
  double distance;
};

std::vector<FieldElement> traversal_order(cplx base, const std::vector<FieldElement>& singular) {
  std::vector<OrderedTarget> v;
  for (const auto& p : singular) {
    const cplx rel = (p.to_complex() - base) / base * std::abs(base);
    double a = std::arg(rel);
    if (std::abs(rel.imag()) < 1e-12 * std::abs(rel)) a = M_PI;
    if (a < 0) a += kTwoPi;
    v.push_back({p, a, std::abs(p.to_complex() - base)});
  }
  std::sort(v.begin(), v.end(), [](const OrderedTarget& x, const OrderedTarget& y) {
    if (std::abs(x.angle - y.angle) > 1e-12) return x.angle < y.angle;
    return x.distance > y.distance;
  });
  std::vector<FieldElement> out;
  for (const auto& t : v) out.push_back(t.point);
  return out;
}

MonodromyMatrix make_generator(const LinearODE2& e, const LoopPath& loop, const GeneratorOptions& opt) {
  MonodromyMatrix m;
  m.loop = loop;
  m.equation = e.tag();
  std::optional<BranchState> start;
  if (!e.is_exact()) start = BranchState::principal(opt.basepoint);
  m.entries = transport(e, loop, opt.transport, start).matrix;
  m.det = det(m.entries);
  if (e.is_exact() && loop.enclosed) {
    m.predicted_det = det_prediction(e, *loop.enclosed);
    m.det_residual = std::abs(m.det - *m.predicted_det);
  }
  return m;
}

GeneratorSet assemble(const LinearODE2& e, const GeneratorOptions& opt, bool parallel) {
  const std::vector<FieldElement> singular = e.singular_points();
  const std::vector<FieldElement> order = traversal_order(opt.basepoint, singular);
  std::vector<LoopPath> loops;
  for (const auto& c : order) loops.push_back(generator_loop(opt.basepoint, c, singular, opt.cap));
  loops.push_back(circle_loop(opt.basepoint, 0.0, false));
  loops.back().label = "infinity";

  std::vector<MonodromyMatrix> mats(loops.size());
  const long n = static_cast<long>(loops.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
      mats[static_cast<std::size_t>(i)] = make_generator(e, loops[static_cast<std::size_t>(i)], opt);
    }
  } else {
    for (long i = 0; i < n; ++i) mats[static_cast<std::size_t>(i)] = make_generator(e, loops[static_cast<std::size_t>(i)], opt);
  }

  GeneratorSet g;
  g.infinity = mats.back();
  mats.pop_back();
  g.finite = mats;
  g.product = identity();
  for (const auto& m : g.finite) g.product = multiply(m.entries, g.product);
  const Matrix2 defect = subtract(multiply(g.product, g.infinity.entries), identity());
  g.product_residual = operator_norm(defect) / std::max(1.0, operator_norm(g.product));
  return g;
}

}  // namespace

GeneratorSet generators(const LinearODE2& e, const GeneratorOptions& opt) { return assemble(e, opt, true); }

GeneratorSet generators_serial(const LinearODE2& e, const GeneratorOptions& opt) {
  return assemble(e, opt, false);
}

namespace {

struct WordChoice {
  std::vector<std::size_t> index;
  std::vector<bool> inverted;
};

std::vector<WordChoice> draw_words(std::size_t n_gens, int depth, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t leaves = std::size_t{1} << depth;
  std::vector<WordChoice> out(static_cast<std::size_t>(samples));
  for (auto& w : out) {
    for (std::size_t i = 0; i < leaves; ++i) {
      w.index.push_back(static_cast<std::size_t>(rng() % n_gens));
      w.inverted.push_back((rng() & 1U) != 0);
    }
  }
  return out;
}

Matrix2 adjugate(const Matrix2& a) { return Matrix2{{{a[1][1], -a[0][1]}, {-a[1][0], a[0][0]}}}; }

double word_deviation(const std::vector<Matrix2>& gens, const std::vector<Matrix2>& invs,
                      const WordChoice& w, int power_) {
  std::vector<Matrix2> level;
  for (std::size_t i = 0; i < w.index.size(); ++i) {
    level.push_back(w.inverted[i] ? invs[w.index[i]] : gens[w.index[i]]);
  }
  // Below the leaves every factor is a commutator, so det = 1 and the adjugate is the inverse.
  // Recomputing det there would cancel catastrophically once entries grow.
  auto inv = [&](const Matrix2& a, bool leaf) { return leaf ? inverse(a) : adjugate(a); };
  bool leaf = true;
  while (level.size() > 1) {
    std::vector<Matrix2> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      const Matrix2& a = level[i];
      const Matrix2& b = level[i + 1];
      next.push_back(multiply(multiply(a, b), multiply(inv(a, leaf), inv(b, leaf))));
    }
    level = next;
    leaf = false;
  }
  const double dev = operator_norm(subtract(power(level[0], power_), identity()));
  return std::isfinite(dev) ? std::min(dev, 1e300) : 1e300;
}

void check_power_args(const std::vector<Matrix2>& gens, int depth, int samples) {
  if (gens.empty()) throw Error("derived_power_test needs at least one generator");
  if (depth < 1 || depth > 6) throw Error("derived_power_test depth must lie in 1..6");
  if (samples < 1) throw Error("derived_power_test needs at least one sample");
}

}  // namespace

double derived_power_test(const std::vector<Matrix2>& gens, int depth, int power_, int samples,
                          std::uint64_t seed) {
  check_power_args(gens, depth, samples);
  const auto words = draw_words(gens.size(), depth, samples, seed);
  std::vector<Matrix2> invs;
  for (const auto& g : gens) invs.push_back(inverse(g));
  std::vector<double> dev(words.size());
  const long n = static_cast<long>(words.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    dev[static_cast<std::size_t>(i)] = word_deviation(gens, invs, words[static_cast<std::size_t>(i)], power_);
  }
  return *std::max_element(dev.begin(), dev.end());
}

double derived_power_test_serial(const std::vector<Matrix2>& gens, int depth, int power_, int samples,
                                 std::uint64_t seed) {
  check_power_args(gens, depth, samples);
  const auto words = draw_words(gens.size(), depth, samples, seed);
  std::vector<Matrix2> invs;
  for (const auto& g : gens) invs.push_back(inverse(g));
  double best = 0;
  for (const auto& w : words) best = std::max(best, word_deviation(gens, invs, w, power_));
  return best;
}

LoopPath sheaf_shift_loop(cplx base, double cap) {
  const LinearODE2 fam = LinearODE2::family(0.0, 0);
  const std::vector<FieldElement> singular = fam.singular_points();
  // Roots of t^3 = 8: 2, -2 w and 2 w - 2.
  const std::vector<FieldElement> roots = {FieldElement(2), FieldElement(-2) * FieldElement::omega(),
                                           FieldElement(-2) + FieldElement(2) * FieldElement::omega()};
  const BranchState start = BranchState::principal(base);
  for (const auto& x : roots) {
    for (const auto& y : roots) {
      if (x == y) continue;
      for (int orient = 0; orient < 4; ++orient) {
        LoopPath a = generator_loop(base, x, singular, cap);
        LoopPath b = generator_loop(base, y, singular, cap);
        if (orient & 1) a = a.reversed();
        if (orient & 2) b = b.reversed();
        LoopPath loop = a.then(b);
        const BranchState end = continue_branch(loop, start);
        if (std::abs(end.w - start.w - kTwoPi) < 1e-6 && std::abs(end.u - start.u) < 1e-8 &&
            std::abs(end.v - start.v) < 1e-8) {
          loop.label = "sheet translation: " + a.label + " then " + b.label;
          return loop;
        }
      }
    }
  }
  throw Error("no pair of loops around the roots of t^3 = 8 realizes the sheet translation");
}

}  // namespace rell::monodromy
