#pragma once

/**
 * @file dynamics.hpp
 * @brief Orbit-level analysis built on the invariants.
 *
 * Sign-of-Z tracking and the odd-period exclusion it implies (odd k), points
 * of the invariant set G = {Z = 0}, the density-transport identities behind
 * the invariant measures dx/Π and dx/|Z| of F∘F, the profile of the
 * invariants along the 2-periodic curve for k = 5, and a rotation-number
 * estimator for F∘F when k = 3.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "lyness/errors.hpp"
#include "lyness/invariants.hpp"
#include "lyness/map.hpp"
#include "lyness/types.hpp"

namespace lyness {

/// Iterates with the level signature recorded at every state.
template <Scalar T>
OrbitTrace<T> orbit_signature(const Params<T>& p, Coords<T> x0, long n) {
  OrbitTrace<T> trace = iterate(p, x0, n);
  trace.signatures.reserve(trace.states.size());
  for (const auto& s : trace.states) trace.signatures.push_back(level_signature<T>(p, s));
  return trace;
}

/// True when sign(Z) strictly alternates in {-1, +1} along the trace.
/// Requires signatures (odd k).
template <Scalar T>
bool signs_alternate(const OrbitTrace<T>& trace) {
  for (std::size_t i = 0; i < trace.signatures.size(); ++i) {
    const auto& z = trace.signatures[i].z_sign;
    if (!z || *z == 0) return false;
    if (i > 0 && *z != -*trace.signatures[i - 1].z_sign) return false;
  }
  return true;
}

/// Largest relative deviation of V1, V2 (and V3) from their initial values.
template <Scalar T>
double signature_drift(const OrbitTrace<T>& trace) {
  double worst = 0.0;
  if (trace.signatures.empty()) return worst;
  const auto& ref = trace.signatures.front();
  auto rel = [](const T& v, const T& r) { return std::fabs(to_double(T(v - r))) / std::fabs(to_double(r)); };
  for (const auto& s : trace.signatures) {
    worst = std::max(worst, rel(s.v1, ref.v1));
    worst = std::max(worst, rel(s.v2, ref.v2));
    if (s.v3 && ref.v3) worst = std::max(worst, rel(*s.v3, *ref.v3));
  }
  return worst;
}

/// Coordinates of an orbit on {V1 = h} stay inside [1/h, h]: each factor
/// (xi + 1)/xi exceeds 1 and a + Σ x exceeds every coordinate, while
/// (Σ x) Π (1 + 1/xi) >= 1.
struct OrbitBounds {
  double level = 0.0;  // h = V1 of the first state
  double min_coordinate = 0.0;
  double max_coordinate = 0.0;
  [[nodiscard]] bool within_level_bounds() const {
    return max_coordinate <= level && min_coordinate >= 1.0 / level;
  }
};

template <Scalar T>
OrbitBounds orbit_bounds(const OrbitTrace<T>& trace) {
  OrbitBounds b;
  b.level = to_double(eval_V1(trace.params, trace.states.front()));
  b.min_coordinate = std::numeric_limits<double>::infinity();
  b.max_coordinate = 0.0;
  for (const auto& s : trace.states) {
    for (const T& c : s) {
      b.min_coordinate = std::min(b.min_coordinate, to_double(c));
      b.max_coordinate = std::max(b.max_coordinate, to_double(c));
    }
  }
  return b;
}

/// A point of G = {Z = 0}. residual = |Z(point)|, image_residual = |Z(F(point))|,
/// both evaluated in long double.
struct GPoint {
  Point<double> point;
  double residual = 0.0;
  double image_residual = 0.0;
};

/// Solves Z = 0 for one unknown q placed at every 1-based index in
/// solve_for, the other coordinates taken from `coords`. The root is
/// bracketed on a log grid over (0, 1e6] and refined by bisection in long
/// double. Throws NotFoundError when Z keeps one sign on the grid.
inline GPoint sample_G_point(const Params<double>& p, Coords<double> coords, std::span<const int> solve_for) {
  require_odd(p, "G");
  require_dimension(p, coords);
  if (solve_for.empty()) throw DomainError("sample_G_point needs at least one coordinate to solve for");
  for (int idx : solve_for) {
    if (idx < 1 || idx > p.k) throw DomainError("solve_for index out of range");
  }
  const auto pl = p.as<long double>();
  std::vector<long double> base(coords.begin(), coords.end());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const bool solved = std::find(solve_for.begin(), solve_for.end(), static_cast<int>(i + 1)) != solve_for.end();
    if (!solved && !(base[i] > 0)) throw DomainError("fixed coordinates must be positive");
  }
  auto z_at = [&](long double q) {
    for (int idx : solve_for) base[static_cast<std::size_t>(idx - 1)] = q;
    return eval_Z<long double>(pl, base);
  };

  constexpr int kGrid = 4000;
  const long double lo_exp = -9.0L;
  const long double hi_exp = 6.0L;
  long double prev_q = std::pow(10.0L, lo_exp);
  long double prev_z = z_at(prev_q);
  std::optional<std::pair<long double, long double>> bracket;
  if (prev_z == 0) bracket = std::pair{prev_q, prev_q};
  for (int i = 1; i <= kGrid && !bracket; ++i) {
    const long double q = std::pow(10.0L, lo_exp + (hi_exp - lo_exp) * i / kGrid);
    const long double z = z_at(q);
    if (z == 0 || (z > 0) != (prev_z > 0)) bracket = std::pair{prev_q, q};
    prev_q = q;
    prev_z = z;
  }
  if (!bracket) throw NotFoundError("Z keeps one sign for the unknown on (0, 1e6]");

  auto [lo, hi] = *bracket;
  const bool lo_positive = z_at(lo) > 0;
  for (int it = 0; it < 200 && lo != hi; ++it) {
    const long double mid = lo + (hi - lo) / 2;
    if (mid == lo || mid == hi) break;
    const long double z = z_at(mid);
    if (z == 0) {
      lo = hi = mid;
      break;
    }
    if ((z > 0) == lo_positive) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const long double root = std::fabs(z_at(lo)) <= std::fabs(z_at(hi)) ? lo : hi;

  GPoint g;
  for (int idx : solve_for) base[static_cast<std::size_t>(idx - 1)] = static_cast<long double>(static_cast<double>(root));
  g.point.assign(base.begin(), base.end());
  std::vector<long double> exact_point(g.point.begin(), g.point.end());
  g.residual = static_cast<double>(std::fabs(eval_Z<long double>(pl, exact_point)));
  g.image_residual = static_cast<double>(std::fabs(eval_Z<long double>(pl, lyness_step<long double>(pl, exact_point))));
  return g;
}

inline GPoint sample_G_point(const Params<double>& p, Coords<double> coords, std::initializer_list<int> solve_for) {
  return sample_G_point(p, coords, std::span<const int>(solve_for.begin(), solve_for.size()));
}

struct OddPeriodVerdict {
  /// Z(x) != 0: no odd period is possible, decided without iterating.
  bool certified_no_odd_period = false;
  /// Smallest odd period found by iteration when Z(x) = 0.
  std::optional<long> odd_period;
};

/// For odd k, sign(Z) flips under F off G, so a point with Z != 0 cannot
/// return to itself after an odd number of steps. Points on G are iterated
/// up to max_odd_period looking for an odd return.
template <Scalar T>
OddPeriodVerdict odd_period_guard(const Params<T>& p, Coords<T> x, long max_odd_period) {
  require_odd(p, "odd period exclusion");
  OddPeriodVerdict v;
  if (sign_of(eval_Z(p, x)) != 0) {
    v.certified_no_odd_period = true;
    return v;
  }
  Point<T> cur(x.begin(), x.end());
  const Point<T> start = cur;
  for (long step = 1; step <= max_odd_period; ++step) {
    cur = lyness_step<T>(p, cur);
    if (step % 2 == 1 && cur == start) {
      v.odd_period = step;
      break;
    }
  }
  return v;
}

/// Residuals of Π∘F² = det(DF²) Π and Z∘F² = det(DF²) Z (odd k), the
/// pointwise laws that make dx/Π and dx/|Z| invariant measures of F∘F.
template <Scalar T>
std::pair<T, T> measure_density_residual(const Params<T>& p, Coords<T> x) {
  require_odd(p, "measure density");
  const auto fx = lyness_step(p, x);
  const auto f2x = lyness_step<T>(p, fx);
  const T det2 = jacobian_det<T>(p, fx) * jacobian_det(p, x);
  return {eval_Pi<T>(p, f2x) - det2 * eval_Pi(p, x), eval_Z<T>(p, f2x) - det2 * eval_Z(p, x)};
}

/// (v1, v2, v3) = (V1, V2, V3) along the 2-periodic curve of k = 5 at
/// parameter x > 2.
template <Scalar T>
std::array<T, 3> v_profile(const Params<T>& p, const T& x) {
  if (p.k != 5) throw UnsupportedError("the invariant profile along the 2-periodic curve is provided for k = 5");
  if (!(x > T(2))) throw DomainError("profile parameter must exceed 2");
  const auto pt = two_periodic_point(p, x);
  return {eval_V1<T>(p, pt), eval_V2<T>(p, pt), eval_V3<T>(p, pt)};
}

struct ProfileMinimum {
  double location = 0.0;
  double value = 0.0;
};

/// Golden-section search for the minimum of v1 on (2, upper], run in long
/// double so the location resolves to ~1e-9.
inline ProfileMinimum minimize_v1_profile(const Params<double>& p, double upper = 1.0e3) {
  const auto pl = p.as<long double>();
  auto f = [&](long double x) { return v_profile<long double>(pl, x)[0]; };
  const long double inv_phi = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  long double lo = 2.0L + 1e-9L;
  long double hi = upper;
  long double c = hi - inv_phi * (hi - lo);
  long double d = lo + inv_phi * (hi - lo);
  long double fc = f(c);
  long double fd = f(d);
  for (int it = 0; it < 400 && hi - lo > 1e-15L * hi; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  const long double x = (lo + hi) / 2;
  return {static_cast<double>(x), static_cast<double>(f(x))};
}

/// The two solutions x1 < 2 + sqrt(4 + a) < x2 of v1(x) = h, k = 5.
/// Levels within 1e-12 (relative) of the minimum count as tangency and are
/// rejected with NotFoundError.
inline std::pair<double, double> solve_v1_level(const Params<double>& p, double h) {
  if (p.k != 5) throw UnsupportedError("v1 level solve is provided for k = 5");
  const auto pl = p.as<long double>();
  auto v1 = [&](long double x) { return v_profile<long double>(pl, x)[0]; };
  const long double c = 2.0L + std::sqrt(4.0L + static_cast<long double>(p.a));
  const long double vmin = v1(c);
  const auto hl = static_cast<long double>(h);
  if (!(hl > vmin * (1.0L + 1e-12L))) throw NotFoundError("level is at or below the minimum of v1");

  // v1 decreases on (2, c) and increases on (c, inf).
  auto bisect = [&](long double below, long double above) {
    // v1(below side) > h on the outer end; keep `outer` where v1 > h.
    long double inner = below;
    long double outer = above;
    for (int it = 0; it < 300; ++it) {
      const long double mid = inner + (outer - inner) / 2;
      if (mid == inner || mid == outer) break;
      if (v1(mid) > hl) {
        outer = mid;
      } else {
        inner = mid;
      }
    }
    const long double ri = static_cast<double>(inner);
    const long double ro = static_cast<double>(outer);
    return static_cast<double>(std::fabs(v1(ri) - hl) <= std::fabs(v1(ro) - hl) ? ri : ro);
  };

  long double left_outer = c;
  do {
    left_outer = 2.0L + (left_outer - 2.0L) / 2;
  } while (v1(left_outer) <= hl);
  long double right_outer = c;
  do {
    right_outer *= 2;
  } while (v1(right_outer) <= hl);
  return {bisect(c, left_outer), bisect(c, right_outer)};
}

struct RotationEstimate {
  double value = 0.0;
  long samples = 0;
};

/// Rotation number of F∘F on the invariant curve through x0 (k = 3).
///
/// The F∘F orbit is projected onto the plane through its centroid spanned
/// by its two principal directions; the estimate is the mean angular
/// advance per step over 2π. The plane is oriented so that the largest
/// component of its normal is positive, which makes estimates from
/// different starting points on the same curve comparable.
inline RotationEstimate rotation_number(const Params<double>& p, Coords<double> x0, long n) {
  if (p.k != 3) throw UnsupportedError("rotation number estimation is provided for k = 3");
  if (n < 2) throw DomainError("rotation number needs at least two steps");
  require_point(p, x0);

  std::vector<Eigen::Vector3d> pts;
  pts.reserve(static_cast<std::size_t>(n) + 1);
  Point<double> x(x0.begin(), x0.end());
  for (long i = 0; i <= n; ++i) {
    pts.emplace_back(x[0], x[1], x[2]);
    x = lyness_step<double>(p, lyness_step<double>(p, x));
  }
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (const auto& q : pts) centroid += q;
  centroid /= static_cast<double>(pts.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& q : pts) cov += (q - centroid) * (q - centroid).transpose();
  cov /= static_cast<double>(pts.size());

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  const Eigen::Vector3d values = eig.eigenvalues();  // ascending
  const double scale = std::max(1.0, centroid.squaredNorm());
  if (values(2) <= 1e-24 * scale || values(1) <= 1e-24 * scale) {
    throw DomainError("degenerate orbit: projection collapses to a point or a line");
  }
  const Eigen::Vector3d e1 = eig.eigenvectors().col(2);
  Eigen::Vector3d e2 = eig.eigenvectors().col(1);
  const Eigen::Vector3d normal = e1.cross(e2);
  Eigen::Index largest = 0;
  normal.cwiseAbs().maxCoeff(&largest);
  if (normal(largest) < 0) e2 = -e2;

  constexpr double two_pi = 2.0 * std::numbers::pi;
  double total = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Eigen::Vector3d d = pts[i] - centroid;
    const double theta = std::atan2(d.dot(e2), d.dot(e1));
    if (i > 0) total += std::fmod(theta - prev + 2.0 * two_pi, two_pi);
    prev = theta;
  }
  return {total / (two_pi * static_cast<double>(n)), n};
}

}  // namespace lyness
