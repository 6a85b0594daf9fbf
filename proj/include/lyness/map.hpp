#pragma once

/**
 * @file map.hpp
 * @brief The k-dimensional Lyness map
 *
 *   F(x1, ..., xk) = (x2, ..., xk, (a + x2 + ... + xk) / x1),
 *
 * its inverse, iterates, Jacobian, and the closed-form Jacobian determinant,
 * plus the positive fixed point and the curves of 2-periodic points that
 * exist for k = 3 and k = 5.
 *
 * Every function is generic over the scalar backend (see scalar.hpp); with
 * Rat all results are exact.
 */

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lyness/errors.hpp"
#include "lyness/matrix.hpp"
#include "lyness/scalar.hpp"
#include "lyness/types.hpp"

namespace lyness {

/// x[from] + ... + x[to - 1] (0-based, half open).
template <Scalar T>
T partial_sum(Coords<T> x, std::size_t from, std::size_t to) {
  T acc(0);
  for (std::size_t i = from; i < to; ++i) acc += x[i];
  return acc;
}

/// a + x2 + ... + xk, the numerator of the new coordinate.
template <Scalar T>
T tail_numerator(const Params<T>& p, Coords<T> x) {
  return p.a + partial_sum<T>(x, 1, x.size());
}

template <Scalar T>
Point<T> lyness_step(const Params<T>& p, Coords<T> x) {
  require_point(p, x);
  Point<T> y(x.begin() + 1, x.end());
  y.push_back(tail_numerator(p, x) / x[0]);
  return y;
}

/// F^{-1}(y) = ((a + y1 + ... + y_{k-1}) / yk, y1, ..., y_{k-1}).
template <Scalar T>
Point<T> lyness_inverse(const Params<T>& p, Coords<T> y) {
  require_point(p, y);
  Point<T> x;
  x.reserve(y.size());
  x.push_back((p.a + partial_sum<T>(y, 0, y.size() - 1)) / y.back());
  x.insert(x.end(), y.begin(), y.end() - 1);
  return x;
}

/// Trace of |n| + 1 states starting at x; negative n walks backwards with
/// the inverse map. Float traces stop early (truncated = true) on overflow
/// or loss of positivity.
template <Scalar T>
OrbitTrace<T> iterate(const Params<T>& p, Coords<T> x, long n) {
  require_point(p, x);
  OrbitTrace<T> trace{p, n < 0 ? n : 0, {}, {}, false, {}};
  const long steps = n < 0 ? -n : n;
  std::vector<Point<T>> states;
  states.reserve(static_cast<std::size_t>(steps) + 1);
  states.emplace_back(x.begin(), x.end());
  for (long i = 0; i < steps; ++i) {
    const Point<T>& cur = states.back();
    Point<T> next = n < 0 ? lyness_inverse<T>(p, cur) : lyness_step<T>(p, cur);
    bool ok = true;
    for (const T& c : next) ok = ok && is_finite(c) && is_positive(c);
    if (!ok) {
      trace.truncated = true;
      trace.note = "orbit left the positive orthant or overflowed at step " + std::to_string(i + 1);
      break;
    }
    states.push_back(std::move(next));
  }
  if (n < 0) {
    std::reverse(states.begin(), states.end());
    trace.first_index = -static_cast<long>(states.size()) + 1;
  }
  trace.states = std::move(states);
  return trace;
}

/// k×k Jacobian of F: shift rows, then the gradient of the last component,
/// (-(a + x2 + ... + xk)/x1², 1/x1, ..., 1/x1).
template <Scalar T>
Matrix<T> jacobian(const Params<T>& p, Coords<T> x) {
  require_point(p, x);
  const auto k = static_cast<std::size_t>(p.k);
  Matrix<T> m(k, k);
  for (std::size_t i = 0; i + 1 < k; ++i) m(i, i + 1) = T(1);
  const T inv = T(1) / x[0];
  m(k - 1, 0) = -tail_numerator(p, x) * inv * inv;
  for (std::size_t j = 1; j < k; ++j) m(k - 1, j) = inv;
  return m;
}

/// det DF(x) = (-1)^k (a + x2 + ... + xk) / x1².
///
/// Cofactor expansion of the companion-form Jacobian along its first
/// column. Negative on the positive orthant for odd k, positive for even k.
template <Scalar T>
T jacobian_det(const Params<T>& p, Coords<T> x) {
  require_point(p, x);
  const T value = tail_numerator(p, x) / (x[0] * x[0]);
  return p.k % 2 == 0 ? value : -value;
}

/// The positive fixed point (c, ..., c), c the positive root of
/// c² - (k-1)c - a = 0.
struct FixedPoint {
  int k = 0;
  double coordinate = 0.0;
  std::vector<double> point;
  /// Coefficients {1, -(k-1), -a} of the defining quadratic in c.
  std::vector<Rat> quadratic;
  /// Set when the discriminant (k-1)² + 4a is a rational square.
  std::optional<Rat> exact;

  /// The fixed point as an exact rational point; throws if c is irrational.
  [[nodiscard]] Point<Rat> exact_point() const {
    if (!exact) throw DomainError("fixed point coordinate is irrational for this parameter");
    return Point<Rat>(static_cast<std::size_t>(k), *exact);
  }
};

namespace detail {

inline std::optional<Rat> rational_sqrt(const Rat& r) {
  if (r.sign() < 0) return std::nullopt;
  const mpz_class num = r.numerator();
  const mpz_class den = r.denominator();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0 || mpz_perfect_square_p(den.get_mpz_t()) == 0) return std::nullopt;
  mpz_class sn;
  mpz_class sd;
  mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
  return Rat(sn, sd);
}

}  // namespace detail

inline FixedPoint fixed_point(const Params<Rat>& p) {
  p.validate(2);
  FixedPoint fp;
  fp.k = p.k;
  const Rat km1(p.k - 1);
  fp.quadratic = {Rat(1), -km1, -p.a};
  const Rat disc = km1 * km1 + Rat(4) * p.a;
  if (auto root = detail::rational_sqrt(disc)) fp.exact = (km1 + *root) / Rat(2);
  const double kd = p.k - 1;
  fp.coordinate = fp.exact ? fp.exact->to_double() : 0.5 * (kd + std::sqrt(kd * kd + 4.0 * p.a.to_double()));
  fp.point.assign(static_cast<std::size_t>(p.k), fp.coordinate);
  return fp;
}

/// A point of the curve of 2-periodic points:
///   k = 3:  (x, (x+a)/(x-1), x),                       x > 1,
///   k = 5:  (x, (2x+a)/(x-2), x, (2x+a)/(x-2), x),     x > 2.
template <Scalar T>
Point<T> two_periodic_point(const Params<T>& p, const T& x) {
  p.validate(2);
  if (p.k == 3) {
    if (!(x > T(1))) throw DomainError("two-periodic curve for k=3 needs x > 1");
    const T y = (x + p.a) / (x - T(1));
    return {x, y, x};
  }
  if (p.k == 5) {
    if (!(x > T(2))) throw DomainError("two-periodic curve for k=5 needs x > 2");
    const T y = (T(2) * x + p.a) / (x - T(2));
    return {x, y, x, y, x};
  }
  throw UnsupportedError("two-periodic curve is only available for k = 3 and k = 5");
}

}  // namespace lyness
