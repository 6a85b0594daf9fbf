#pragma once

/**
 * @file reduction.hpp
 * @brief Order reduction of F∘F on level sets of W for k = 3 and k = 5.
 *
 * On {W = w} one coordinate is a function of the others, with kappa = 1/w:
 *
 *   k = 3:  y = kappa (x+1)(z+1)
 *   k = 5:  t = kappa (x+1)(z+1)(s+1) / y
 *
 * so F∘F restricted to the level set becomes a map of one dimension less
 * carrying the extra parameter kappa. The reduced states are the full
 * states with the eliminated coordinate dropped: (x1, x3) for k = 3 and
 * (x1, x2, x3, x5) for k = 5.
 */

#include <algorithm>
#include <array>
#include <vector>

#include "lyness/errors.hpp"
#include "lyness/invariants.hpp"
#include "lyness/map.hpp"
#include "lyness/types.hpp"

namespace lyness {

template <Scalar T>
struct ReducedParams {
  T a{};
  T kappa{};

  void validate() const {
    if (sign_of(a) < 0) throw DomainError("parameter a must be non-negative");
    if (!is_positive(kappa)) throw DomainError("kappa must be positive");
  }
};

namespace detail {

template <Scalar T, std::size_t N>
void require_positive_reduced(const std::array<T, N>& r) {
  for (const T& v : r) {
    if (!is_positive(v)) throw DomainError("reduced coordinates must be positive");
  }
}

}  // namespace detail

/// (x, z) -> (x, kappa (x+1)(z+1), z).
template <Scalar T>
Point<T> lift_k3(const ReducedParams<T>& rp, const std::array<T, 2>& r) {
  rp.validate();
  detail::require_positive_reduced(r);
  const auto& [x, z] = r;
  return {x, rp.kappa * (x + T(1)) * (z + T(1)), z};
}

/// (x, z) -> (z, (a + kappa + z (kappa + 1)) / (kappa x (z + 1))).
template <Scalar T>
std::array<T, 2> reduced_step_k3(const ReducedParams<T>& rp, const std::array<T, 2>& r) {
  rp.validate();
  detail::require_positive_reduced(r);
  const auto& [x, z] = r;
  return {z, (rp.a + rp.kappa + z * (rp.kappa + T(1))) / (rp.kappa * x * (z + T(1)))};
}

/// (x, y, z, s) -> (x, y, z, kappa (x+1)(z+1)(s+1)/y, s).
template <Scalar T>
Point<T> lift_k5(const ReducedParams<T>& rp, const std::array<T, 4>& r) {
  rp.validate();
  detail::require_positive_reduced(r);
  const auto& [x, y, z, s] = r;
  return {x, y, z, rp.kappa * (x + T(1)) * (z + T(1)) * (s + T(1)) / y, s};
}

/// (x, y, z, s) -> (z, t, s, (p2 x² + p1 x + p0) / (x y²)) with
/// t = kappa (x+1)(z+1)(s+1)/y and
///   p2 = kappa (s+1)(z+1)
///   p1 = 2 kappa (s+1)(z+1) + y (a + s + z)
///   p0 = kappa (s+1)(z+1) + y (z + s + a + y).
template <Scalar T>
std::array<T, 4> reduced_step_k5(const ReducedParams<T>& rp, const std::array<T, 4>& r) {
  rp.validate();
  detail::require_positive_reduced(r);
  const auto& [x, y, z, s] = r;
  const T base = rp.kappa * (s + T(1)) * (z + T(1));
  const T p2 = base;
  const T p1 = T(2) * base + y * (rp.a + s + z);
  const T p0 = base + y * (z + s + rp.a + y);
  const T t = rp.kappa * (x + T(1)) * (z + T(1)) * (s + T(1)) / y;
  return {z, t, s, (p2 * x * x + p1 * x + p0) / (x * y * y)};
}

/// Drops the coordinate eliminated by the W constraint.
template <Scalar T>
std::vector<T> project_reduced(int k, Coords<T> x) {
  if (k == 3) return {x[0], x[2]};
  if (k == 5) return {x[0], x[1], x[2], x[4]};
  throw UnsupportedError("order reduction is provided for k = 3 and k = 5");
}

/// kappa = 1 / W(x), the reduction parameter of the level set through x.
template <Scalar T>
ReducedParams<T> reduced_params_for(const Params<T>& p, Coords<T> x) {
  return ReducedParams<T>{p.a, T(1) / eval_W(p, x)};
}

/// One reduced step on a state stored as a vector of length k-1.
template <Scalar T>
std::vector<T> reduced_step(int k, const ReducedParams<T>& rp, Coords<T> r) {
  if (k == 3) {
    const auto out = reduced_step_k3<T>(rp, {r[0], r[1]});
    return {out.begin(), out.end()};
  }
  if (k == 5) {
    const auto out = reduced_step_k5<T>(rp, {r[0], r[1], r[2], r[3]});
    return {out.begin(), out.end()};
  }
  throw UnsupportedError("order reduction is provided for k = 3 and k = 5");
}

/// Runs n reduced steps from the projection of x0 (kappa = 1/W(x0)) next to
/// n steps of F∘F from x0 and returns the largest coordinatewise deviation
/// between the projected full orbit and the reduced orbit.
template <Scalar T>
T semiconjugacy_residual(const Params<T>& p, Coords<T> x0, long n) {
  if (p.k != 3 && p.k != 5) throw UnsupportedError("order reduction is provided for k = 3 and k = 5");
  require_point(p, x0);
  const auto rp = reduced_params_for(p, x0);
  Point<T> full(x0.begin(), x0.end());
  std::vector<T> reduced = project_reduced<T>(p.k, x0);
  T worst(0);
  for (long i = 0; i < n; ++i) {
    full = lyness_step<T>(p, lyness_step<T>(p, full));
    reduced = reduced_step<T>(p.k, rp, reduced);
    const auto projected = project_reduced<T>(p.k, full);
    for (std::size_t j = 0; j < reduced.size(); ++j) worst = std::max(worst, abs_of(T(projected[j] - reduced[j])));
  }
  return worst;
}

}  // namespace lyness
