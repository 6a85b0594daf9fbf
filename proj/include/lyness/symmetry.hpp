#pragma once

/**
 * @file symmetry.hpp
 * @brief Rational Lie symmetry X_k of the Lyness map and its residuals.
 *
 * With Li = 1 + xi + x_{i+1}, R = a + Σ x + x1 xk (indices 1-based):
 *
 *   X1 = (x1+1) Π_{i=2}^{k-1} Li (a + Σ_{i<k} xi - x2 xk) / Π_{i≥2} xi
 *   Xm = (xm+1) Π_{i≠m-1,m} Li · R · (x_{m-1} - x_{m+1}) / Π_{i≠m} xi,  2 ≤ m ≤ k-1
 *   Xk = -(xk+1) Π_{i=1}^{k-2} Li (a + Σ_{i≥2} xi - x1 x_{k-1}) / Π_{i<k} xi
 *
 * and X(F(x)) = DF(x) X(x) holds identically for k ≥ 3. Components are
 * evaluated straight from these products; the shift law X_{i+1} = X_i∘F is
 * checked, never used to build them.
 */

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "lyness/gradient.hpp"
#include "lyness/invariants.hpp"
#include "lyness/map.hpp"
#include "lyness/types.hpp"

namespace lyness {

namespace detail {

template <Scalar T>
void require_symmetry_dimension(const Params<T>& p) {
  if (p.k < 3) throw UnsupportedError("the Lie symmetry needs k >= 3");
}

// Li with 1-based i.
template <Scalar T>
T link(Coords<T> x, int i) {
  return T(1) + x[static_cast<std::size_t>(i - 1)] + x[static_cast<std::size_t>(i)];
}

// Product of Li over i in [first, last] (1-based, inclusive), skipping
// skip_a and skip_b.
template <Scalar T>
T link_product(Coords<T> x, int first, int last, int skip_a = 0, int skip_b = 0) {
  T acc(1);
  for (int i = first; i <= last; ++i) {
    if (i == skip_a || i == skip_b) continue;
    acc *= link<T>(x, i);
  }
  return acc;
}

template <Scalar T>
T coord(Coords<T> x, int i) {
  return x[static_cast<std::size_t>(i - 1)];
}

template <Scalar T>
T product_except(Coords<T> x, int skip) {
  T acc(1);
  for (int i = 1; i <= static_cast<int>(x.size()); ++i) {
    if (i != skip) acc *= coord<T>(x, i);
  }
  return acc;
}

}  // namespace detail

/// Component m (1-based) of X_k at x.
template <Scalar T>
T symmetry_component(const Params<T>& p, Coords<T> x, int m) {
  using detail::coord;
  detail::require_symmetry_dimension(p);
  require_point(p, x);
  const int k = p.k;
  if (m < 1 || m > k) throw DomainError("symmetry component index out of range");

  if (m == 1) {
    const T factor = p.a + partial_sum<T>(x, 0, x.size() - 1) - coord<T>(x, 2) * coord<T>(x, k);
    return (coord<T>(x, 1) + T(1)) * detail::link_product<T>(x, 2, k - 1) * factor / detail::product_except<T>(x, 1);
  }
  if (m == k) {
    const T factor = p.a + partial_sum<T>(x, 1, x.size()) - coord<T>(x, 1) * coord<T>(x, k - 1);
    return -((coord<T>(x, k) + T(1)) * detail::link_product<T>(x, 1, k - 2) * factor) / detail::product_except<T>(x, k);
  }
  const T r = p.a + partial_sum<T>(x, 0, x.size()) + coord<T>(x, 1) * coord<T>(x, k);
  return (coord<T>(x, m) + T(1)) * detail::link_product<T>(x, 1, k - 1, m - 1, m) * r *
         (coord<T>(x, m - 1) - coord<T>(x, m + 1)) / detail::product_except<T>(x, m);
}

/// All k components of X_k at x.
template <Scalar T>
std::vector<T> eval_X(const Params<T>& p, Coords<T> x) {
  detail::require_symmetry_dimension(p);
  require_point(p, x);
  std::vector<T> out;
  out.reserve(x.size());
  for (int m = 1; m <= p.k; ++m) out.push_back(symmetry_component(p, x, m));
  return out;
}

/// The field X_k for one parameter set, as a callable.
template <Scalar T>
class SymmetryField {
 public:
  explicit SymmetryField(Params<T> p) : params_(std::move(p)) { detail::require_symmetry_dimension(params_); }

  [[nodiscard]] const Params<T>& params() const { return params_; }
  std::vector<T> operator()(Coords<T> x) const { return eval_X(params_, x); }
  T component(Coords<T> x, int m) const { return symmetry_component(params_, x, m); }

 private:
  Params<T> params_;
};

/// X(F(x)) - DF(x) X(x); identically zero.
template <Scalar T>
std::vector<T> lie_residual(const Params<T>& p, Coords<T> x) {
  const auto fx = lyness_step(p, x);
  auto lhs = eval_X<T>(p, fx);
  const auto rhs = jacobian(p, x).apply(eval_X(p, x));
  for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] -= rhs[i];
  return lhs;
}

/// X_{i+1}(x) - X_i(F(x)) for 1 <= i <= k-1.
template <Scalar T>
T shift_residual(const Params<T>& p, Coords<T> x, int i) {
  detail::require_symmetry_dimension(p);
  if (i < 1 || i > p.k - 1) throw DomainError("shift index must lie in 1..k-1");
  const auto fx = lyness_step(p, x);
  return symmetry_component(p, x, i + 1) - symmetry_component<T>(p, fx, i);
}

/// X_k(F) + ((a + Σ_{i≥2} xi)/x1²) X1 - (1/x1) Σ_{i≥2} Xi; identically zero.
template <Scalar T>
T compatibility_residual(const Params<T>& p, Coords<T> x) {
  const auto fx = lyness_step(p, x);
  const auto field = eval_X(p, x);
  T tail(0);
  for (std::size_t i = 1; i < field.size(); ++i) tail += field[i];
  return symmetry_component<T>(p, fx, p.k) + tail_numerator(p, x) / (x[0] * x[0]) * field[0] - tail / x[0];
}

/// Whether X_k(V) = 0 is an asserted identity for this (k, invariant) pair:
/// V1, V2 for k = 3 and 4; V1, V2, V3 for k = 5.
inline bool annihilation_supported(int k, Invariant which) {
  if (k == 3 || k == 4) return which == Invariant::V1 || which == Invariant::V2;
  if (k == 5) return which == Invariant::V1 || which == Invariant::V2 || which == Invariant::V3;
  return false;
}

/// ∇V(x) · X(x), the derivative of V along the symmetry.
template <Scalar T>
T annihilation_residual(const Params<T>& p, Coords<T> x, Invariant which) {
  if (!annihilation_supported(p.k, which)) {
    throw UnsupportedError(std::string("X(") + name_of(which) + ") = 0 is not asserted for k=" + std::to_string(p.k));
  }
  const auto field = eval_X(p, x);
  const auto pd = p.template as<Dual<T>>();
  return directional_derivative<T>([&](std::span<const Dual<T>> xd) { return evaluate<Dual<T>>(which, pd, xd); },
                                   x, std::span<const T>(field));
}

/// For k >= 6,
///   C - L2 L3 (Π_{i=4}^{k-2} Li) [x1 x2 L_{k-1} - x_{k-1} xk L1],
/// where C = Σ_{m=2}^{k-1} xm(xm+1)(x_{m-1} - x_{m+1}) Π_{i≠m-1,m} Li.
/// This is the factorisation of C used to establish the compatibility
/// condition for general k; it vanishes identically.
template <Scalar T>
T claim_residual(const Params<T>& p, Coords<T> x) {
  using detail::coord;
  if (p.k < 6) throw UnsupportedError("the factorisation identity is stated for k >= 6");
  require_dimension(p, x);
  const int k = p.k;
  T c(0);
  for (int m = 2; m <= k - 1; ++m) {
    const T xm = coord<T>(x, m);
    c += xm * (xm + T(1)) * (coord<T>(x, m - 1) - coord<T>(x, m + 1)) * detail::link_product<T>(x, 1, k - 1, m - 1, m);
  }
  const T bracket = coord<T>(x, 1) * coord<T>(x, 2) * detail::link<T>(x, k - 1) -
                    coord<T>(x, k - 1) * coord<T>(x, k) * detail::link<T>(x, 1);
  return c - detail::link<T>(x, 2) * detail::link<T>(x, 3) * detail::link_product<T>(x, 4, k - 2) * bracket;
}

/// max_i |X_i(x)|. Zero exactly at equilibria of the symmetry field.
template <Scalar T>
T equilibrium_residual(const Params<T>& p, Coords<T> x) {
  if (p.k != 4 && p.k != 5) throw UnsupportedError("equilibrium analysis is provided for k = 4 and k = 5");
  T best(0);
  for (const T& v : eval_X(p, x)) best = std::max(best, abs_of(v));
  return best;
}

}  // namespace lyness
