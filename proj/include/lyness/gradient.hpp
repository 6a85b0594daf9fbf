#pragma once

#include <span>
#include <utility>
#include <vector>

#include "lyness/dual.hpp"
#include "lyness/matrix.hpp"
#include "lyness/scalar.hpp"

namespace lyness {

/// Partial derivatives of f at x by one forward dual pass per coordinate.
/// f must be callable with std::span<const Dual<T>> and return Dual<T>.
/// Poles of f surface as DomainError from the dual division.
template <Scalar T, class F>
std::vector<T> gradient(F&& f, std::span<const T> x) {
  std::vector<Dual<T>> point(x.size());
  std::vector<T> out(x.size(), T(0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) point[j] = Dual<T>(x[j], T(i == j ? 1 : 0));
    out[i] = f(std::span<const Dual<T>>(point)).deriv;
  }
  return out;
}

/// Derivative of f at x along the given tangent, one dual pass.
template <Scalar T, class F>
T directional_derivative(F&& f, std::span<const T> x, std::span<const T> tangent) {
  std::vector<Dual<T>> point(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) point[j] = Dual<T>(x[j], tangent[j]);
  return f(std::span<const Dual<T>>(point)).deriv;
}

template <Scalar T, class F>
std::vector<T> gradient(F&& f, const std::vector<T>& x) {
  return gradient(std::forward<F>(f), std::span<const T>(x));
}

}  // namespace lyness
