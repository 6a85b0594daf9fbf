#pragma once

/**
 * @file dual.hpp
 * @brief Forward-mode dual numbers over an arbitrary scalar.
 *
 * Dual<T>{v, d} represents v + d·ε with ε² = 0, so evaluating a rational
 * function on Dual<Rat> seeded with a tangent vector yields the exact
 * directional derivative alongside the value.
 */

#include <ostream>

#include "lyness/errors.hpp"
#include "lyness/rational.hpp"

namespace lyness {

template <class T>
struct Dual {
  T value{};
  T deriv{};

  Dual() = default;
  Dual(T v) : value(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  Dual(T v, T d) : value(std::move(v)), deriv(std::move(d)) {}

  Dual& operator+=(const Dual& o) {
    value += o.value;
    deriv += o.deriv;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    value -= o.value;
    deriv -= o.deriv;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    deriv = deriv * o.value + value * o.deriv;
    value *= o.value;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    if (o.value == T(0)) throw DomainError("dual division by zero");
    // (f/g)' = (f'g - fg') / g²
    deriv = (deriv * o.value - value * o.deriv) / (o.value * o.value);
    value /= o.value;
    return *this;
  }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend Dual operator-(const Dual& a) { return Dual(-a.value, -a.deriv); }

  // Comparisons see only the value part.
  friend bool operator==(const Dual& a, const Dual& b) { return a.value == b.value; }
  friend auto operator<=>(const Dual& a, const Dual& b) { return a.value <=> b.value; }

  friend std::ostream& operator<<(std::ostream& os, const Dual& d) {
    return os << '(' << d.value << " + " << d.deriv << "e)";
  }
};

using DualRat = Dual<Rat>;

}  // namespace lyness
