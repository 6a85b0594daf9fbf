#pragma once

/**
 * @file scalar.hpp
 * @brief Scalar backends and the small vocabulary generic formulas need.
 *
 * Every formula in the library is a template over a scalar type T. The
 * supported backends are Rat (exact), double and long double (floating
 * point), and Dual<U> of any of them (exact or floating gradients). A new
 * backend only has to specialize scalar_traits.
 */

#include <cmath>
#include <concepts>
#include <type_traits>

#include "lyness/dual.hpp"
#include "lyness/rational.hpp"

namespace lyness {

template <class T>
struct scalar_traits;

template <std::floating_point T>
struct scalar_traits<T> {
  static constexpr bool exact = false;
  static int sign(T x) { return (x > T(0)) - (x < T(0)); }
  static double to_double(T x) { return static_cast<double>(x); }
  static T from_rat(const Rat& r) {
    if constexpr (std::is_same_v<T, double>) {
      return r.to_double();
    } else {
      // Long double keeps more bits than mpq_get_d returns.
      return static_cast<T>(r.numerator().get_d()) / static_cast<T>(r.denominator().get_d());
    }
  }
  static T abs(T x) { return std::fabs(x); }
  static bool finite(T x) { return std::isfinite(x); }
};

template <>
struct scalar_traits<Rat> {
  static constexpr bool exact = true;
  static int sign(const Rat& x) { return x.sign(); }
  static double to_double(const Rat& x) { return x.to_double(); }
  static Rat from_rat(const Rat& r) { return r; }
  static Rat abs(const Rat& x) { return lyness::abs(x); }
  static bool finite(const Rat&) { return true; }
};

template <class U>
struct scalar_traits<Dual<U>> {
  static constexpr bool exact = scalar_traits<U>::exact;
  static int sign(const Dual<U>& x) { return scalar_traits<U>::sign(x.value); }
  static double to_double(const Dual<U>& x) { return scalar_traits<U>::to_double(x.value); }
  static Dual<U> from_rat(const Rat& r) { return Dual<U>(scalar_traits<U>::from_rat(r)); }
  static Dual<U> abs(const Dual<U>& x) { return sign(x) < 0 ? -x : x; }
  static bool finite(const Dual<U>& x) {
    return scalar_traits<U>::finite(x.value) && scalar_traits<U>::finite(x.deriv);
  }
};

template <class T>
concept Scalar = requires { scalar_traits<T>::exact; };

template <Scalar T>
int sign_of(const T& x) {
  return scalar_traits<T>::sign(x);
}

template <Scalar T>
bool is_positive(const T& x) {
  return sign_of(x) > 0;
}

template <Scalar T>
double to_double(const T& x) {
  return scalar_traits<T>::to_double(x);
}

template <Scalar T>
T abs_of(const T& x) {
  return scalar_traits<T>::abs(x);
}

template <Scalar T>
bool is_finite(const T& x) {
  return scalar_traits<T>::finite(x);
}

template <class T>
struct is_dual : std::false_type {};
template <class U>
struct is_dual<Dual<U>> : std::true_type {};

/// Converts between backends: Rat to anything, floating to floating, and
/// anything U into Dual<V> with zero derivative when U converts to V.
template <Scalar To, Scalar From>
To scalar_cast(const From& x) {
  if constexpr (std::is_same_v<To, From>) {
    return x;
  } else if constexpr (std::is_same_v<From, Rat>) {
    return scalar_traits<To>::from_rat(x);
  } else if constexpr (is_dual<To>::value) {
    using Inner = decltype(To{}.value);
    return To(scalar_cast<Inner>(x));
  } else if constexpr (std::is_floating_point_v<To> && std::is_floating_point_v<From>) {
    return static_cast<To>(x);
  } else if constexpr (std::is_same_v<To, Rat> && std::is_floating_point_v<From>) {
    return Rat::from_double(static_cast<double>(x));
  } else {
    static_assert(sizeof(To) == 0, "no conversion between these scalar backends");
  }
}

}  // namespace lyness
