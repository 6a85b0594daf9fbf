#pragma once

#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "lyness/errors.hpp"
#include "lyness/scalar.hpp"

namespace lyness {

/// Dimension k and parameter a of the Lyness map.
template <Scalar T>
struct Params {
  int k = 3;
  T a{};

  /// k >= min_k and a >= 0, else DomainError.
  void validate(int min_k = 2) const {
    if (k < min_k) throw DomainError("dimension k=" + std::to_string(k) + " below " + std::to_string(min_k));
    if (sign_of(a) < 0) throw DomainError("parameter a must be non-negative");
  }

  template <Scalar U>
  [[nodiscard]] Params<U> as() const {
    return Params<U>{k, scalar_cast<U>(a)};
  }
};

template <Scalar T>
using Point = std::vector<T>;

/// Read-only view of coordinates. The scalar type is taken from the other
/// arguments, so vectors bind without explicit template arguments.
template <class T>
using Coords = std::span<const std::type_identity_t<T>>;

template <Scalar T>
Point<T> make_point(std::initializer_list<T> xs) {
  return Point<T>(xs);
}

/// Conserved values identifying the invariant set a point lies on. v3 and
/// z_sign are only defined for odd k.
template <Scalar T>
struct LevelSignature {
  T v1{};
  T v2{};
  std::optional<T> v3;
  std::optional<int> z_sign;
};

/// states[i] is the iterate with index first_index + i.
template <Scalar T>
struct OrbitTrace {
  Params<T> params;
  long first_index = 0;
  std::vector<Point<T>> states;
  std::vector<LevelSignature<T>> signatures;  // empty unless requested
  bool truncated = false;
  std::string note;

  [[nodiscard]] long last_index() const { return first_index + static_cast<long>(states.size()) - 1; }
};

template <Scalar T>
void require_dimension(const Params<T>& p, Coords<T> x) {
  if (static_cast<int>(x.size()) != p.k) {
    throw DomainError("point has " + std::to_string(x.size()) + " coordinates, expected k=" + std::to_string(p.k));
  }
}

/// Every coordinate strictly positive, else DomainError.
template <Scalar T>
void require_positive(Coords<T> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!is_positive(x[i])) throw DomainError("coordinate x" + std::to_string(i + 1) + " is not positive");
  }
}

template <Scalar T>
void require_point(const Params<T>& p, Coords<T> x) {
  if (sign_of(p.a) < 0) throw DomainError("parameter a must be non-negative");
  require_dimension(p, x);
  require_positive<T>(x);
}

template <Scalar T>
void require_odd(const Params<T>& p, const char* what) {
  if (p.k % 2 == 0) throw UnsupportedError(std::string(what) + " is only defined for odd k");
}

}  // namespace lyness
