#pragma once

/**
 * @file invariants.hpp
 * @brief Conserved quantities of the Lyness map.
 *
 * V1 and V2 are first integrals for every k. For odd k = 2l+1 the function
 * W is a first integral of F∘F only, and from it
 *
 *   V3 = W + W∘F     (first integral of F)
 *   V1 = W · W∘F
 *   Z  = Π · (W - W∘F),   Z∘F = det(DF) · Z,
 *   Π  = x1 ⋯ xk,         Π∘F = -det(DF) · Π.
 *
 * Since det(DF) < 0 on the positive orthant for odd k, sign(Z) flips at
 * every step and the zero set G of Z is invariant.
 */

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lyness/gradient.hpp"
#include "lyness/map.hpp"
#include "lyness/matrix.hpp"
#include "lyness/types.hpp"

namespace lyness {

enum class Invariant { V1, V2, V3, W };

inline const char* name_of(Invariant which) {
  switch (which) {
    case Invariant::V1: return "V1";
    case Invariant::V2: return "V2";
    case Invariant::V3: return "V3";
    case Invariant::W: return "W";
  }
  return "?";
}

template <Scalar T>
T product(Coords<T> x) {
  T acc(1);
  for (const T& v : x) acc *= v;
  return acc;
}

/// V1 = (a + Σ xi) · Π (xi + 1) / Π xi.
template <Scalar T>
T eval_V1(const Params<T>& p, Coords<T> x) {
  require_point(p, x);
  T num = p.a + partial_sum<T>(x, 0, x.size());
  for (const T& v : x) num *= v + T(1);
  return num / product<T>(x);
}

/// V2 = (a + Σ xi + x1 xk) · Π_{i<k} (1 + xi + x_{i+1}) / Π xi.
template <Scalar T>
T eval_V2(const Params<T>& p, Coords<T> x) {
  require_point(p, x);
  T num = p.a + partial_sum<T>(x, 0, x.size()) + x.front() * x.back();
  for (std::size_t i = 0; i + 1 < x.size(); ++i) num *= T(1) + x[i] + x[i + 1];
  return num / product<T>(x);
}

/// W = Π_{odd i} (xi + 1) / Π_{even i} xi, indices 1-based. Odd k only.
template <Scalar T>
T eval_W(const Params<T>& p, Coords<T> x) {
  require_odd(p, "W");
  require_point(p, x);
  T num(1);
  T den(1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i % 2 == 0) {
      num *= x[i] + T(1);
    } else {
      den *= x[i];
    }
  }
  return num / den;
}

/// Closed form of V3 = W + W∘F:
///   [Π_{odd i} xi(xi+1) + (a + Σ x) Π_{even i} xi(xi+1)] / Π xi.
template <Scalar T>
T eval_V3(const Params<T>& p, Coords<T> x) {
  require_odd(p, "V3");
  require_point(p, x);
  T odd(1);
  T even(1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const T term = x[i] * (x[i] + T(1));
    if (i % 2 == 0) {
      odd *= term;
    } else {
      even *= term;
    }
  }
  return (odd + (p.a + partial_sum<T>(x, 0, x.size())) * even) / product<T>(x);
}

/// V3 through its definition W + W∘F.
template <Scalar T>
T eval_V3_sum(const Params<T>& p, Coords<T> x) {
  return eval_W(p, x) + eval_W<T>(p, lyness_step(p, x));
}

enum class DomainCheck { positive, none };

/// Z in polynomial form,
///   Π_{odd i} xi(xi+1) - (a + Σ x) Π_{even i} xi(xi+1).
/// With DomainCheck::none any point is accepted (Z is a polynomial).
template <Scalar T>
T eval_Z(const Params<T>& p, Coords<T> x, DomainCheck check = DomainCheck::positive) {
  require_odd(p, "Z");
  require_dimension(p, x);
  if (check == DomainCheck::positive) require_positive<T>(x);
  T odd(1);
  T even(1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const T term = x[i] * (x[i] + T(1));
    if (i % 2 == 0) {
      odd *= term;
    } else {
      even *= term;
    }
  }
  return odd - (p.a + partial_sum<T>(x, 0, x.size())) * even;
}

/// Z through its definition Π · (W - W∘F).
template <Scalar T>
T eval_Z_product(const Params<T>& p, Coords<T> x) {
  return product<T>(x) * (eval_W(p, x) - eval_W<T>(p, lyness_step(p, x)));
}

template <Scalar T>
T eval_Pi(const Params<T>& p, Coords<T> x) {
  require_point(p, x);
  return product<T>(x);
}

template <Scalar T>
T evaluate(Invariant which, const Params<T>& p, Coords<T> x) {
  switch (which) {
    case Invariant::V1: return eval_V1(p, x);
    case Invariant::V2: return eval_V2(p, x);
    case Invariant::V3: return eval_V3(p, x);
    case Invariant::W: return eval_W(p, x);
  }
  throw UnsupportedError("unknown invariant");
}

template <Scalar T>
LevelSignature<T> level_signature(const Params<T>& p, Coords<T> x) {
  LevelSignature<T> sig{eval_V1(p, x), eval_V2(p, x), std::nullopt, std::nullopt};
  if (p.k % 2 == 1) {
    sig.v3 = eval_V3(p, x);
    sig.z_sign = sign_of(eval_Z(p, x));
  }
  return sig;
}

/// Exact gradient of one invariant at x.
template <Scalar T>
std::vector<T> invariant_gradient(Invariant which, const Params<T>& p, Coords<T> x) {
  const auto pd = p.template as<Dual<T>>();
  return gradient<T>([&](std::span<const Dual<T>> xd) { return evaluate<Dual<T>>(which, pd, xd); }, x);
}

/// Rank of the gradient matrix of the chosen invariants at x. A value equal
/// to which.size() certifies functional independence near x.
inline std::size_t independence_rank(const Params<Rat>& p, Coords<Rat> x, std::span<const Invariant> which) {
  require_point(p, x);
  RatMatrix m(which.size(), x.size());
  for (std::size_t r = 0; r < which.size(); ++r) {
    if ((which[r] == Invariant::V3 || which[r] == Invariant::W) && p.k % 2 == 0) {
      throw UnsupportedError(std::string(name_of(which[r])) + " requested for even k");
    }
    const auto g = invariant_gradient<Rat>(which[r], p, x);
    for (std::size_t c = 0; c < g.size(); ++c) m(r, c) = g[c];
  }
  return exact_rank(m);
}

inline std::size_t independence_rank(const Params<Rat>& p, Coords<Rat> x, std::initializer_list<Invariant> which) {
  return independence_rank(p, x, std::span<const Invariant>(which.begin(), which.size()));
}

}  // namespace lyness
