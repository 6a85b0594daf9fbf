#pragma once

/**
 * @file rational.hpp
 * @brief Exact arbitrary-precision rationals.
 *
 * Thin value wrapper over GMP's mpq_class. Every value is kept in canonical
 * form (gcd(|num|, den) = 1, den > 0) and division by zero raises
 * DomainError instead of aborting inside GMP.
 */

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <compare>
#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>

#include "lyness/errors.hpp"

namespace lyness {

class Rat {
 public:
  Rat() = default;

  template <std::integral I>
  Rat(I v) {  // NOLINT(google-explicit-constructor)
    static_assert(sizeof(I) <= sizeof(long));
    if constexpr (std::is_signed_v<I>) {
      q_ = mpq_class(static_cast<long>(v));
    } else {
      q_ = mpq_class(static_cast<unsigned long>(v));
    }
  }

  explicit Rat(mpz_class num, mpz_class den = 1) {
    if (den == 0) throw DomainError("rational with zero denominator");
    q_ = mpq_class(std::move(num), std::move(den));
    q_.canonicalize();
  }

  explicit Rat(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  /// Exact binary value of a finite double.
  static Rat from_double(double d) {
    if (!std::isfinite(d)) throw DomainError("non-finite double to rational");
    return Rat(mpq_class(d));
  }

  [[nodiscard]] const mpq_class& mpq() const { return q_; }
  [[nodiscard]] mpz_class numerator() const { return q_.get_num(); }
  [[nodiscard]] mpz_class denominator() const { return q_.get_den(); }
  [[nodiscard]] int sign() const { return sgn(q_); }
  [[nodiscard]] bool is_zero() const { return sign() == 0; }
  [[nodiscard]] double to_double() const { return q_.get_d(); }

  /// "p" for integers, "p/q" otherwise.
  [[nodiscard]] std::string str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
  Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
  Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw DomainError("rational division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.q_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

 private:
  mpq_class q_{0};
};

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Optional sign followed by decimal digits.
inline mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ParseError("malformed rational: '" + std::string(whole) + "'");
  mpz_class v(std::string(s), 10);
  return negative ? mpz_class(-v) : v;
}

}  // namespace detail

/// Parses "p/q", "p", or a finite decimal such as "-0.25" or "3." into an
/// exact rational. Decimals go through scaled integers, never through double.
inline Rat parse_rational(std::string_view text) {
  const std::string_view s = detail::trim(text);
  if (s.empty()) throw ParseError("empty rational");

  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const mpz_class num = detail::parse_integer(s.substr(0, slash), s);
    const std::string_view den_text = s.substr(slash + 1);
    if (!den_text.empty() && (den_text.front() == '+' || den_text.front() == '-')) {
      throw ParseError("signed denominator in '" + std::string(s) + "'");
    }
    const mpz_class den = detail::parse_integer(den_text, s);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(s) + "'");
    return Rat(num, den);
  }

  if (const auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    const std::string_view frac_part = s.substr(dot + 1);
    bool negative = false;
    if (!int_part.empty() && (int_part.front() == '+' || int_part.front() == '-')) {
      negative = int_part.front() == '-';
      int_part.remove_prefix(1);
    }
    const bool int_ok = int_part.empty() || detail::all_digits(int_part);
    const bool frac_ok = frac_part.empty() || detail::all_digits(frac_part);
    if (!int_ok || !frac_ok || (int_part.empty() && frac_part.empty())) {
      throw ParseError("malformed decimal: '" + std::string(s) + "'");
    }
    const std::string digits = std::string(int_part) + std::string(frac_part);
    mpz_class num(digits.empty() ? std::string("0") : digits, 10);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_part.size());
    if (negative) num = -num;
    return Rat(num, den);
  }

  return Rat(detail::parse_integer(s, s));
}

}  // namespace lyness
