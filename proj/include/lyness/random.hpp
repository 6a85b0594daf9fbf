#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "lyness/rational.hpp"
#include "lyness/types.hpp"

namespace lyness {

/// Reproducible test points. The engine is seeded through std::seed_seq
/// from the user seed plus stream identifiers (dimension, trial index, ...),
/// so each trial draws the same point regardless of how trials are sharded.
/// Values are mapped with plain modular reduction rather than the
/// implementation-defined standard distributions.
class PointSampler {
 public:
  explicit PointSampler(std::uint64_t seed, std::initializer_list<std::uint64_t> stream = {}) {
    std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    for (auto s : stream) {
      words.push_back(static_cast<std::uint32_t>(s));
      words.push_back(static_cast<std::uint32_t>(s >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
  }

  /// Integer in [lo, hi].
  long integer(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(engine_() % span);
  }

  /// p/q with p in [1, 50], q in [1, 10].
  Rat rational() {
    const long num = integer(1, 50);
    const long den = integer(1, 10);
    return Rat(mpz_class(num), mpz_class(den));
  }

  Point<Rat> rational_point(int k) {
    Point<Rat> x;
    x.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) x.push_back(rational());
    return x;
  }

  /// Uniform double in [lo, hi) from the top 53 bits.
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  Point<double> uniform_point(int k, double lo, double hi) {
    Point<double> x;
    x.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) x.push_back(uniform(lo, hi));
    return x;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lyness
