#pragma once

/**
 * @file verify.hpp
 * @brief Exact identity sweeps over seeded random rational points.
 *
 * For every dimension k and parameter a in the configuration, each trial
 * draws one point of the positive orthant (numerators 1..50, denominators
 * 1..10) and checks every identity that applies to k in exact arithmetic.
 * Trials are sharded across threads; each trial's point depends only on
 * (seed, k, a index, trial), so results do not depend on the shard count.
 */

#include <algorithm>
#include <cstdint>
#include <functional>
#include <future>
#include <string>
#include <thread>
#include <vector>

#include "lyness/dynamics.hpp"
#include "lyness/invariants.hpp"
#include "lyness/map.hpp"
#include "lyness/matrix.hpp"
#include "lyness/random.hpp"
#include "lyness/symmetry.hpp"

namespace lyness {

struct CheckTally {
  std::string name;
  long passed = 0;
  long failed = 0;
  bool applicable = true;
  std::string note;
};

struct DimensionReport {
  int k = 0;
  Rat a;
  std::vector<CheckTally> checks;

  [[nodiscard]] bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckTally& c) { return c.failed == 0; });
  }
};

struct VerifyConfig {
  int k_min = 3;
  int k_max = 8;
  std::vector<Rat> a_values{Rat(0), Rat(1), Rat(mpz_class(7), mpz_class(3)), Rat(10)};
  long trials = 100;
  std::uint64_t seed = 42;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct VerifyReport {
  VerifyConfig config;
  std::vector<DimensionReport> dimensions;

  [[nodiscard]] bool all_passed() const {
    return std::all_of(dimensions.begin(), dimensions.end(), [](const DimensionReport& d) { return d.all_passed(); });
  }
  [[nodiscard]] long total_failed() const {
    long n = 0;
    for (const auto& d : dimensions)
      for (const auto& c : d.checks) n += c.failed;
    return n;
  }
};

namespace detail {

struct NamedCheck {
  std::string name;
  std::function<bool(const Params<Rat>&, const Point<Rat>&)> run;
};

inline bool all_zero(const std::vector<Rat>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& r) { return r.is_zero(); });
}

inline std::vector<NamedCheck> checks_for(int k) {
  using P = Params<Rat>;
  using X = Point<Rat>;
  std::vector<NamedCheck> out;
  out.push_back({"inverse_round_trip", [](const P& p, const X& x) {
                   return lyness_inverse<Rat>(p, lyness_step(p, x)) == x;
                 }});
  out.push_back({"jacobian_determinant", [](const P& p, const X& x) {
                   return exact_determinant(jacobian(p, x)) == jacobian_det(p, x);
                 }});
  out.push_back({"V1_invariant", [](const P& p, const X& x) {
                   return eval_V1<Rat>(p, lyness_step(p, x)) == eval_V1(p, x);
                 }});
  out.push_back({"V2_invariant", [](const P& p, const X& x) {
                   return eval_V2<Rat>(p, lyness_step(p, x)) == eval_V2(p, x);
                 }});
  out.push_back({"lie_symmetry", [](const P& p, const X& x) { return all_zero(lie_residual(p, x)); }});
  out.push_back({"shift_law", [](const P& p, const X& x) {
                   for (int i = 1; i < p.k; ++i) {
                     if (!shift_residual(p, x, i).is_zero()) return false;
                   }
                   return true;
                 }});
  out.push_back({"compatibility", [](const P& p, const X& x) { return compatibility_residual(p, x).is_zero(); }});

  if (k % 2 == 1) {
    out.push_back({"V3_invariant", [](const P& p, const X& x) {
                     return eval_V3<Rat>(p, lyness_step(p, x)) == eval_V3(p, x);
                   }});
    out.push_back({"W_two_integral", [](const P& p, const X& x) {
                     const auto fx = lyness_step(p, x);
                     const Rat w = eval_W(p, x);
                     const bool on_g = eval_Z(p, x).is_zero();
                     // Invariant under F∘F; invariant under F exactly on G.
                     return eval_W<Rat>(p, lyness_step<Rat>(p, fx)) == w && ((eval_W<Rat>(p, fx) == w) == on_g);
                   }});
    out.push_back({"V3_two_routes", [](const P& p, const X& x) { return eval_V3(p, x) == eval_V3_sum(p, x); }});
    out.push_back({"V1_factorization", [](const P& p, const X& x) {
                     return eval_V1(p, x) == eval_W(p, x) * eval_W<Rat>(p, lyness_step(p, x));
                   }});
    out.push_back({"Z_two_routes", [](const P& p, const X& x) { return eval_Z(p, x) == eval_Z_product(p, x); }});
    out.push_back({"Z_transformation", [](const P& p, const X& x) {
                     return eval_Z<Rat>(p, lyness_step(p, x)) == jacobian_det(p, x) * eval_Z(p, x);
                   }});
    out.push_back({"Pi_transformation", [](const P& p, const X& x) {
                     return eval_Pi<Rat>(p, lyness_step(p, x)) == -jacobian_det(p, x) * eval_Pi(p, x);
                   }});
    out.push_back({"Z_sign_flip", [](const P& p, const X& x) {
                     const int s0 = eval_Z(p, x).sign();
                     const int s1 = eval_Z<Rat>(p, lyness_step(p, x)).sign();
                     return s1 == -s0;
                   }});
    out.push_back({"measure_density", [](const P& p, const X& x) {
                     const auto [pi_res, z_res] = measure_density_residual(p, x);
                     return pi_res.is_zero() && z_res.is_zero();
                   }});
  }

  for (Invariant v : {Invariant::V1, Invariant::V2, Invariant::V3}) {
    if (!annihilation_supported(k, v)) continue;
    out.push_back({std::string("annihilation_") + name_of(v), [v](const P& p, const X& x) {
                     return annihilation_residual(p, x, v).is_zero();
                   }});
  }

  if (k >= 6) {
    out.push_back({"claim_factorization", [](const P& p, const X& x) { return claim_residual(p, x).is_zero(); }});
  }
  return out;
}

}  // namespace detail

/// Runs every applicable identity for one (k, a) over `trials` points.
inline DimensionReport verify_dimension(int k, const Rat& a, std::size_t a_index, long trials, std::uint64_t seed,
                                        unsigned threads) {
  const Params<Rat> p{k, a};
  p.validate(3);
  const auto checks = detail::checks_for(k);

  auto run_range = [&](long begin, long end) {
    std::vector<CheckTally> tallies(checks.size());
    for (long t = begin; t < end; ++t) {
      PointSampler sampler(seed, {static_cast<std::uint64_t>(k), a_index, static_cast<std::uint64_t>(t)});
      const auto x = sampler.rational_point(k);
      for (std::size_t c = 0; c < checks.size(); ++c) {
        bool ok = false;
        try {
          ok = checks[c].run(p, x);
        } catch (const Error&) {
          ok = false;
        }
        ++(ok ? tallies[c].passed : tallies[c].failed);
      }
    }
    return tallies;
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const long shards = std::max(1L, std::min<long>(threads, trials));
  std::vector<std::future<std::vector<CheckTally>>> futures;
  for (long s = 0; s < shards; ++s) {
    const long begin = trials * s / shards;
    const long end = trials * (s + 1) / shards;
    futures.push_back(std::async(shards == 1 ? std::launch::deferred : std::launch::async, run_range, begin, end));
  }

  DimensionReport report{k, a, {}};
  report.checks.resize(checks.size());
  for (std::size_t c = 0; c < checks.size(); ++c) report.checks[c].name = checks[c].name;
  for (auto& f : futures) {
    const auto part = f.get();
    for (std::size_t c = 0; c < checks.size(); ++c) {
      report.checks[c].passed += part[c].passed;
      report.checks[c].failed += part[c].failed;
    }
  }
  if (k % 2 == 0) report.checks.push_back({"V3", 0, 0, false, "n/a (even k)"});
  return report;
}

inline VerifyReport run_verification(const VerifyConfig& cfg) {
  if (cfg.k_min < 3) throw DomainError("the Lie symmetry requires k >= 3");
  if (cfg.k_max < cfg.k_min) throw DomainError("empty k range");
  VerifyReport report{cfg, {}};
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    for (std::size_t ai = 0; ai < cfg.a_values.size(); ++ai) {
      report.dimensions.push_back(verify_dimension(k, cfg.a_values[ai], ai, cfg.trials, cfg.seed, cfg.threads));
    }
  }
  return report;
}

}  // namespace lyness
