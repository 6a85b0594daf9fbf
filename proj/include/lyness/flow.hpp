#pragma once

/**
 * @file flow.hpp
 * @brief Numerical integration of dx/dt = X_k(x) with conservation monitoring.
 *
 * Two schemes: classical RK4 with a fixed step, and Dormand-Prince 5(4)
 * with local error control whose steps are clipped so that it lands on
 * every sample time. Invariants are monitored, never enforced; their drift
 * is the accuracy statistic reported with each trace.
 *
 * The field has poles on the boundary of the positive orthant, so a trace
 * stops (boundary_hit = true) as soon as a coordinate drops to 1e-12.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lyness/errors.hpp"
#include "lyness/invariants.hpp"
#include "lyness/map.hpp"
#include "lyness/symmetry.hpp"
#include "lyness/types.hpp"

namespace lyness {

enum class FlowMethod { rk4, rk45 };

inline const char* name_of(FlowMethod m) { return m == FlowMethod::rk4 ? "rk4-fixed" : "rk45-adaptive"; }

inline constexpr double kBoundaryEpsilon = 1e-12;
inline constexpr double kAdaptiveTolerance = 1e-10;

struct InvariantDrift {
  std::string name;
  double max_relative = 0.0;
};

struct FlowTrace {
  Params<double> params;
  std::vector<double> times;
  std::vector<Point<double>> states;
  std::vector<LevelSignature<double>> signatures;
  FlowMethod method = FlowMethod::rk4;
  double dt = 0.0;
  double tolerance = 0.0;  // rk45 only
  bool boundary_hit = false;
  std::vector<InvariantDrift> drift;

  /// Largest relative drift among the monitored invariants.
  [[nodiscard]] double max_drift() const {
    double m = 0.0;
    for (const auto& d : drift) m = std::max(m, d.max_relative);
    return m;
  }
  [[nodiscard]] double drift_of(const std::string& name) const {
    for (const auto& d : drift) {
      if (d.name == name) return d.max_relative;
    }
    throw DomainError("invariant " + name + " is not monitored in this trace");
  }
};

namespace detail {

using State = std::vector<double>;

inline State axpy(const State& x, double h, const State& v) {
  State out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + h * v[i];
  return out;
}

inline bool inside_orthant(const State& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v) && v > kBoundaryEpsilon; });
}

// direction = +1 integrates forward, -1 integrates the reversed field.
struct FieldEval {
  Params<double> params;
  double direction = 1.0;

  State operator()(const State& x) const {
    State v = eval_X<double>(params, x);
    if (direction < 0) {
      for (double& c : v) c = -c;
    }
    return v;
  }
};

inline State rk4_step(const FieldEval& f, const State& x, double h) {
  const State k1 = f(x);
  const State x2 = axpy(x, 0.5 * h, k1);
  if (!inside_orthant(x2)) return x2;
  const State k2 = f(x2);
  const State x3 = axpy(x, 0.5 * h, k2);
  if (!inside_orthant(x3)) return x3;
  const State k3 = f(x3);
  const State x4 = axpy(x, h, k3);
  if (!inside_orthant(x4)) return x4;
  const State k4 = f(x4);
  State out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
  static constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr std::array<std::array<double, 6>, 7> a{{
      {0, 0, 0, 0, 0, 0},
      {1.0 / 5, 0, 0, 0, 0, 0},
      {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
      {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
      {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
  }};
  static constexpr std::array<double, 7> b5{35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0};
  static constexpr std::array<double, 7> b4{5179.0 / 57600, 0, 7571.0 / 16695, 393.0 / 640,
                                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
};

struct AdaptiveResult {
  State x;
  double error_norm = 0.0;
  bool left_domain = false;
};

inline AdaptiveResult dopri_attempt(const FieldEval& f, const State& x, double h, double tol) {
  using DP = DormandPrince;
  const std::size_t n = x.size();
  std::array<State, 7> k;
  k[0] = f(x);
  for (std::size_t s = 1; s < 7; ++s) {
    State xs = x;
    for (std::size_t j = 0; j < s; ++j) {
      if (DP::a[s][j] == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) xs[i] += h * DP::a[s][j] * k[j][i];
    }
    if (!inside_orthant(xs)) return {xs, std::numeric_limits<double>::infinity(), true};
    k[s] = f(xs);
  }
  AdaptiveResult r;
  r.x = x;
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double hi = 0.0;
    double lo = 0.0;
    for (std::size_t s = 0; s < 7; ++s) {
      hi += DP::b5[s] * k[s][i];
      lo += DP::b4[s] * k[s][i];
    }
    r.x[i] += h * hi;
    const double scale = tol * (1.0 + std::max(std::fabs(x[i]), std::fabs(r.x[i])));
    err = std::max(err, std::fabs(h * (hi - lo)) / scale);
  }
  r.error_norm = err;
  return r;
}

// Advances x by exactly `span` time units with adaptive steps. h carries the
// step size suggestion across calls.
inline bool dopri_advance(const FieldEval& f, State& x, double span, double& h, double tol) {
  double done = 0.0;
  while (done < span) {
    const double remaining = span - done;
    const double step = std::min(h, remaining);
    if (step < 1e-14 * std::max(1.0, span)) throw IntegrationError("adaptive step size underflow");
    const AdaptiveResult r = dopri_attempt(f, x, step, tol);
    if (r.error_norm <= 1.0 && inside_orthant(r.x)) {
      x = r.x;
      done += step;
      const double grow = r.error_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(r.error_norm, -0.2), 0.2, 5.0);
      if (step == h) h = step * grow;
    } else if (r.left_domain || !inside_orthant(r.x)) {
      h = step * 0.25;
      if (h < 1e-14 * std::max(1.0, span)) return false;
    } else {
      h = step * std::clamp(0.9 * std::pow(r.error_norm, -0.2), 0.1, 0.9);
    }
  }
  return true;
}

inline std::vector<InvariantDrift> measure_drift(const std::vector<LevelSignature<double>>& sigs) {
  std::vector<InvariantDrift> out;
  if (sigs.empty()) return out;
  auto rel = [](double v, double ref) { return std::fabs(v - ref) / std::max(std::fabs(ref), 1e-300); };
  InvariantDrift d1{"V1", 0.0};
  InvariantDrift d2{"V2", 0.0};
  InvariantDrift d3{"V3", 0.0};
  for (const auto& s : sigs) {
    d1.max_relative = std::max(d1.max_relative, rel(s.v1, sigs.front().v1));
    d2.max_relative = std::max(d2.max_relative, rel(s.v2, sigs.front().v2));
    if (s.v3) d3.max_relative = std::max(d3.max_relative, rel(*s.v3, *sigs.front().v3));
  }
  out.push_back(d1);
  out.push_back(d2);
  if (sigs.front().v3) out.push_back(d3);
  return out;
}

inline FlowTrace integrate_directed(const Params<double>& p, Coords<double> x0, double dt, double t_max,
                                    FlowMethod method, double direction) {
  p.validate(3);
  require_point(p, x0);
  if (!(dt > 0.0) || !(t_max > 0.0)) throw DomainError("dt and t_max must be positive");

  FlowTrace trace;
  trace.params = p;
  trace.method = method;
  trace.dt = dt;
  trace.tolerance = method == FlowMethod::rk45 ? kAdaptiveTolerance : 0.0;

  const FieldEval f{p, direction};
  const auto steps = static_cast<long>(std::llround(t_max / dt));
  State x(x0.begin(), x0.end());
  trace.times.push_back(0.0);
  trace.states.push_back(x);
  trace.signatures.push_back(level_signature<double>(p, x));
  double h = dt;
  for (long i = 1; i <= steps; ++i) {
    State next = x;
    bool ok = true;
    if (method == FlowMethod::rk4) {
      next = rk4_step(f, x, dt);
    } else {
      ok = dopri_advance(f, next, dt, h, kAdaptiveTolerance);
    }
    if (!ok || !inside_orthant(next)) {
      trace.boundary_hit = true;
      break;
    }
    x = std::move(next);
    trace.times.push_back(direction * static_cast<double>(i) * dt);
    trace.states.push_back(x);
    trace.signatures.push_back(level_signature<double>(p, x));
  }
  trace.drift = measure_drift(trace.signatures);
  return trace;
}

}  // namespace detail

/// Samples the flow of X_k from x0 at t = 0, dt, 2dt, ..., t_max.
inline FlowTrace integrate_flow(const Params<double>& p, Coords<double> x0, double dt, double t_max,
                                FlowMethod method = FlowMethod::rk4) {
  return detail::integrate_directed(p, x0, dt, t_max, method, 1.0);
}

struct TransportReport {
  /// Distance from F(q) to the nearest sample of the flow orbit through
  /// F(x0), for each sampled q on the flow orbit through x0.
  std::vector<double> distances;
  double max_distance = 0.0;
  double mean_distance = 0.0;
  /// Bounding-box diagonal of the target orbit, for scale.
  double curve_scale = 0.0;
  bool truncated = false;
  std::vector<std::string> warnings;
};

/// Exploratory check of whether F carries the flow orbit through x0 onto the
/// flow orbit through F(x0). Reports distances only; asserts nothing.
inline TransportReport transport_diagnostic(const Params<double>& p, Coords<double> x0, double t_max, int samples) {
  if (samples < 1) throw DomainError("transport diagnostic needs at least one sample");
  const double dt = std::min(1e-3, t_max / 1000.0);
  const FlowTrace source = integrate_flow(p, x0, dt, t_max);
  const auto fx0 = lyness_step<double>(p, x0);
  const FlowTrace ahead = detail::integrate_directed(p, fx0, dt, 2.0 * t_max, FlowMethod::rk4, 1.0);
  const FlowTrace behind = detail::integrate_directed(p, fx0, dt, 2.0 * t_max, FlowMethod::rk4, -1.0);

  TransportReport report;
  report.truncated = source.boundary_hit || ahead.boundary_hit || behind.boundary_hit;
  if (source.boundary_hit) report.warnings.emplace_back("source flow orbit reached the boundary");
  if (ahead.boundary_hit || behind.boundary_hit) report.warnings.emplace_back("target flow orbit reached the boundary");

  std::vector<const Point<double>*> target;
  for (const auto& s : ahead.states) target.push_back(&s);
  for (const auto& s : behind.states) target.push_back(&s);

  const std::size_t k = fx0.size();
  std::vector<double> lo(k, std::numeric_limits<double>::infinity());
  std::vector<double> hi(k, -std::numeric_limits<double>::infinity());
  for (const auto* s : target) {
    for (std::size_t i = 0; i < k; ++i) {
      lo[i] = std::min(lo[i], (*s)[i]);
      hi[i] = std::max(hi[i], (*s)[i]);
    }
  }
  double diag = 0.0;
  for (std::size_t i = 0; i < k; ++i) diag += (hi[i] - lo[i]) * (hi[i] - lo[i]);
  report.curve_scale = std::sqrt(diag);

  const std::size_t available = source.states.size();
  const auto count = static_cast<std::size_t>(samples);
  for (std::size_t j = 0; j < count; ++j) {
    const std::size_t idx = count == 1 ? 0 : j * (available - 1) / (count - 1);
    const auto image = lyness_step<double>(p, source.states[idx]);
    double best = std::numeric_limits<double>::infinity();
    for (const auto* s : target) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < k; ++i) d2 += (image[i] - (*s)[i]) * (image[i] - (*s)[i]);
      best = std::min(best, d2);
    }
    report.distances.push_back(std::sqrt(best));
  }
  for (double d : report.distances) {
    report.max_distance = std::max(report.max_distance, d);
    report.mean_distance += d;
  }
  report.mean_distance /= static_cast<double>(report.distances.size());
  return report;
}

}  // namespace lyness
