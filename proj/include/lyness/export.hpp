#pragma once

/**
 * @file export.hpp
 * @brief CSV writers for orbits, flows, reduced orbits and 3-D projections.
 *
 * Orbit:      n,x1,...,xk,V1,V2[,V3][,signZ]   (V3 and signZ for odd k)
 * Flow:       t,x1,...,xk,V1,V2[,V3]
 * Reduced:    n,<kept coordinates>
 * Projection: n|t,xi,xj,xl
 *
 * Floats are written in shortest round-trip form, rationals as p/q, so the
 * same input always produces byte-identical files.
 */

#include <array>
#include <charconv>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include "lyness/flow.hpp"
#include "lyness/invariants.hpp"
#include "lyness/types.hpp"

namespace lyness {

inline std::string format_scalar(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf.data(), end);
}

inline std::string format_scalar(const Rat& v) { return v.str(); }

template <Scalar T>
void write_orbit_csv(std::ostream& os, const OrbitTrace<T>& trace) {
  const int k = trace.params.k;
  const bool odd = k % 2 == 1;
  os << 'n';
  for (int i = 1; i <= k; ++i) os << ",x" << i;
  os << ",V1,V2";
  if (odd) os << ",V3,signZ";
  os << '\n';
  for (std::size_t i = 0; i < trace.states.size(); ++i) {
    const auto sig = i < trace.signatures.size() ? trace.signatures[i] : level_signature<T>(trace.params, trace.states[i]);
    os << trace.first_index + static_cast<long>(i);
    for (const T& c : trace.states[i]) os << ',' << format_scalar(c);
    os << ',' << format_scalar(sig.v1) << ',' << format_scalar(sig.v2);
    if (odd) os << ',' << format_scalar(*sig.v3) << ',' << *sig.z_sign;
    os << '\n';
  }
}

inline void write_flow_csv(std::ostream& os, const FlowTrace& trace) {
  const int k = trace.params.k;
  os << 't';
  for (int i = 1; i <= k; ++i) os << ",x" << i;
  os << ",V1,V2";
  if (k % 2 == 1) os << ",V3";
  os << '\n';
  for (std::size_t i = 0; i < trace.states.size(); ++i) {
    os << format_scalar(trace.times[i]);
    for (double c : trace.states[i]) os << ',' << format_scalar(c);
    const auto& sig = trace.signatures[i];
    os << ',' << format_scalar(sig.v1) << ',' << format_scalar(sig.v2);
    if (sig.v3) os << ',' << format_scalar(*sig.v3);
    os << '\n';
  }
}

/// labels names the kept coordinates, e.g. {"x1", "x3"}.
template <Scalar T>
void write_reduced_csv(std::ostream& os, const std::vector<std::string>& labels,
                       const std::vector<std::vector<T>>& states) {
  os << 'n';
  for (const auto& l : labels) os << ',' << l;
  os << '\n';
  for (std::size_t i = 0; i < states.size(); ++i) {
    os << i;
    for (const T& c : states[i]) os << ',' << format_scalar(c);
    os << '\n';
  }
}

/// Projection onto three 1-based coordinates; index_label is "n" or "t".
template <class Label, Scalar T>
void write_projection_csv(std::ostream& os, const std::string& index_label, const std::vector<Label>& index,
                          const std::vector<Point<T>>& states, const std::array<int, 3>& axes) {
  os << index_label;
  for (int a : axes) os << ",x" << a;
  os << '\n';
  for (std::size_t i = 0; i < states.size(); ++i) {
    os << format_scalar(static_cast<double>(index[i]));
    for (int a : axes) os << ',' << format_scalar(states[i][static_cast<std::size_t>(a - 1)]);
    os << '\n';
  }
}

}  // namespace lyness
