#pragma once

/**
 * @file cli.hpp
 * @brief Command-line front end: verify, orbit, flow, reduce, figures.
 *
 * Exit codes: 0 success, 1 an identity check failed, 2 usage error
 * (bad flags, invalid parameters, unwritable output path).
 * The default seed is taken from the LYNESS_SEED environment variable,
 * falling back to 42.
 */

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lyness/dynamics.hpp"
#include "lyness/errors.hpp"
#include "lyness/export.hpp"
#include "lyness/flow.hpp"
#include "lyness/invariants.hpp"
#include "lyness/map.hpp"
#include "lyness/reduction.hpp"
#include "lyness/verify.hpp"

namespace lyness::cli {

class UsageError : public Error {
 public:
  using Error::Error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

inline std::uint64_t default_seed() {
  if (const char* env = std::getenv("LYNESS_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("LYNESS_SEED is not an unsigned integer: ") + env);
    }
  }
  return 42;
}

/// "1,2,3/4,0.5" -> exact coordinates.
inline std::vector<Rat> parse_point(const std::string& text) {
  std::vector<Rat> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw UsageError("empty point");
  return out;
}

/// "3..8" -> {3, 8}; a single number gives a one-element range.
inline std::pair<int, int> parse_k_range(const std::string& text) {
  auto whole = [&](std::string_view s) {
    int v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size() || s.empty())
      throw UsageError("malformed k range '" + text + "', expected lo..hi");
    return v;
  };
  const std::string_view view(text);
  const auto dots = view.find("..");
  if (dots == std::string_view::npos) {
    const int k = whole(view);
    return {k, k};
  }
  return {whole(view.substr(0, dots)), whole(view.substr(dots + 2))};
}

/// Distinct 1-based axes within 1..k.
inline std::array<int, 3> parse_projection(const std::string& text, int k) {
  std::array<int, 3> axes{};
  std::stringstream ss(text);
  std::string item;
  std::size_t n = 0;
  try {
    while (std::getline(ss, item, ',')) {
      if (n == 3) throw UsageError("projection needs exactly three axes");
      axes[n++] = std::stoi(item);
    }
  } catch (const std::invalid_argument&) {
    throw UsageError("malformed projection '" + text + "'");
  }
  if (n != 3) throw UsageError("projection needs exactly three axes");
  for (int a : axes) {
    if (a < 1 || a > k) throw UsageError("projection axis out of range 1..k");
  }
  if (axes[0] == axes[1] || axes[0] == axes[2] || axes[1] == axes[2]) throw UsageError("projection axes must be distinct");
  return axes;
}

/// path with `suffix` inserted before the extension: out.csv -> out_flow.csv.
inline std::filesystem::path sibling_path(const std::filesystem::path& path, const std::string& suffix) {
  auto name = path.stem().string() + suffix + path.extension().string();
  return path.parent_path() / name;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw UsageError("cannot write to '" + path.string() + "'");
  return os;
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

struct Options {
  int k = 3;
  std::string a = "1";
  std::string k_range;
  std::string x0;
  long steps = 100;
  long trials = 100;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  bool exact = false;
  bool json = false;
  double dt = 1e-3;
  double t_max = 10.0;
  std::string method = "rk4";
  std::string out;
  std::string proj;
  int which = 2;
};

// Human text goes to `text`; with --json the JSON report goes to `out` and
// the human text to `err`.
struct Streams {
  std::ostream& out;
  std::ostream& err;
  bool json = false;
  std::ostream& text() const { return json ? err : out; }
};

inline Params<Rat> params_from(const Options& o, int min_k) {
  Params<Rat> p{o.k, parse_rational(o.a)};
  try {
    p.validate(min_k);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return p;
}

inline std::vector<Rat> start_point(const Options& o, const Params<Rat>& p) {
  if (o.x0.empty()) throw UsageError("--x0 is required");
  auto x = parse_point(o.x0);
  if (static_cast<int>(x.size()) != p.k) throw UsageError("--x0 must have k coordinates");
  for (const auto& c : x) {
    if (c.sign() <= 0) throw UsageError("--x0 coordinates must be positive");
  }
  return x;
}

inline std::vector<double> to_doubles(const std::vector<Rat>& x) {
  std::vector<double> out;
  out.reserve(x.size());
  for (const auto& c : x) out.push_back(c.to_double());
  return out;
}

inline int cmd_verify(const Options& o, const Streams& io) {
  VerifyConfig cfg;
  if (!o.k_range.empty()) {
    std::tie(cfg.k_min, cfg.k_max) = parse_k_range(o.k_range);
  } else {
    cfg.k_min = cfg.k_max = o.k;
  }
  if (cfg.k_min < 3) throw UsageError("the Lie symmetry requires k >= 3");
  if (cfg.k_max < cfg.k_min) throw UsageError("empty k range");
  if (!o.a.empty()) {
    const Rat a = parse_rational(o.a);
    if (a.sign() < 0) throw UsageError("parameter a must be non-negative");
    cfg.a_values = {a};
  }
  if (o.trials < 1) throw UsageError("--trials must be positive");
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  cfg.threads = o.threads;

  const VerifyReport report = run_verification(cfg);
  auto& text = io.text();
  nlohmann::json jdims = nlohmann::json::array();
  for (const auto& d : report.dimensions) {
    text << "k=" << d.k << " a=" << d.a << (d.all_passed() ? " PASS" : " FAIL") << '\n';
    nlohmann::json jchecks = nlohmann::json::object();
    for (const auto& c : d.checks) {
      if (!c.applicable) {
        text << "  " << c.name << ": " << c.note << '\n';
        jchecks[c.name] = {{"applicable", false}, {"note", c.note}};
        continue;
      }
      text << "  " << c.name << ": " << c.passed << '/' << (c.passed + c.failed) << (c.failed == 0 ? " pass" : " FAIL")
           << '\n';
      jchecks[c.name] = {{"passed", c.passed}, {"failed", c.failed}};
    }
    jdims.push_back({{"k", d.k}, {"a", d.a.str()}, {"passed", d.all_passed()}, {"checks", jchecks}});
  }
  text << "summary: " << report.dimensions.size() << " parameter sets, " << report.total_failed() << " failures, seed "
       << cfg.seed << '\n';
  if (io.json) {
    io.out << nlohmann::json{{"command", "verify"},
                             {"seed", cfg.seed},
                             {"trials", cfg.trials},
                             {"passed", report.all_passed()},
                             {"dimensions", jdims}}
                  .dump()
           << '\n';
  }
  return report.all_passed() ? kExitOk : kExitFailure;
}

template <Scalar T>
void emit_orbit_outputs(const Options& o, const OrbitTrace<T>& trace, std::ostream& csv_sink) {
  if (o.out.empty()) {
    write_orbit_csv(csv_sink, trace);
    return;
  }
  auto os = open_output(o.out);
  write_orbit_csv(os, trace);
  if (!o.proj.empty()) {
    const auto axes = parse_projection(o.proj, trace.params.k);
    std::vector<long> idx;
    for (std::size_t i = 0; i < trace.states.size(); ++i) idx.push_back(trace.first_index + static_cast<long>(i));
    auto ps = open_output(sibling_path(o.out, "_proj"));
    write_projection_csv(ps, "n", idx, trace.states, axes);
  }
}

template <Scalar T>
nlohmann::json orbit_summary(const OrbitTrace<T>& trace, std::ostream& text) {
  const bool odd = trace.params.k % 2 == 1;
  const double drift = signature_drift(trace);
  text << "states=" << trace.states.size() << " truncated=" << yes_no(trace.truncated) << " max_relative_drift=" << drift;
  nlohmann::json j{{"states", trace.states.size()}, {"truncated", trace.truncated}, {"max_relative_drift", drift}};
  if (odd) {
    const bool alt = signs_alternate(trace);
    text << " signZ_alternates=" << yes_no(alt);
    j["signZ_alternates"] = alt;
  }
  text << '\n';
  if (!trace.note.empty()) text << "note: " << trace.note << '\n';
  return j;
}

inline int cmd_orbit(const Options& o, const Streams& io) {
  const auto p = params_from(o, 2);
  const auto x0 = start_point(o, p);
  if (!o.proj.empty()) parse_projection(o.proj, p.k);
  std::ostream& summary = o.out.empty() ? io.err : io.text();
  nlohmann::json j;
  if (o.exact) {
    const auto trace = orbit_signature(p, x0, o.steps);
    emit_orbit_outputs(o, trace, io.out);
    j = orbit_summary(trace, summary);
  } else {
    const auto pd = p.as<double>();
    const auto trace = orbit_signature<double>(pd, to_doubles(x0), o.steps);
    emit_orbit_outputs(o, trace, io.out);
    j = orbit_summary(trace, summary);
  }
  if (io.json && !o.out.empty()) {
    j["command"] = "orbit";
    io.out << j.dump() << '\n';
  }
  return kExitOk;
}

inline FlowMethod parse_method(const std::string& m) {
  if (m == "rk4" || m == "rk4-fixed") return FlowMethod::rk4;
  if (m == "rk45" || m == "rk45-adaptive") return FlowMethod::rk45;
  throw UsageError("unknown integration method '" + m + "'");
}

inline nlohmann::json flow_summary(const FlowTrace& trace, std::ostream& text) {
  text << "drift";
  nlohmann::json drift = nlohmann::json::object();
  for (const auto& d : trace.drift) {
    text << ' ' << d.name << '=' << d.max_relative;
    drift[d.name] = d.max_relative;
  }
  text << " samples=" << trace.states.size() << " method=" << name_of(trace.method)
       << " boundary=" << yes_no(trace.boundary_hit) << '\n';
  return {{"drift", drift}, {"samples", trace.states.size()}, {"boundary_hit", trace.boundary_hit},
          {"method", name_of(trace.method)}};
}

inline int cmd_flow(const Options& o, const Streams& io) {
  const auto p = params_from(o, 3);
  const auto x0 = start_point(o, p);
  if (!(o.dt > 0) || !(o.t_max > 0)) throw UsageError("--dt and --t-max must be positive");
  const auto trace = integrate_flow(p.as<double>(), to_doubles(x0), o.dt, o.t_max, parse_method(o.method));
  std::ostream& summary = o.out.empty() ? io.err : io.text();
  if (o.out.empty()) {
    write_flow_csv(io.out, trace);
  } else {
    auto os = open_output(o.out);
    write_flow_csv(os, trace);
    if (!o.proj.empty()) {
      auto ps = open_output(sibling_path(o.out, "_proj"));
      write_projection_csv(ps, "t", trace.times, trace.states, parse_projection(o.proj, p.k));
    }
  }
  auto j = flow_summary(trace, summary);
  if (io.json && !o.out.empty()) {
    j["command"] = "flow";
    io.out << j.dump() << '\n';
  }
  return kExitOk;
}

template <Scalar T>
int run_reduce(const Options& o, const Streams& io, const Params<T>& p, const std::vector<T>& x0) {
  const auto rp = reduced_params_for<T>(p, x0);
  std::vector<std::vector<T>> states{project_reduced<T>(p.k, x0)};
  for (long i = 0; i < o.steps; ++i) states.push_back(reduced_step<T>(p.k, rp, states.back()));
  const std::vector<std::string> labels =
      p.k == 3 ? std::vector<std::string>{"x1", "x3"} : std::vector<std::string>{"x1", "x2", "x3", "x5"};
  if (o.out.empty()) {
    write_reduced_csv(io.out, labels, states);
  } else {
    auto os = open_output(o.out);
    write_reduced_csv(os, labels, states);
  }
  const T residual = semiconjugacy_residual<T>(p, x0, o.steps);
  std::ostream& summary = o.out.empty() ? io.err : io.text();
  summary << "kappa=" << format_scalar(rp.kappa) << " steps=" << o.steps
          << " semiconjugacy_residual=" << format_scalar(residual) << '\n';
  if (io.json && !o.out.empty()) {
    io.out << nlohmann::json{{"command", "reduce"},
                             {"kappa", format_scalar(rp.kappa)},
                             {"steps", o.steps},
                             {"semiconjugacy_residual", format_scalar(residual)}}
                  .dump()
           << '\n';
  }
  return kExitOk;
}

inline int cmd_reduce(const Options& o, const Streams& io) {
  const auto p = params_from(o, 3);
  if (p.k != 3 && p.k != 5) throw UsageError("reduce supports k = 3 and k = 5");
  const auto x0 = start_point(o, p);
  if (o.steps < 0) throw UsageError("--steps must be non-negative");
  if (o.exact) return run_reduce<Rat>(o, io, p, x0);
  return run_reduce<double>(o, io, p.as<double>(), to_doubles(x0));
}

/// Figure presets: 1 = k=4, a=4 map orbit and flow from (1,2,3,4);
/// 2 = k=5, a=1, 5000 iterates from (1,2,3,4,5);
/// 3 = k=5, a=4, 10^4 iterates from (1,2,3,4,5).
inline int cmd_figures(const Options& o, const Streams& io) {
  if (o.out.empty()) throw UsageError("--out is required for figures");
  Options preset = o;
  long iterates = 0;
  switch (o.which) {
    case 1: preset.k = 4; preset.a = "4"; preset.x0 = "1,2,3,4"; iterates = 5000; break;
    case 2: preset.k = 5; preset.a = "1"; preset.x0 = "1,2,3,4,5"; iterates = 5000; break;
    case 3: preset.k = 5; preset.a = "4"; preset.x0 = "1,2,3,4,5"; iterates = 10000; break;
    default: throw UsageError("--which must be 1, 2 or 3");
  }
  const auto p = params_from(preset, 2);
  const auto pd = p.as<double>();
  const auto x0 = to_doubles(start_point(preset, p));
  const auto axes = parse_projection(o.proj.empty() ? "1,2,3" : o.proj, p.k);

  const auto trace = orbit_signature<double>(pd, x0, iterates);
  {
    auto os = open_output(o.out);
    write_orbit_csv(os, trace);
    std::vector<long> idx;
    for (std::size_t i = 0; i < trace.states.size(); ++i) idx.push_back(static_cast<long>(i));
    auto ps = open_output(sibling_path(o.out, "_proj"));
    write_projection_csv(ps, "n", idx, trace.states, axes);
  }
  auto& text = io.text();
  text << "figure " << o.which << ": k=" << p.k << " a=" << p.a << " map orbit -> " << o.out << '\n';
  nlohmann::json j{{"command", "figures"}, {"which", o.which}, {"orbit", orbit_summary(trace, text)}};

  if (o.which == 1) {
    const auto flow = integrate_flow(pd, x0, 1e-3, 10.0);
    const auto flow_path = sibling_path(o.out, "_flow");
    auto os = open_output(flow_path);
    write_flow_csv(os, flow);
    auto ps = open_output(sibling_path(flow_path, "_proj"));
    write_projection_csv(ps, "t", flow.times, flow.states, axes);
    text << "figure 1: flow trace -> " << flow_path.string() << '\n';
    j["flow"] = flow_summary(flow, text);
  }
  if (io.json) io.out << j.dump() << '\n';
  return kExitOk;
}

/// Entry point shared by the executable and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lyness map verification and simulation laboratory", "lyness"};
  app.require_subcommand(1);
  Options o;
  std::string a_text;
  try {
    o.seed = default_seed();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--k", o.k, "Dimension of the map");
    sub->add_option("--a", a_text, "Parameter a >= 0 (p/q, integer or decimal)");
    sub->add_flag("--json", o.json, "Machine-readable JSON report on stdout");
  };

  auto* verify = app.add_subcommand("verify", "Exact identity sweeps over seeded rational points");
  add_common(verify);
  verify->add_option("--k-range", o.k_range, "Dimension range lo..hi");
  verify->add_option("--trials", o.trials, "Random points per (k, a)");
  verify->add_option("--seed", o.seed, "Seed (default: LYNESS_SEED or 42)");
  verify->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

  auto* orbit = app.add_subcommand("orbit", "Iterate the map and export the orbit as CSV");
  add_common(orbit);
  orbit->add_option("--x0", o.x0, "Initial point, comma separated")->required();
  orbit->add_option("--steps", o.steps, "Number of iterates (negative walks backwards)");
  orbit->add_flag("--exact", o.exact, "Exact rational arithmetic");
  orbit->add_option("--out", o.out, "Output CSV path (default stdout)");
  orbit->add_option("--proj", o.proj, "Also write a 3-axis projection, e.g. 1,2,3");

  auto* flow = app.add_subcommand("flow", "Integrate the Lie symmetry flow and export CSV");
  add_common(flow);
  flow->add_option("--x0", o.x0, "Initial point, comma separated")->required();
  flow->add_option("--dt", o.dt, "Sample spacing / RK4 step");
  flow->add_option("--t-max", o.t_max, "Final time");
  flow->add_option("--method", o.method, "rk4 or rk45");
  flow->add_option("--out", o.out, "Output CSV path (default stdout)");
  flow->add_option("--proj", o.proj, "Also write a 3-axis projection, e.g. 1,2,3");

  auto* reduce = app.add_subcommand("reduce", "Run the reduced map on the W level set (k = 3, 5)");
  add_common(reduce);
  reduce->add_option("--x0", o.x0, "Initial full-dimensional point")->required();
  reduce->add_option("--steps", o.steps, "Number of reduced steps");
  reduce->add_flag("--exact", o.exact, "Exact rational arithmetic");
  reduce->add_option("--out", o.out, "Output CSV path (default stdout)");

  auto* figures = app.add_subcommand("figures", "Regenerate the figure datasets");
  figures->add_option("--which", o.which, "Figure preset 1, 2 or 3")->required();
  figures->add_option("--out", o.out, "Output CSV path")->required();
  figures->add_option("--proj", o.proj, "Projection axes (default 1,2,3)");
  figures->add_flag("--json", o.json, "Machine-readable JSON report on stdout");

  std::vector<const char*> argv{"lyness"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const bool a_given = !a_text.empty();
  o.a = a_given ? a_text : (verify->parsed() ? "" : "1");
  const Streams io{out, err, o.json};
  try {
    if (verify->parsed()) return cmd_verify(o, io);
    if (orbit->parsed()) return cmd_orbit(o, io);
    if (flow->parsed()) return cmd_flow(o, io);
    if (reduce->parsed()) return cmd_reduce(o, io);
    if (figures->parsed()) return cmd_figures(o, io);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace lyness::cli
