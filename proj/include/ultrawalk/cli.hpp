// Copyright 2026 The ultrawalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command-line front end. A RunSpec is parsed from flags (and an optional
// INI/TOML config file), validated, dispatched to the library, and rendered
// as a versioned CSV or JSON table.
//
// Exit codes: 0 success, 2 validation, 3 dense cap exceeded, 4 numerical
// self-check failure, 1 anything else. Failures print exactly one line to
// stderr:  error code=<n> kind=<kind>: <message>

#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ultrawalk/ultrawalk.hpp"

namespace ultrawalk::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kDenseCapEnv = "ULTRAWALK_DENSE_CAP";

enum class ExitCode : int { ok = 0, internal = 1, validation = 2, resource = 3, numerical = 4 };

enum class Command {
  spectrum,
  evolve,
  time_average,
  limit,
  mean_distance,
  classical,
  decay_fit,
  graph,
  compare
};

inline std::string_view command_name(Command c) {
  switch (c) {
    case Command::spectrum:
      return "spectrum";
    case Command::evolve:
      return "evolve";
    case Command::time_average:
      return "time-average";
    case Command::limit:
      return "limit";
    case Command::mean_distance:
      return "mean-distance";
    case Command::classical:
      return "classical";
    case Command::decay_fit:
      return "decay-fit";
    case Command::graph:
      return "graph";
    case Command::compare:
      return "compare";
  }
  return "?";
}

enum class OutputFormat { csv, json };

struct LandscapeOptions {
  std::string kind;  // empty: explicit if eps given
  std::vector<double> eps;
  double w0 = 1.0;
  std::optional<double> alpha;
  std::optional<int> reference_level;
};

struct RunSpec {
  Command command = Command::spectrum;
  int p = 0;
  int M = 0;
  LandscapeOptions landscape;
  std::optional<double> eps0;
  std::vector<double> times;
  std::optional<double> horizon;
  std::size_t steps = 0;
  bool numeric = false;
  bool amplitude = false;
  bool check = false;
  int classes = -1;
  std::string family;
  int N = 0;
  bool time_average = false;
  int n_max = 40;
  std::string model = "power";
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t samples = 200;
  // compare
  int cycle_n = 100;
  int hypercube_n = 1024;
  double line_horizon = 1000.0;
  int complete_n = 100;
  std::vector<int> depths{1, 2, 4, 8, 16};

  OutputFormat format = OutputFormat::csv;
  std::string output_path;
  std::size_t dense_cap = kDefaultDenseCap;
};

/// One output row. Absent fields render as empty CSV cells / JSON null.
struct Record {
  std::string entity;
  std::optional<double> t;
  std::optional<int> class_k;
  std::optional<std::string> class_size;
  std::optional<std::string> representative;
  double value = 0.0;
  std::optional<std::string> exact;
};

struct Report {
  Command command = Command::spectrum;
  std::vector<Record> records;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

/// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string render_csv(const Report& rep) {
  std::ostringstream os;
  os << "entity,t,class_k,class_size,representative,value_float,value_exact\n";
  for (const auto& r : rep.records) {
    os << r.entity << ',' << (r.t ? format_double(*r.t) : "") << ','
       << (r.class_k ? std::to_string(*r.class_k) : "") << ',' << r.class_size.value_or("")
       << ',' << r.representative.value_or("") << ',' << format_double(r.value) << ','
       << r.exact.value_or("") << '\n';
  }
  return os.str();
}

inline std::string render_json(const Report& rep) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = std::string(command_name(rep.command));
  for (const auto& [k, v] : rep.extra.items()) j[k] = v;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : rep.records) {
    nlohmann::ordered_json row;
    row["entity"] = r.entity;
    row["t"] = r.t ? nlohmann::ordered_json(*r.t) : nlohmann::ordered_json(nullptr);
    row["class_k"] = r.class_k ? nlohmann::ordered_json(*r.class_k) : nlohmann::ordered_json(nullptr);
    row["class_size"] =
        r.class_size ? nlohmann::ordered_json(*r.class_size) : nlohmann::ordered_json(nullptr);
    row["representative"] = r.representative ? nlohmann::ordered_json(*r.representative)
                                             : nlohmann::ordered_json(nullptr);
    row["value_float"] = r.value;
    row["value_exact"] = r.exact ? nlohmann::ordered_json(*r.exact) : nlohmann::ordered_json(nullptr);
    rows.push_back(std::move(row));
  }
  j["records"] = std::move(rows);
  return j.dump(2) + "\n";
}

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

inline TreeParams tree_of(const RunSpec& s) {
  require(s.p != 0, "--p is required for " + std::string(command_name(s.command)));
  require(s.M != 0, "--M is required for " + std::string(command_name(s.command)));
  return TreeParams::make(s.p, s.M);
}

inline Landscape landscape_of(const RunSpec& s) {
  const auto& o = s.landscape;
  std::string kind = o.kind;
  if (kind.empty()) {
    require(!o.eps.empty(), "a landscape is required: pass --eps or --kind");
    kind = "explicit";
  }
  if (kind == "explicit") {
    require(!o.eps.empty(), "explicit landscape needs --eps");
    return ExplicitLandscape{o.eps};
  }
  require(o.eps.empty(), "--eps only applies to the explicit landscape");
  if (kind == "linear") return LinearLandscape{o.w0, o.alpha.value_or(1.0), o.reference_level};
  if (kind == "logarithmic") {
    return LogarithmicLandscape{o.w0, o.alpha.value_or(1.2), o.reference_level};
  }
  if (kind == "exponential") {
    return ExponentialLandscape{o.w0, o.alpha.value_or(1.0), o.reference_level};
  }
  throw ValidationError("unknown landscape kind '" + kind +
                        "' (expected explicit, linear, logarithmic or exponential)");
}

inline WalkParams walk_of(const RunSpec& s) {
  const TreeParams tp = tree_of(s);
  EpsilonSequence es = epsilon_sequence(landscape_of(s), tp);
  if (s.eps0) es = es.with_eps0(*s.eps0);
  return WalkParams::make(tp, std::move(es));
}

inline const std::vector<double>& times_of(const RunSpec& s) {
  require(!s.times.empty(), "--t or --t-grid is required for " +
                                std::string(command_name(s.command)));
  return s.times;
}

inline Record class_record(std::string entity, std::optional<double> t, int k,
                           const TreeParams& tp, double value,
                           std::optional<std::string> exact = std::nullopt) {
  Record r;
  r.entity = std::move(entity);
  r.t = t;
  r.class_k = k;
  r.class_size = std::to_string(class_size(k, tp));
  r.representative = std::to_string(class_representative(k, tp).value);
  r.value = value;
  r.exact = std::move(exact);
  return r;
}

inline Record scalar_record(std::string entity, double value,
                            std::optional<std::string> exact = std::nullopt,
                            std::optional<double> t = std::nullopt) {
  Record r;
  r.entity = std::move(entity);
  r.t = t;
  r.value = value;
  r.exact = std::move(exact);
  return r;
}

inline Report run_spectrum(const RunSpec& s) {
  const WalkParams wp = walk_of(s);
  const Spectrum& sp = wp.spectrum();
  Report rep;
  for (std::size_t m = 0; m < sp.size(); ++m) {
    Record r;
    r.entity = "eta";
    r.class_k = static_cast<int>(m);
    r.class_size = std::to_string(sp.mults[m]);
    r.value = sp.etas[m];
    rep.records.push_back(std::move(r));
  }
  if (s.check) {
    const auto numeric = spectrum_numeric(build_hamiltonian(wp.eps(), wp.tree(), s.dense_cap));
    const auto closed = expand_spectrum(sp);
    double worst = 0.0;
    for (std::size_t i = 0; i < closed.size(); ++i) {
      worst = std::max(worst, std::abs(closed[i] - numeric[i]));
    }
    const double scale = std::max(1.0, max_abs_eta(sp));
    if (worst > 1e-9 * scale) {
      throw NumericalError("closed-form spectrum disagrees with diagonalisation by " +
                           format_double(worst));
    }
    rep.extra["check"] = {{"oracle", "dense-eigensolver"}, {"max_abs_diff", worst}};
  }
  return rep;
}

inline Report run_evolve(const RunSpec& s) {
  const WalkParams wp = walk_of(s);
  const auto& tp = wp.tree();
  Report rep;
  double worst = 0.0;
  for (double t : times_of(s)) {
    const AmplitudeProfile a = amplitude(wp, t);
    for (int k = 0; k <= tp.depth(); ++k) {
      const auto v = a[static_cast<std::size_t>(k)];
      if (s.amplitude) {
        rep.records.push_back(class_record("amplitude_re", t, k, tp, v.real()));
        rep.records.push_back(class_record("amplitude_im", t, k, tp, v.imag()));
      }
      rep.records.push_back(class_record("probability", t, k, tp, std::norm(v)));
    }
    if (s.check) {
      const auto dense = evolve_oracle(wp, t, s.dense_cap);
      const auto full = expand_profile(a, tp);
      for (std::size_t n = 0; n < full.size(); ++n) worst = std::max(worst, std::abs(full[n] - dense[n]));
    }
  }
  if (s.check) {
    if (worst > 1e-10) {
      throw NumericalError("closed-form amplitude disagrees with exp(itH) by " +
                           format_double(worst));
    }
    rep.extra["check"] = {{"oracle", "dense-exp-itH"}, {"max_abs_diff", worst}};
  }
  return rep;
}

inline Report run_time_average(const RunSpec& s) {
  Report rep;
  if (s.numeric) {
    const WalkParams wp = walk_of(s);
    require(s.horizon.has_value(), "--T is required with --numeric");
    std::size_t steps = s.steps;
    if (steps == 0) {
      steps = static_cast<std::size_t>(std::ceil(*s.horizon * max_abs_eta(wp.spectrum()) / 0.1));
    }
    const ProbabilityProfile avg = time_averaged_numeric(wp, *s.horizon, steps);
    for (int k = 0; k <= wp.depth(); ++k) {
      rep.records.push_back(class_record("time_average_numeric", std::nullopt, k, wp.tree(),
                                         avg[static_cast<std::size_t>(k)]));
    }
    rep.extra["quadrature"] = {{"T", *s.horizon}, {"steps", steps}};
    return rep;
  }
  const TreeParams tp = tree_of(s);
  const ExactProfile avg = time_averaged_exact(tp);
  for (int k = 0; k <= tp.depth(); ++k) {
    const auto& v = avg[static_cast<std::size_t>(k)];
    rep.records.push_back(
        class_record("time_average", std::nullopt, k, tp, to_double(v), to_exact_string(v)));
  }
  return rep;
}

inline Report run_limit(const RunSpec& s) {
  require(s.p != 0, "--p is required for limit");
  require(s.p >= 2, "branching degree p must be >= 2");
  const int K = s.classes >= 0 ? s.classes : (s.M > 0 ? s.M : 4);
  Report rep;
  for (int k = 0; k <= K; ++k) {
    const Rational v = time_averaged_limit(s.p, k);
    Record r = scalar_record("limit", to_double(v), to_exact_string(v));
    r.class_k = k;
    r.class_size = k == 0 ? std::string("1")
                          : ((s.p - 1) * ipow(static_cast<std::uint64_t>(s.p),
                                              static_cast<unsigned>(k - 1)))
                                .str();
    rep.records.push_back(std::move(r));
  }
  if (s.M > 0) {
    const TreeParams tp = TreeParams::make(s.p, s.M);
    const ExactProfile finite = time_averaged_exact(tp);
    for (int k = 0; k <= s.M; ++k) {
      const Rational gap = finite[static_cast<std::size_t>(k)] - time_averaged_limit(s.p, k);
      Record r = scalar_record("finite_minus_limit", to_double(gap), to_exact_string(gap));
      r.class_k = k;
      rep.records.push_back(std::move(r));
    }
    const Rational g = limit_gap(s.p, s.M);
    rep.records.push_back(scalar_record("limit_gap_closed_form", to_double(g), to_exact_string(g)));
  }
  return rep;
}

inline Report run_mean_distance(const RunSpec& s) {
  Report rep;
  if (!s.times.empty()) {
    const WalkParams wp = walk_of(s);
    for (double t : s.times) rep.records.push_back(scalar_record("mean_distance", mean_distance(wp, t), std::nullopt, t));
    return rep;
  }
  const TreeParams tp = tree_of(s);
  const Rational closed = time_averaged_mean_distance(tp);
  const Rational weighted = time_averaged_mean_distance_weighted(tp);
  rep.records.push_back(scalar_record("mean_distance_closed", to_double(closed), to_exact_string(closed)));
  rep.records.push_back(scalar_record("mean_distance_weighted", to_double(weighted), to_exact_string(weighted)));
  const Rational scaled = closed * Rational(tp.sites()) / Rational(tp.depth());
  rep.records.push_back(scalar_record("scaled_mean_distance", to_double(scaled), to_exact_string(scaled)));
  const Rational lim = scaled_mean_distance_limit(tp.p());
  rep.records.push_back(scalar_record("scaled_mean_distance_limit", to_double(lim), to_exact_string(lim)));
  if (closed != weighted) throw NumericalError("mean-distance routes disagree");
  return rep;
}

inline Report run_classical(const RunSpec& s) {
  const WalkParams wp = walk_of(s);
  const auto& tp = wp.tree();
  Report rep;
  double worst = 0.0;
  for (double t : times_of(s)) {
    const ProbabilityProfile d = classical_distribution(wp, t);
    for (int k = 0; k <= tp.depth(); ++k) {
      rep.records.push_back(class_record("classical", t, k, tp, d[static_cast<std::size_t>(k)]));
    }
    rep.records.push_back(scalar_record("return_probability", return_probability(wp, t), std::nullopt, t));
    if (s.check) {
      const auto dense = classical_oracle(wp, t, s.dense_cap);
      const auto full = expand_profile(d, tp);
      for (std::size_t n = 0; n < full.size(); ++n) worst = std::max(worst, std::abs(full[n] - dense[n]));
    }
  }
  if (s.check) {
    if (worst > 1e-10) {
      throw NumericalError("classical distribution disagrees with exp(tQ) by " + format_double(worst));
    }
    rep.extra["check"] = {{"oracle", "dense-exp-tQ"}, {"max_abs_diff", worst}};
  }
  return rep;
}

inline Report run_decay_fit(const RunSpec& s) {
  const TreeParams tp = tree_of(s);
  const DecayFitResult fit = fit_decay(landscape_of(s), tp, DecayWindow{s.t_min, s.t_max},
                                       parse_decay_model(s.model), s.samples);
  Report rep;
  rep.records.push_back(scalar_record("slope", fit.slope));
  rep.records.push_back(scalar_record("intercept", fit.intercept));
  rep.records.push_back(scalar_record("residual", fit.residual));
  rep.records.push_back(scalar_record("t_min", fit.window.t_min));
  rep.records.push_back(scalar_record("t_max", fit.window.t_max));
  rep.extra["fit"] = {{"model", std::string(to_string(fit.model))},
                      {"slope", fit.slope},
                      {"intercept", fit.intercept},
                      {"residual", fit.residual},
                      {"window", {fit.window.t_min, fit.window.t_max}},
                      {"samples", fit.samples}};
  return rep;
}

inline Report run_graph(const RunSpec& s) {
  Report rep;
  const std::string& f = s.family;
  rep.extra["family"] = f;
  auto site_rec = [](std::string entity, std::optional<double> t, int n, double v,
                     std::optional<std::string> exact = std::nullopt) {
    Record r;
    r.entity = std::move(entity);
    r.t = t;
    r.representative = std::to_string(n);
    r.value = v;
    r.exact = std::move(exact);
    return r;
  };
  if (f == "cycle") {
    require(s.N != 0, "--N is required for the cycle");
    if (s.time_average) {
      const auto avg = cycle_time_averaged_exact(s.N);
      for (int n = 0; n < s.N; ++n) {
        rep.records.push_back(site_rec("site_average", std::nullopt, n, to_double(avg[n]), to_exact_string(avg[n])));
      }
      return rep;
    }
    // P(n,t) from the circulant spectrum: (1/N) sum_j exp(2it cos(2 pi j/N)) w^(jn)
    for (double t : times_of(s)) {
      for (int n = 0; n < s.N; ++n) {
        std::complex<double> a{};
        for (int j = 0; j < s.N; ++j) {
          const double phase = 2.0 * std::numbers::pi * j / s.N;
          a += std::polar(1.0, 2.0 * t * std::cos(phase) + phase * n);
        }
        rep.records.push_back(site_rec("probability", t, n, std::norm(a) / (double(s.N) * s.N)));
      }
    }
    return rep;
  }
  if (f == "line") {
    if (s.time_average) {
      require(s.horizon.has_value(), "--T is required for the line time average");
      const auto avg = line_time_average_all(s.n_max, *s.horizon, s.steps);
      for (int n = 0; n <= s.n_max; ++n) rep.records.push_back(site_rec("site_average", std::nullopt, n, avg[n]));
      return rep;
    }
    for (double t : times_of(s)) {
      const auto j = bessel_j_all(s.n_max, t);
      for (int n = -s.n_max; n <= s.n_max; ++n) {
        const double v = j[static_cast<std::size_t>(n < 0 ? -n : n)];
        rep.records.push_back(site_rec("probability", t, n, v * v));
      }
    }
    return rep;
  }
  if (f == "hypercube") {
    require(s.N != 0, "--N is required for the hypercube");
    if (s.time_average) {
      const HypercubeAverages avg = hypercube_time_averaged(s.N);
      for (int k = 0; k <= s.N; ++k) {
        Record r;
        r.entity = "site_average";
        r.class_k = k;
        r.class_size = avg.class_sizes[k].str();
        r.value = to_double(avg.per_site[k]);
        r.exact = to_exact_string(avg.per_site[k]);
        rep.records.push_back(r);
        r.entity = "class_average";
        r.value = to_double(avg.per_class[k]);
        r.exact = to_exact_string(avg.per_class[k]);
        rep.records.push_back(std::move(r));
      }
      return rep;
    }
    for (double t : times_of(s)) {
      for (int k = 0; k <= s.N; ++k) {
        Record r;
        r.entity = "probability";
        r.t = t;
        r.class_k = k;
        r.class_size = binomial(static_cast<unsigned>(s.N), static_cast<unsigned>(k)).str();
        r.value = hypercube_probability(k, s.N, t);
        rep.records.push_back(std::move(r));
      }
    }
    return rep;
  }
  if (f == "complete") {
    require(s.N != 0, "--N is required for the complete graph");
    if (s.time_average) {
      const auto [origin, other] = complete_time_averaged(s.N);
      rep.records.push_back(site_rec("site_average", std::nullopt, 0, to_double(origin), to_exact_string(origin)));
      Record r = site_rec("site_average", std::nullopt, 1, to_double(other), to_exact_string(other));
      r.class_size = std::to_string(s.N - 1);
      rep.records.push_back(std::move(r));
      return rep;
    }
    for (double t : times_of(s)) {
      rep.records.push_back(site_rec("probability", t, 0, complete_probability(true, s.N, t)));
      rep.records.push_back(site_rec("probability", t, 1, complete_probability(false, s.N, t)));
    }
    return rep;
  }
  throw ValidationError("unknown graph family '" + f +
                        "' (expected cycle, line, hypercube or complete)");
}

/// Largest long-time site weight per family: the localization taxonomy.
inline Report run_compare(const RunSpec& s) {
  Report rep;
  Rational cyc_max = 0;
  for (const auto& v : cycle_time_averaged_exact(s.cycle_n)) cyc_max = std::max(cyc_max, v);
  Record r = scalar_record("cycle_max_site_average", to_double(cyc_max), to_exact_string(cyc_max));
  r.class_size = std::to_string(s.cycle_n);
  rep.records.push_back(std::move(r));

  // The per-site hypercube average peaks at the origin (and its antipode).
  const Rational cube_max = hypercube_site_average(0, s.hypercube_n);
  r = scalar_record("hypercube_max_site_average", to_double(cube_max), to_exact_string(cube_max));
  r.class_size = std::to_string(s.hypercube_n);
  rep.records.push_back(std::move(r));

  const int n_max = static_cast<int>(s.line_horizon) + 40;
  const auto line = line_time_average_all(n_max, s.line_horizon);
  double line_max = 0.0;
  for (double v : line) line_max = std::max(line_max, v);
  rep.records.push_back(scalar_record("line_max_site_average", line_max, std::nullopt, s.line_horizon));

  const auto [origin, other] = complete_time_averaged(s.complete_n);
  r = scalar_record("complete_origin_average", to_double(origin), to_exact_string(origin));
  r.class_size = std::to_string(s.complete_n);
  rep.records.push_back(std::move(r));

  const int p = s.p != 0 ? s.p : 3;
  for (int M : s.depths) {
    const ExactProfile avg = time_averaged_exact(TreeParams::make(p, M));
    Rational lo = avg[0];
    for (const auto& v : avg.values) lo = std::min(lo, v);
    r = scalar_record("ultrametric_origin_average", to_double(avg[0]), to_exact_string(avg[0]));
    r.class_size = std::to_string(M);
    rep.records.push_back(r);
    r = scalar_record("ultrametric_min_class_average", to_double(lo), to_exact_string(lo));
    r.class_size = std::to_string(M);
    rep.records.push_back(std::move(r));
  }
  const Rational floor = Rational(p - 1, p + 1);
  rep.records.push_back(scalar_record("ultrametric_origin_limit", to_double(floor), to_exact_string(floor)));
  return rep;
}

}  // namespace detail

/// Executes a validated spec and returns the report (throws on failure).
inline Report execute(const RunSpec& s) {
  Report rep;
  switch (s.command) {
    case Command::spectrum:
      rep = detail::run_spectrum(s);
      break;
    case Command::evolve:
      rep = detail::run_evolve(s);
      break;
    case Command::time_average:
      rep = detail::run_time_average(s);
      break;
    case Command::limit:
      rep = detail::run_limit(s);
      break;
    case Command::mean_distance:
      rep = detail::run_mean_distance(s);
      break;
    case Command::classical:
      rep = detail::run_classical(s);
      break;
    case Command::decay_fit:
      rep = detail::run_decay_fit(s);
      break;
    case Command::graph:
      rep = detail::run_graph(s);
      break;
    case Command::compare:
      rep = detail::run_compare(s);
      break;
  }
  rep.command = s.command;
  return rep;
}

inline std::string one_line(std::string msg) {
  for (char& c : msg) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return msg;
}

inline int report_error(std::ostream& err, ExitCode code, std::string_view kind,
                        const std::string& msg) {
  err << "error code=" << static_cast<int>(code) << " kind=" << kind << ": " << one_line(msg)
      << '\n';
  return static_cast<int>(code);
}

/// Runs a spec, writing the table to `out` (or to spec.output_path).
inline int run(const RunSpec& s, std::ostream& out, std::ostream& err) {
  try {
    const Report rep = execute(s);
    const std::string text = s.format == OutputFormat::json ? render_json(rep) : render_csv(rep);
    if (s.output_path.empty()) {
      out << text;
    } else {
      std::ofstream f(s.output_path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open output file " + s.output_path);
      f << text;
    }
    return 0;
  } catch (const ValidationError& e) {
    return report_error(err, ExitCode::validation, "validation", e.what());
  } catch (const DomainError& e) {
    return report_error(err, ExitCode::validation, "domain", e.what());
  } catch (const ResourceError& e) {
    return report_error(err, ExitCode::resource, "resource",
                        std::string(e.what()) + " (cap=" + std::to_string(e.cap()) + ")");
  } catch (const NumericalError& e) {
    return report_error(err, ExitCode::numerical, "numerical", e.what());
  } catch (const std::exception& e) {
    return report_error(err, ExitCode::internal, "internal", e.what());
  }
}

/// Reads the dense-cap override from the environment.
inline std::size_t dense_cap_from_env() {
  const char* raw = std::getenv(kDenseCapEnv);
  if (raw == nullptr || *raw == '\0') return kDefaultDenseCap;
  std::size_t v = 0;
  const std::string_view sv(raw);
  const auto r = std::from_chars(sv.data(), sv.data() + sv.size(), v);
  if (r.ec != std::errc{} || r.ptr != sv.data() + sv.size() || v == 0) {
    throw ValidationError(std::string(kDenseCapEnv) + " must be a positive integer, got '" +
                          std::string(sv) + "'");
  }
  return v;
}

/// "start:stop:count" -> count evenly spaced times including both ends.
inline std::vector<double> parse_time_grid(const std::string& g) {
  const auto a = g.find(':');
  const auto b = g.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) {
    throw ValidationError("--t-grid expects start:stop:count, got '" + g + "'");
  }
  double start = 0, stop = 0;
  long count = 0;
  try {
    std::size_t used = 0;
    start = std::stod(g.substr(0, a), &used);
    stop = std::stod(g.substr(a + 1, b - a - 1));
    count = std::stol(g.substr(b + 1));
  } catch (const std::exception&) {
    throw ValidationError("--t-grid expects start:stop:count, got '" + g + "'");
  }
  if (count < 1) throw ValidationError("--t-grid count must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    out[i] = count == 1 ? start : start + (stop - start) * static_cast<double>(i) / (count - 1);
  }
  return out;
}

namespace detail {

/// Option storage for one subcommand. Each subcommand owns its own bundle so
/// config sections for other subcommands cannot leak into the chosen one.
struct OptionBundle {
  RunSpec spec;
  std::string format = "csv";
  std::string t_grid;
  std::string kind;
  std::optional<int> ref_level;
  std::optional<double> alpha;

  void add_output(CLI::App* sub) {
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("-o,--output", spec.output_path, "write to file instead of stdout");
  }
  void add_tree(CLI::App* sub) {
    sub->add_option("--p", spec.p, "branching degree (>= 2)");
    sub->add_option("--M", spec.M, "depth (>= 1)");
  }
  void add_landscape(CLI::App* sub) {
    sub->add_option("--kind", kind, "explicit, linear, logarithmic or exponential");
    sub->add_option("--eps", spec.landscape.eps, "explicit couplings eps_1,...,eps_M")
        ->delimiter(',');
    sub->add_option("--w0", spec.landscape.w0, "landscape rate scale");
    sub->add_option("--alpha", alpha, "landscape exponent");
    sub->add_option("--ref-level", ref_level, "landscape reference level (default M)");
    sub->add_option("--eps0", spec.eps0, "override the diagonal eps_0");
  }
  void add_times(CLI::App* sub) {
    sub->add_option("--t", spec.times, "time(s), comma separated")->delimiter(',');
    sub->add_option("--t-grid", t_grid, "start:stop:count");
  }

  RunSpec finish(Command cmd, std::size_t dense_cap) {
    RunSpec out = spec;
    out.command = cmd;
    out.dense_cap = dense_cap;
    out.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
    out.landscape.kind = kind;
    out.landscape.alpha = alpha;
    out.landscape.reference_level = ref_level;
    if (!t_grid.empty()) {
      if (!out.times.empty()) throw ValidationError("pass either --t or --t-grid, not both");
      out.times = parse_time_grid(t_grid);
    }
    return out;
  }
};

}  // namespace detail

/// Full command-line entry point. `args` excludes the program name.
///
/// Precedence: explicit flags, then the --config file section named after
/// the subcommand, then built-in defaults.
inline int main_entry(const std::vector<std::string>& args, std::ostream& out,
                      std::ostream& err) {
  std::size_t dense_cap = kDefaultDenseCap;
  try {
    dense_cap = dense_cap_from_env();
  } catch (const ValidationError& e) {
    return report_error(err, ExitCode::validation, "validation", e.what());
  }

  CLI::App app{"Quantum and classical walks on the p-adic ball hierarchy", "ultrawalk"};
  app.set_config("--config", "", "INI/TOML file; sections are subcommand names");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  constexpr std::size_t kCommands = 9;
  std::array<detail::OptionBundle, kCommands> bundles;
  std::array<CLI::App*, kCommands> apps{};
  auto sub = [&](Command c, const std::string& help) -> std::pair<CLI::App*, detail::OptionBundle&> {
    const auto i = static_cast<std::size_t>(c);
    apps[i] = app.add_subcommand(std::string(command_name(c)), help);
    return {apps[i], bundles[i]};
  };

  {
    auto [a, b] = sub(Command::spectrum, "closed-form eigenvalues and multiplicities");
    b.add_tree(a);
    b.add_landscape(a);
    a->add_flag("--check", b.spec.check, "verify against dense diagonalisation");
    b.add_output(a);
  }
  {
    auto [a, b] = sub(Command::evolve, "class probabilities of exp(itH)|0>");
    b.add_tree(a);
    b.add_landscape(a);
    b.add_times(a);
    a->add_flag("--amplitude", b.spec.amplitude, "also emit real and imaginary parts");
    a->add_flag("--check", b.spec.check, "verify against dense exp(itH)");
    b.add_output(a);
  }
  {
    auto [a, b] = sub(Command::time_average, "long-time average per class");
    b.add_tree(a);
    b.add_landscape(a);
    a->add_flag("--numeric", b.spec.numeric, "trapezoid quadrature instead of the exact form");
    a->add_option("--T", b.spec.horizon, "averaging horizon");
    a->add_option("--steps", b.spec.steps, "quadrature intervals (default: 0.1/max|eta| spacing)");
    b.add_output(a);
  }
  {
    auto [a, b] = sub(Command::limit, "infinite-depth time average");
    a->add_option("--p", b.spec.p, "branching degree");
    a->add_option("--M", b.spec.M, "also compare against this finite depth");
    a->add_option("--classes", b.spec.classes, "emit classes 0..K");
    b.add_output(a);
  }
  {
    auto [a, b] = sub(Command::mean_distance, "mean distance from the origin");
    b.add_tree(a);
    b.add_landscape(a);
    b.add_times(a);
    b.add_output(a);
  }
  {
    auto [a, b] = sub(Command::classical, "classical random walk distribution");
    b.add_tree(a);
    b.add_landscape(a);
    b.add_times(a);
    a->add_flag("--check", b.spec.check, "verify against dense exp(tQ)");
    b.add_output(a);
  }
  {
    auto [a, b] = sub(Command::decay_fit, "fit the classical return-probability decay");
    b.add_tree(a);
    b.add_landscape(a);
    a->add_option("--t-min", b.spec.t_min, "window start");
    a->add_option("--t-max", b.spec.t_max, "window end");
    a->add_option("--model", b.spec.model, "power, stretched or logarithmic");
    a->add_option("--samples", b.spec.samples, "log-spaced sample count");
    b.add_output(a);
  }
  {
    auto [a, b] = sub(Command::graph, "reference graphs");
    a->add_option("--family", b.spec.family, "cycle, line, hypercube or complete")->required();
    a->add_option("--N", b.spec.N, "graph size parameter");
    a->add_flag("--time-average", b.spec.time_average, "long-time average instead of P(n,t)");
    a->add_option("--T", b.spec.horizon, "averaging horizon (line)");
    a->add_option("--steps", b.spec.steps, "quadrature intervals (line)");
    a->add_option("--n-max", b.spec.n_max, "largest |n| reported on the line");
    b.add_times(a);
    b.add_output(a);
  }
  {
    auto [a, b] = sub(Command::compare, "localization taxonomy across graph families");
    a->add_option("--p", b.spec.p, "ultrametric branching degree (default 3)");
    a->add_option("--depths", b.spec.depths, "ultrametric depths")->delimiter(',');
    a->add_option("--cycle-N", b.spec.cycle_n, "cycle size");
    a->add_option("--hypercube-N", b.spec.hypercube_n, "hypercube dimension");
    a->add_option("--line-T", b.spec.line_horizon, "line averaging horizon");
    a->add_option("--complete-N", b.spec.complete_n, "complete graph size");
    b.add_output(a);
  }

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    return report_error(err, ExitCode::validation, "usage", e.what());
  }

  RunSpec spec;
  try {
    for (std::size_t i = 0; i < kCommands; ++i) {
      if (apps[i]->parsed()) spec = bundles[i].finish(static_cast<Command>(i), dense_cap);
    }
  } catch (const ValidationError& e) {
    return report_error(err, ExitCode::validation, "validation", e.what());
  }
  return run(spec, out, err);
}

}  // namespace ultrawalk::cli
