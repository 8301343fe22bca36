#pragma once

// Run configuration: flat "key = value" text with dotted keys. Unknown or
// repeated keys are rejected; echo() writes every key and parses back to the
// same configuration.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fraclog/energy.hpp"
#include "fraclog/errors.hpp"
#include "fraclog/field.hpp"
#include "fraclog/kernel.hpp"
#include "fraclog/lattice.hpp"
#include "fraclog/potential.hpp"
#include "fraclog/solver.hpp"

namespace fraclog {

struct RunConfig {
  int d = 1;
  int R = 10;

  double s = 0.5;
  std::int64_t cutoff = 0;       ///< 0: the box l1 diameter
  std::int64_t tail_radius = 0;  ///< 0: 1e5 (d = 1), 1e3 (d >= 2)
  double mass_eps = 1e-12;
  double c_low = 1.0;
  double c_high = 1.0;

  PotentialKind potential = PotentialKind::constant;
  double h0 = 0.0;
  double h_value = 0.0;
  std::vector<int> period;
  std::vector<double> cells;
  std::vector<Coord> x0;
  double rate = 1.0;

  double delta = std::exp(-1.5);
  double p = 3.0;

  SolveMode mode = SolveMode::ground;
  double step = 1.0;
  int max_iters = 20000;
  double tol = 1e-8;
  int restarts = 1;
  std::uint64_t seed = 1;
  std::optional<InitKind> init;
  std::string init_file;
  int patch = 2;
  double noise = 0.05;
  int max_halvings = 30;

  double projection_tol = 1e-12;
  int max_bracket = 64;

  std::string out = "out";

  KernelSpec kernel_spec() const {
    KernelSpec k;
    k.d = d;
    k.s = s;
    k.c_low = c_low;
    k.c_high = c_high;
    return k;
  }

  MassOptions mass_options() const {
    MassOptions m;
    m.max_radius = tail_radius;
    return m;
  }

  Potential make_potential() const {
    switch (potential) {
      case PotentialKind::constant: return Potential::constant(h_value, h0);
      case PotentialKind::periodic: return Potential::periodic(period, cells, h0);
      case PotentialKind::coercive:
        return Potential::coercive(x0.empty() ? std::vector<Coord>(static_cast<std::size_t>(d), 0) : x0, rate, h0);
    }
    throw ConfigError("unknown potential kind", "potential.kind");
  }

  SplitParams split() const { return {delta, p}; }

  SignProjectionOptions projection() const {
    SignProjectionOptions o;
    o.tol = projection_tol;
    o.max_bracket_exponent = max_bracket;
    return o;
  }

  /// Solver settings; an init=file field is read here.
  SolveConfig solve_config() const {
    SolveConfig c;
    c.mode = mode;
    c.step = step;
    c.max_iters = max_iters;
    c.residual_tol = tol;
    c.restarts = restarts;
    c.rng_seed = seed;
    c.init = init;
    c.patch_radius = patch;
    c.noise = noise;
    c.max_halvings = max_halvings;
    c.projection = projection();
    if (init == InitKind::file) {
      std::ifstream in(init_file);
      if (!in) throw ConfigError("cannot open init field " + init_file, "solver.init_file");
      c.init_field = read_field_csv(in, enumerate_box(d, R));
    }
    return c;
  }

  BoxKernel make_kernel(BoxPtr box) const {
    const std::int64_t need = std::max<std::int64_t>(1, box->l1_diameter());
    const std::int64_t cut = cutoff > 0 ? cutoff : need;
    auto table = std::make_shared<const KernelTable>(kernel_spec(), cut, mass_eps, mass_options());
    return BoxKernel(std::move(box), std::move(table));
  }

  Problem make_problem(BoxPtr box = nullptr) const {
    if (!box) box = enumerate_box(d, R);
    return Problem(make_kernel(std::move(box)), make_potential(), split());
  }

  /// Re-checks every module-level invariant.
  void validate() const {
    if (d < 1) throw ConfigError("lattice.d must be >= 1", "lattice.d");
    if (R < 0) throw ConfigError("lattice.R must be >= 0", "lattice.R");
    enumerate_box(d, R);
    kernel_spec().validate();
    if (cutoff < 0) throw ConfigError("kernel.cutoff must be >= 0", "kernel.cutoff");
    if (cutoff > 0 && cutoff < 2LL * R * d) throw ConfigError("kernel.cutoff is below the box l1 diameter", "kernel.cutoff");
    if (tail_radius < 0) throw ConfigError("kernel.tail_radius must be >= 0", "kernel.tail_radius");
    if (!(mass_eps > 0.0)) throw ConfigError("kernel.eps must be positive", "kernel.eps");
    make_potential();
    if (potential == PotentialKind::periodic && period.size() != static_cast<std::size_t>(d)) {
      throw ConfigError("potential.period needs one entry per dimension", "potential.period");
    }
    if (potential == PotentialKind::coercive && !x0.empty() && x0.size() != static_cast<std::size_t>(d)) {
      throw ConfigError("potential.x0 needs one entry per dimension", "potential.x0");
    }
    split().validate();
    if (!(projection_tol > 0.0)) throw ConfigError("projection.tol must be positive", "projection.tol");
    if (max_bracket < 1) throw ConfigError("projection.max_bracket must be >= 1", "projection.max_bracket");
    if (!(noise >= 0.0 && noise < 1.0)) throw ConfigError("solver.noise must lie in [0, 1)", "solver.noise");
    if (max_halvings < 0) throw ConfigError("solver.max_halvings must be >= 0", "solver.max_halvings");
    if (init == InitKind::file && init_file.empty()) throw ConfigError("solver.init=file needs solver.init_file", "solver.init_file");
    if (out.empty()) throw ConfigError("output.dir must not be empty", "output.dir");
    SolveConfig c;
    c.step = step;
    c.max_iters = max_iters;
    c.residual_tol = tol;
    c.restarts = restarts;
    c.patch_radius = patch;
    c.validate();
  }

  /// Canonical text, one "key = value" line per key, doubles in %.17g.
  std::string echo() const;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + v + "' is not a finite number", key);
  }
}

inline long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: '" + v + "' is not an integer", key);
  }
}

template <class T, class F>
std::vector<T> parse_list(const std::string& v, F&& item) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(item(trim(tok)));
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F&& item) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += item(v[i]);
  }
  return s;
}

struct KeyHandler {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

inline std::string fmt(double v) { return format_double(v); }

inline const std::vector<std::pair<std::string, KeyHandler>>& key_table() {
  using C = RunConfig;
  using S = const std::string&;
  static const std::vector<std::pair<std::string, KeyHandler>> table = {
      {"lattice.d", {[](C& c, S v) { c.d = static_cast<int>(parse_int("lattice.d", v)); },
                     [](const C& c) { return std::to_string(c.d); }}},
      {"lattice.R", {[](C& c, S v) { c.R = static_cast<int>(parse_int("lattice.R", v)); },
                     [](const C& c) { return std::to_string(c.R); }}},
      {"kernel.s", {[](C& c, S v) { c.s = parse_double("kernel.s", v); }, [](const C& c) { return fmt(c.s); }}},
      {"kernel.cutoff", {[](C& c, S v) { c.cutoff = parse_int("kernel.cutoff", v); },
                         [](const C& c) { return std::to_string(c.cutoff); }}},
      {"kernel.tail_radius", {[](C& c, S v) { c.tail_radius = parse_int("kernel.tail_radius", v); },
                              [](const C& c) { return std::to_string(c.tail_radius); }}},
      {"kernel.eps", {[](C& c, S v) { c.mass_eps = parse_double("kernel.eps", v); },
                      [](const C& c) { return fmt(c.mass_eps); }}},
      {"kernel.c_low", {[](C& c, S v) { c.c_low = parse_double("kernel.c_low", v); },
                        [](const C& c) { return fmt(c.c_low); }}},
      {"kernel.c_high", {[](C& c, S v) { c.c_high = parse_double("kernel.c_high", v); },
                         [](const C& c) { return fmt(c.c_high); }}},
      {"potential.kind", {[](C& c, S v) {
                            if (v == "constant") c.potential = PotentialKind::constant;
                            else if (v == "periodic") c.potential = PotentialKind::periodic;
                            else if (v == "coercive") c.potential = PotentialKind::coercive;
                            else throw ConfigError("config: unknown potential kind '" + v + "'", "potential.kind");
                          },
                          [](const C& c) { return std::string(to_string(c.potential)); }}},
      {"potential.h0", {[](C& c, S v) { c.h0 = parse_double("potential.h0", v); },
                        [](const C& c) { return fmt(c.h0); }}},
      {"potential.value", {[](C& c, S v) { c.h_value = parse_double("potential.value", v); },
                           [](const C& c) { return fmt(c.h_value); }}},
      {"potential.period", {[](C& c, S v) {
                              c.period = parse_list<int>(v, [](S t) { return static_cast<int>(parse_int("potential.period", t)); });
                            },
                            [](const C& c) { return join(c.period, [](int x) { return std::to_string(x); }); }}},
      {"potential.cells", {[](C& c, S v) {
                             c.cells = parse_list<double>(v, [](S t) { return parse_double("potential.cells", t); });
                           },
                           [](const C& c) { return join(c.cells, [](double x) { return fmt(x); }); }}},
      {"potential.x0", {[](C& c, S v) {
                          c.x0 = parse_list<Coord>(v, [](S t) { return static_cast<Coord>(parse_int("potential.x0", t)); });
                        },
                        [](const C& c) { return join(c.x0, [](Coord x) { return std::to_string(x); }); }}},
      {"potential.rate", {[](C& c, S v) { c.rate = parse_double("potential.rate", v); },
                          [](const C& c) { return fmt(c.rate); }}},
      {"split.delta", {[](C& c, S v) { c.delta = parse_double("split.delta", v); },
                       [](const C& c) { return fmt(c.delta); }}},
      {"split.p", {[](C& c, S v) { c.p = parse_double("split.p", v); }, [](const C& c) { return fmt(c.p); }}},
      {"solver.mode", {[](C& c, S v) {
                         if (v == "ground") c.mode = SolveMode::ground;
                         else if (v == "sign_changing") c.mode = SolveMode::sign_changing;
                         else throw ConfigError("config: unknown solver mode '" + v + "'", "solver.mode");
                       },
                       [](const C& c) { return std::string(to_string(c.mode)); }}},
      {"solver.step", {[](C& c, S v) { c.step = parse_double("solver.step", v); },
                       [](const C& c) { return fmt(c.step); }}},
      {"solver.max_iters", {[](C& c, S v) { c.max_iters = static_cast<int>(parse_int("solver.max_iters", v)); },
                            [](const C& c) { return std::to_string(c.max_iters); }}},
      {"solver.tol", {[](C& c, S v) { c.tol = parse_double("solver.tol", v); }, [](const C& c) { return fmt(c.tol); }}},
      {"solver.restarts", {[](C& c, S v) { c.restarts = static_cast<int>(parse_int("solver.restarts", v)); },
                           [](const C& c) { return std::to_string(c.restarts); }}},
      {"solver.seed", {[](C& c, S v) {
                         const long long x = parse_int("solver.seed", v);
                         if (x < 0) throw ConfigError("config: solver.seed must be >= 0", "solver.seed");
                         c.seed = static_cast<std::uint64_t>(x);
                       },
                       [](const C& c) { return std::to_string(c.seed); }}},
      {"solver.init", {[](C& c, S v) {
                         if (v == "default") c.init.reset();
                         else if (v == "random") c.init = InitKind::random;
                         else if (v == "single_site") c.init = InitKind::single_site;
                         else if (v == "dipole") c.init = InitKind::dipole;
                         else if (v == "file") c.init = InitKind::file;
                         else throw ConfigError("config: unknown init '" + v + "'", "solver.init");
                       },
                       [](const C& c) { return c.init ? std::string(to_string(*c.init)) : std::string("default"); }}},
      {"solver.init_file", {[](C& c, S v) { c.init_file = v; }, [](const C& c) { return c.init_file; }}},
      {"solver.patch", {[](C& c, S v) { c.patch = static_cast<int>(parse_int("solver.patch", v)); },
                        [](const C& c) { return std::to_string(c.patch); }}},
      {"solver.noise", {[](C& c, S v) { c.noise = parse_double("solver.noise", v); },
                        [](const C& c) { return fmt(c.noise); }}},
      {"solver.max_halvings", {[](C& c, S v) { c.max_halvings = static_cast<int>(parse_int("solver.max_halvings", v)); },
                               [](const C& c) { return std::to_string(c.max_halvings); }}},
      {"projection.tol", {[](C& c, S v) { c.projection_tol = parse_double("projection.tol", v); },
                          [](const C& c) { return fmt(c.projection_tol); }}},
      {"projection.max_bracket", {[](C& c, S v) { c.max_bracket = static_cast<int>(parse_int("projection.max_bracket", v)); },
                                  [](const C& c) { return std::to_string(c.max_bracket); }}},
      {"output.dir", {[](C& c, S v) { c.out = v; }, [](const C& c) { return c.out; }}},
  };
  return table;
}

}  // namespace detail

inline std::string RunConfig::echo() const {
  std::string s;
  for (const auto& [key, h] : detail::key_table()) s += key + " = " + h.get(*this) + "\n";
  return s;
}

/// Key/value pairs of the canonical echo, in key order.
inline std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, h] : detail::key_table()) out.emplace_back(key, h.get(c));
  return out;
}

/// Parses config text on top of the defaults and validates the result.
inline RunConfig parse_config(std::istream& is) {
  RunConfig c;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    const auto& table = detail::key_table();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& kv) { return kv.first == key; });
    if (it == table.end()) throw ConfigError("config: unknown key '" + key + "'", key);
    if (!seen.insert(key).second) throw ConfigError("config: key '" + key + "' given twice", key);
    it->second.set(c, value);
  }
  c.validate();
  return c;
}

inline RunConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in);
}

}  // namespace fraclog
