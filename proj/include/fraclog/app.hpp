#pragma once

// Subcommands behind the fraclog executable. Each returns a process status:
// 0 ok, 1 verification failure, 2 config/usage, 3 non-convergence,
// 4 precondition violation.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "fraclog/config.hpp"
#include "fraclog/energy.hpp"
#include "fraclog/errors.hpp"
#include "fraclog/field.hpp"
#include "fraclog/nehari.hpp"
#include "fraclog/solver.hpp"
#include "fraclog/verify.hpp"

namespace fraclog::app {

enum Status : int { ok = 0, verify_failed = 1, usage = 2, not_converged = 3, precondition = 4 };

using Json = nlohmann::ordered_json;

/// Maps library exceptions to a status and prints the message.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error";
    if (!e.key().empty()) err << " [" << e.key() << "]";
    err << ": " << e.what() << '\n';
    return usage;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return usage;
  } catch (const DomainError& e) {
    err << "precondition violated: " << e.what() << '\n';
    return precondition;
  } catch (const ToleranceError& e) {
    err << "tolerance not reached: " << e.what() << '\n';
    return not_converged;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return not_converged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return verify_failed;
  }
}

/// Command-line overrides applied after the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

inline RunConfig resolve_config(const std::string& path, const Overrides& ov) {
  RunConfig c = path.empty() ? parse_config(std::string()) : load_config(path);
  if (ov.seed) c.seed = *ov.seed;
  if (ov.out) c.out = *ov.out;
  c.validate();
  return c;
}

inline Json projection_json(const ProjectionResult& r) {
  Json j;
  j["kind"] = to_string(r.kind);
  if (r.kind == ProjectionKind::nehari) {
    j["t"] = r.t;
  } else {
    j["alpha"] = r.alpha;
    j["beta"] = r.beta;
  }
  j["level"] = r.level;
  j["residual_f"] = r.residual_f;
  j["residual_g"] = r.residual_g;
  if (r.kind == ProjectionKind::sign_changing) {
    j["bracket_low"] = r.bracket_low;
    j["bracket_high"] = r.bracket_high;
    j["converged"] = r.converged;
    j["ill_conditioned"] = r.ill_conditioned;
  }
  return j;
}

inline Json energy_json(const EnergyReport& e) {
  Json j;
  j["J"] = e.J;
  j["J1"] = e.J1;
  j["J2"] = e.J2;
  j["seminorm_sq"] = e.seminorm_sq;
  j["h_norm_sq"] = e.h_norm_sq;
  j["l2_sq"] = e.l2_sq;
  j["log_term"] = e.log_term;
  j["K"] = e.K;
  return j;
}

inline Json config_json(const RunConfig& c) {
  Json j = Json::object();
  for (const auto& [k, v] : config_entries(c)) j[k] = v;
  return j;
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + p.string(), "output.dir");
  os << text;
  if (!os) throw ConfigError("write failed for " + p.string(), "output.dir");
}

inline std::string field_text(const Field& u) {
  std::ostringstream os;
  write_field_csv(os, u);
  return os.str();
}

// The theorems assume a periodic potential for ground states and a coercive
// one for sign-changing states; other choices still run.
inline void hypothesis_warnings(const RunConfig& c, std::ostream& err) {
  if (c.mode == SolveMode::ground && c.potential == PotentialKind::coercive) {
    err << "warning: ground-state theorem assumes a periodic potential (constant counts as periodic)\n";
  }
  if (c.mode == SolveMode::sign_changing && c.potential != PotentialKind::coercive) {
    err << "warning: sign-changing theorem assumes a coercive potential\n";
  }
}

/// Solves, then writes <out>/field.csv and <out>/summary.json.
inline int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
  hypothesis_warnings(c, err);
  const Problem pb = c.make_problem();
  const SolveConfig sc = c.solve_config();
  const SolveResult r = solve(pb, sc);

  const auto rep = energy(pb, r.field);
  Json s;
  s["mode"] = to_string(c.mode);
  s["converged"] = r.converged;
  s["level"] = r.level;
  s["half_l2_sq"] = r.half_l2_sq;
  s["residual_linf"] = r.residual_linf;
  s["residual_l2"] = r.residual_l2;
  s["pairing_plus"] = r.pairing_plus;
  s["pairing_minus"] = r.pairing_minus;
  s["iterations"] = r.iterations;
  s["restarts_used"] = r.restarts_used;
  s["collapses"] = r.collapses;
  s["seed_used"] = r.seed_used;
  s["sign_definite"] = r.sign_definite;
  s["energy"] = energy_json(rep);
  try {
    const auto proj = c.mode == SolveMode::ground ? project_nehari(pb, r.field)
                                                  : project_sign_changing(pb, r.field, c.projection());
    s["projection"] = projection_json(proj.result);
  } catch (const Error& e) {
    s["projection"] = Json{{"error", e.what()}};
  }
  Json k;
  k["total_mass"] = pb.kernel().total_mass();
  k["tail_error_bound"] = pb.kernel().table().tail_error_bound();
  k["exact_radius"] = pb.kernel().table().mass().radius;
  s["kernel"] = k;
  Json obs = Json::array();
  if (c.mode == SolveMode::ground && !r.sign_definite) {
    obs.push_back("ground state is not sign-definite");
  }
  s["observations"] = obs;
  s["history_length"] = r.history.size();
  s["config"] = config_json(c);

  const std::filesystem::path dir(c.out);
  std::filesystem::create_directories(dir);
  write_text(dir / "field.csv", field_text(r.field));
  write_text(dir / "summary.json", s.dump(2) + "\n");

  char buf[256];
  std::snprintf(buf, sizeof buf, "level=%.17g residual_linf=%.3e residual_l2=%.3e tail_error_bound=%.3e converged=%s\n",
                r.level, r.residual_linf, r.residual_l2, pb.kernel().table().tail_error_bound(),
                r.converged ? "true" : "false");
  out << buf;
  if (!r.converged) {
    err << "solver did not reach residual " << c.tol << " within " << c.max_iters << " iterations\n";
    return not_converged;
  }
  return ok;
}

/// Projects the field in `input` onto N (ground) or M (sign_changing) and
/// writes <out>/projected.csv and <out>/projection.json. The box comes from
/// the field header; kernel, potential and split come from the config.
inline int cmd_project(const RunConfig& c, const std::string& input, SolveMode mode, std::ostream& out) {
  std::ifstream in(input);
  if (!in) throw ConfigError("cannot open field file " + input);
  const Field u = read_field_csv(in);
  const Problem pb = c.make_problem(u.box_ptr());
  const Projection p = mode == SolveMode::ground ? project_nehari(pb, u) : project_sign_changing(pb, u, c.projection());
  Json j = projection_json(p.result);
  j["energy"] = energy_json(energy(pb, p.field));
  const std::filesystem::path dir(c.out);
  std::filesystem::create_directories(dir);
  write_text(dir / "projected.csv", field_text(p.field));
  write_text(dir / "projection.json", j.dump(2) + "\n");
  out << j.dump() << '\n';
  if (mode == SolveMode::sign_changing && !p.result.converged) return not_converged;
  return ok;
}

inline int cmd_verify(std::uint64_t seed, int trials, std::optional<std::int64_t> appendix_cap, std::ostream& out) {
  if (trials < 1) throw ConfigError("verify: --trials must be >= 1", "trials");
  VerifyReport r = run_identity_suite(seed, trials);
  if (appendix_cap) r.merge(appendix_divergence(*appendix_cap));
  r.write(out);
  out << (r.all_pass() ? "ALL PASS" : "FAILURES") << " (" << r.records().size() - r.failures() << "/"
      << r.records().size() << ")\n";
  return r.all_pass() ? ok : verify_failed;
}

inline int cmd_appendix(std::int64_t cap, std::ostream& out) {
  const VerifyReport r = appendix_divergence(cap);
  r.write(out);
  return r.all_pass() ? ok : verify_failed;
}

/// Prints the certified mass; with an output directory also writes the
/// table for the configured box to <out>/kernel.csv.
inline int cmd_kernel(const RunConfig& c, bool write_table, std::ostream& out) {
  const auto m = total_mass(c.kernel_spec(), c.mass_eps, c.mass_options());
  char buf[256];
  std::snprintf(buf, sizeof buf, "d=%d s=%.17g total_mass=%.17g error_bound=%.3e exact_radius=%lld\n", c.d, c.s,
                m.value, m.error_bound, static_cast<long long>(m.radius));
  out << buf;
  if (write_table) {
    const auto bk = c.make_kernel(enumerate_box(c.d, c.R));
    const std::filesystem::path dir(c.out);
    std::filesystem::create_directories(dir);
    std::ostringstream os;
    bk.table().write_csv(os);
    write_text(dir / "kernel.csv", os.str());
  }
  return ok;
}

}  // namespace fraclog::app
