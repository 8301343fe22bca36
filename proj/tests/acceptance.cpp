// Acceptance criteria 1-9: one PASS/FAIL line each, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fraclog/app.hpp"

using namespace fraclog;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Outcome kernel_mass() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int d : {1, 2}) {
    for (double s : {0.25, 0.5, 0.75}) {
      KernelSpec k;
      k.d = d;
      k.s = s;
      const double oracle = (d == 1 ? 2.0 : 4.0) * std::riemann_zeta(1.0 + 2.0 * s);
      worst = std::max(worst, std::fabs(total_mass(k, 1e-7).value - oracle));
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-6 && t < 30.0, fmt("max |S - c zeta(1+2s)| = %.3g, %.2f s", worst, t)};
}

Outcome identities() {
  const auto t0 = Clock::now();
  const auto r = decomposition_checks(detail::default_problem(1, 8), 1, 100);
  double worst = 0.0;
  for (const auto& c : r.records()) {
    if (c.name.rfind("proposition", 0) == 0 || c.name.rfind("corollary", 0) == 0) worst = std::max(worst, c.measured);
  }
  const double t = seconds_since(t0);
  return {r.all_pass() && t < 60.0, fmt("max relative defect %.3g over 100 fields, %.2f s", worst, t)};
}

Outcome fibering() {
  const auto pb = detail::default_problem(1, 10);
  const auto r = fibering_checks(pb, 5, 50);
  const double oracle_err = r.find("fiber_closed_form_vs_oracle")->measured;
  const auto p = project_nehari(pb, point_mass(pb.box_ptr(), {0}));
  const double t_exact = std::exp(std::numbers::pi * std::numbers::pi / 6.0);
  const double j_exact = std::exp(std::numbers::pi * std::numbers::pi / 3.0) / 2.0;
  const bool ok = r.all_pass() && std::fabs(p.result.t - t_exact) <= 1e-8 && std::fabs(p.result.level - j_exact) <= 1e-6;
  return {ok, fmt("oracle error %.3g; t_u = %.12f (e^{pi^2/6} = %.12f), J = %.10f", oracle_err, p.result.t, t_exact,
                  p.result.level)};
}

Outcome dipole() {
  const auto pb = detail::default_problem(1, 10);
  Field u(pb.box_ptr());
  u[pb.box().index(std::vector<Coord>{1})] = 1.0;
  u[pb.box().index(std::vector<Coord>{-1})] = -1.0;
  const auto p = project_sign_changing(pb, u);
  const double a = std::exp((std::numbers::pi * std::numbers::pi / 3.0 + 0.25) / 2.0);
  const bool ok = std::fabs(p.result.alpha - a) <= 1e-6 && std::fabs(p.result.beta - a) <= 1e-6 &&
                  std::fabs(p.result.residual_f) <= 1e-10 && std::fabs(p.result.residual_g) <= 1e-10;
  return {ok, fmt("alpha = %.12f beta = %.12f closed form %.12f, |f|+|g| = %.3g", p.result.alpha, p.result.beta, a,
                  std::fabs(p.result.residual_f) + std::fabs(p.result.residual_g))};
}

Outcome strict_inequality() {
  const auto r = sign_projection_checks(detail::default_problem(1, 8), 3, 10);
  const auto s = scalar_inequality_check(10000);
  const double margin = r.find("strict_inequality_grid_margin")->measured;
  const double scalar = s.find("strict_inequality_scalar")->measured;
  return {margin > 0.0 && scalar > 0.0 && r.all_pass(),
          fmt("min grid margin %.6g over 10 members x 224 points, min scalar %.3g", margin, scalar)};
}

Outcome solver_stationarity() {
  struct Case {
    const char* name;
    const char* text;
  };
  const Case cases[] = {
      {"d1 ground", "lattice.d = 1\nlattice.R = 10\nsolver.seed = 7\n"},
      {"d1 sign", "lattice.d = 1\nlattice.R = 10\nsolver.mode = sign_changing\npotential.kind = coercive\nsolver.seed = 7\n"},
      {"d2 ground", "lattice.d = 2\nlattice.R = 5\nsolver.seed = 7\n"},
      {"d2 sign", "lattice.d = 2\nlattice.R = 5\nsolver.mode = sign_changing\npotential.kind = coercive\nsolver.seed = 7\n"},
  };
  bool ok = true;
  std::string detail;
  for (const auto& cs : cases) {
    const auto t0 = Clock::now();
    const auto cfg = parse_config(cs.text);
    const auto pb = cfg.make_problem();
    const auto r = solve(pb, cfg.solve_config());
    const double t = seconds_since(t0);
    const double h = energy(pb, r.field).h_norm_sq;
    const double manifold = std::max(std::fabs(r.pairing_plus), std::fabs(r.pairing_minus)) / h;
    const double level = std::fabs(r.level - r.half_l2_sq) / r.level;
    const bool pass = r.converged && r.residual_linf < 1e-8 && manifold <= 1e-10 && level <= 1e-8 && t < 300.0;
    ok = ok && pass;
    detail += std::string(detail.empty() ? "" : " ") + "[" + cs.name +
              fmt(" res=%.2g man=%.2g lvl=%.2g %.2fs]", r.residual_linf, manifold, level, t);
  }
  return {ok, detail};
}

Outcome gradient() {
  const auto pb = parse_config("lattice.d = 2\nlattice.R = 3\npotential.kind = coercive\npotential.rate = 0.5\n").make_problem();
  detail::UniformSource rng(77);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Field u = detail::random_nonvanishing(pb.box_ptr(), rng);
    Field phi(pb.box_ptr());
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i] != 0.0) phi[i] = rng.in(-1.0, 1.0);
    }
    const double eps = 1e-4;
    const double fd = (energy(pb, u + eps * phi).J - energy(pb, u - eps * phi).J) / (2.0 * eps);
    const Field g = grad_energy(pb, u);
    double scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) scale += std::fabs(g[i] * phi[i]);
    worst = std::max(worst, std::fabs(fd - dot(g, phi)) / scale);
  }
  return {worst <= 1e-6, fmt("max relative error %.3g at eps = 1e-4 over 20 fields", worst)};
}

Outcome appendix() {
  const auto t0 = Clock::now();
  const auto r = appendix_divergence(100000000);
  const double t = seconds_since(t0);
  const double gap = r.find("appendix_S2_gap_10000_100000000")->measured;
  const auto* c = r.find("appendix_S1_cauchy_1000");
  return {r.all_pass() && t < 120.0,
          fmt("S2(1e8) - S2(1e4) = %.6f, S1 gap at 1000 = %.4f <= %.4f, %.2f s", gap, c->measured, c->target, t)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome determinism() {
  const fs::path base = fs::temp_directory_path() / "fraclog_acceptance_det";
  fs::remove_all(base);
  auto cfg = parse_config("lattice.d = 1\nlattice.R = 10\nsolver.seed = 7\nsolver.restarts = 2\n");
  cfg.out = (base / "run").string();
  std::ostringstream sink;
  std::vector<std::string> first;
  bool same = app::cmd_solve(cfg, sink, sink) == 0;
  for (const char* f : {"field.csv", "summary.json"}) first.push_back(slurp(base / "run" / f));
  fs::remove_all(base / "run");
  same = app::cmd_solve(cfg, sink, sink) == 0 && same;
  std::size_t bytes = 0;
  std::size_t k = 0;
  for (const char* f : {"field.csv", "summary.json"}) {
    const auto b = slurp(base / "run" / f);
    same = same && !b.empty() && b == first[k++];
    bytes += b.size();
  }
  fs::remove_all(base);
  return {same, fmt("field.csv + summary.json identical across two runs (%.0f bytes)", static_cast<double>(bytes))};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"kernel mass closed forms", kernel_mass},
      {"identity suite", identities},
      {"fibering", fibering},
      {"sign-changing projection", dipole},
      {"strict inequality", strict_inequality},
      {"solver stationarity", solver_stationarity},
      {"gradient correctness", gradient},
      {"appendix reproduction", appendix},
      {"determinism", determinism},
  };
  int failed = 0;
  int k = 0;
  for (const auto& [name, fn] : criteria) {
    ++k;
    Outcome o{false, ""};
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", k, name, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
