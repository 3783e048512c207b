#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "flans/diagnostics.hpp"
#include "flans/error.hpp"
#include "flans/integrator.hpp"
#include "flans/io.hpp"
#include "flans/mild_oracle.hpp"
#include "flans/operators.hpp"
#include "flans/spectral.hpp"

namespace flans::cli {

namespace fs = std::filesystem;

namespace {

// A loaded config together with the output directory and manifest of one command.
struct Session {
  LoadedConfig loaded;
  fs::path out;
  RunManifest manifest;

  Session(const CommonOptions& opts, const std::string& command) {
    loaded = parse_config(opts.config);
    if (opts.seed) {
      loaded.sim.initial.seed = *opts.seed;
      loaded.echo["seed"] = std::to_string(*opts.seed);
    }
    out = !opts.out_dir.empty() ? opts.out_dir : !loaded.sim.out_dir.empty() ? loaded.sim.out_dir : "flans-out";
    loaded.sim.out_dir.clear();
    loaded.echo["out_dir"] = out.string();
    manifest.config = loaded.echo;
    manifest.version = version_string();
    manifest.command = command;
    manifest.started_utc = utc_timestamp();
  }

  SimConfig& sim() { return loaded.sim; }

  void emit(const CsvTable& table, const std::string& name) {
    emit_csv(table, out / name);
    add_output(manifest, out, out / name);
  }

  void finish() {
    manifest.finished_utc = utc_timestamp();
    write_manifest(manifest, out / "manifest.json");
    std::cout << "manifest: " << (out / "manifest.json").string() << '\n';
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int verdict(bool ok) {
  std::cout << (ok ? "check passed" : "check FAILED") << '\n';
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int simulate(const CommonOptions& opts) {
  Session session(opts, "simulate");
  require_global_regime(session.sim());
  auto cfg = session.sim();
  cfg.out_dir = session.out;
  const auto traj = run(cfg);
  for (const auto& file : traj.snapshot_files) add_output(session.manifest, session.out, file);
  session.emit(diag_table(traj.diag), "diagnostics.csv");

  CsvTable spec{{"kappa", "energy"}, {}};
  const auto shells = spectrum(traj.snapshots.back());
  for (std::size_t k = 0; k < shells.size(); ++k) spec.rows.push_back({static_cast<double>(k), shells[k]});
  session.emit(spec, "spectrum_final.csv");

  const auto& last = traj.diag.back();
  std::cout << "t = " << fmt(last.t) << "  E0 = " << fmt(last.E0) << "  E1 = " << fmt(last.E1)
            << "  ||u||_D(A) = " << fmt(last.nDA) << "  snapshots = " << traj.snapshot_files.size() << '\n';
  session.finish();
  return kOk;
}

int verify_energy(const CommonOptions& opts) {
  Session session(opts, "verify-energy");
  require_global_regime(session.sim());
  const double tol = opts.tol.value_or(1e-6);
  const auto traj = run(session.sim());
  const auto res = energy_balance_residual(traj, session.sim().params);

  CsvTable table{{"t", "E1", "D", "residual"}, {}};
  for (std::size_t i = 0; i < res.size(); ++i) {
    table.rows.push_back({traj.diag[i].t, traj.diag[i].E1, traj.diag[i].D, res[i]});
  }
  session.emit(table, "energy_balance.csv");
  const double worst = *std::max_element(res.begin(), res.end());
  std::cout << "max balance residual " << fmt(worst) << " (tol " << fmt(tol) << ")\n";
  session.finish();
  return verdict(worst <= tol);
}

int smoothing(const CommonOptions& opts, double r) {
  Session session(opts, "smoothing");
  require_global_regime(session.sim());
  const double margin = opts.tol.value_or(0.15);
  auto& cfg = session.sim();
  cfg.snapshot_every = 1;
  const double t_min = 2.0 * cfg.scheme.dt;
  const double t_max = std::min(0.1, cfg.t_end);
  const auto traj = run(cfg);
  const double s = cfg.params.s;
  const auto fit = smoothing_rate(traj, r, s, t_min, t_max);
  const auto flat = smoothing_rate(traj, 0.0, s, t_min, t_max);

  CsvTable table{{"r", "expected", "slope", "fit_residual", "samples", "t_min", "t_max"}, {}};
  for (const auto& f : {fit, flat}) {
    table.rows.push_back({f.r, f.expected, f.slope, f.residual, static_cast<double>(f.samples), f.t_min, f.t_max});
  }
  session.emit(table, "rate_fit.csv");
  std::cout << "r = " << fmt(r) << ": slope " << fmt(fit.slope) << ", bound " << fmt(fit.expected - margin) << '\n'
            << "r = 0: slope " << fmt(flat.slope) << '\n';
  session.finish();
  return verdict(fit.slope >= fit.expected - margin && std::abs(flat.slope) <= 0.05);
}

int oracle_compare(const CommonOptions& opts, double T) {
  Session session(opts, "oracle-compare");
  require_global_regime(session.sim());
  const double tol = opts.tol.value_or(1e-5);
  auto& cfg = session.sim();
  const int intervals = 64;
  const int sub = std::max(1, static_cast<int>(std::ceil(T / intervals / cfg.scheme.dt)));
  cfg.t_end = T;
  cfg.scheme.dt = T / (intervals * sub);
  cfg.snapshot_every = sub;

  const auto u0 = make_initial(cfg.initial, cfg.grid);
  const auto picard = picard_solve(u0, cfg.params, make_holder_class(1.0, 0.25, T), intervals + 1, 40, 1e-13);
  const auto traj = run_from(cfg, u0);

  const auto& reference = picard.trajectory.snapshots;
  const std::size_t n = std::min(reference.size(), traj.snapshots.size());
  double diff = 0.0, size = 0.0;
  CsvTable table{{"t", "stepper_nDA", "picard_nDA", "difference_nDA"}, {}};
  for (std::size_t i = 0; i < n; ++i) {
    const double d = norm_dar(traj.snapshots[i] - reference[i], 1.0);
    const double a = norm_dar(traj.snapshots[i], 1.0);
    const double b = norm_dar(reference[i], 1.0);
    diff = std::max(diff, d);
    size = std::max(size, b);
    table.rows.push_back({traj.times[i], a, b, d});
  }
  session.emit(table, "oracle_compare.csv");

  CsvTable inc{{"iterate", "increment_linf", "increment_l2", "ratio"}, {}};
  const auto ratios = picard.state.ratios();
  for (std::size_t j = 0; j < picard.state.increments_linf.size(); ++j) {
    const double ratio = j >= 1 && j - 1 < ratios.size() ? ratios[j - 1] : 0.0;
    inc.rows.push_back({static_cast<double>(j + 1), picard.state.increments_linf[j], picard.state.increments_l2[j], ratio});
  }
  session.emit(inc, "picard_increments.csv");

  const double rel = size > 0.0 ? diff / size : diff;
  std::cout << "picard iterates " << picard.state.increments_linf.size() << (picard.state.converged ? " (converged)" : "")
            << "\nrelative L^inf D(A) difference " << fmt(rel) << " (tol " << fmt(tol) << ")\n";
  session.finish();
  return verdict(picard.state.converged && rel <= tol);
}

int holder(const CommonOptions& opts, double beta) {
  Session session(opts, "holder");
  require_global_regime(session.sim());
  const double tol = opts.tol.value_or(1.0);
  auto& cfg = session.sim();
  if (cfg.grid.dim() != 2 || std::abs(cfg.params.s - 0.5) > 1e-12) {
    throw Error(ErrorCode::WrongRegime, "holder needs dim = 2 and s = 0.5");
  }
  cfg.snapshot_every = 1;
  const auto traj = run(cfg);
  const auto report = holder_quotients(traj, beta, cfg.params, tol);
  const double T = std::min(1.0, cfg.t_end);
  const auto semi = semigroup_class_check(traj.snapshots.front(), cfg.params, make_holder_class(1.0, beta, T));

  CsvTable rows{{"t", "h", "amplitude", "smoothing", "holder", "holder_smoothing"}, {}};
  for (const auto& row : report.rows) {
    rows.rows.push_back({row.t, row.h, row.amplitude, row.smoothing, row.holder, row.holder_smoothing});
  }
  session.emit(rows, "holder_rows.csv");
  CsvTable summary{{"semigroup_only", "C", "min_R", "q_amplitude", "q_smoothing", "q_holder", "q_holder_smoothing"}, {}};
  for (const auto* rep : {&report, &semi}) {
    summary.rows.push_back({rep == &semi ? 1.0 : 0.0, rep->C, rep->min_R, rep->quotients[0], rep->quotients[1],
                            rep->quotients[2], rep->quotients[3]});
  }
  session.emit(summary, "holder_summary.csv");
  std::cout << "nonlinear run: C = " << fmt(report.C) << ", quotients";
  for (double q : report.quotients) std::cout << ' ' << fmt(q);
  std::cout << "\nsemigroup only: C = " << fmt(semi.C) << '\n';
  session.finish();
  return verdict(report.member && semi.finite);
}

int ops_test(const CommonOptions& opts) {
  SimConfig sim;
  sim.grid = make_grid(2, 32);
  sim.params = make_params(2, 0.5, 0.1, 0.5);
  std::uint64_t seed = 0;
  if (!opts.config.empty()) {
    const auto loaded = parse_config(opts.config);
    sim = loaded.sim;
    seed = sim.initial.seed;
  }
  if (opts.seed) seed = *opts.seed;
  const fs::path out = opts.out_dir.empty() ? fs::path("flans-out") : opts.out_dir;
  const auto& g = sim.grid;
  const auto& p = sim.params;

  struct Check {
    std::string name;
    double value;
    double threshold;
  };
  std::vector<Check> checks;

  double cancel = 0.0, div = 0.0, herm = 0.0, vform = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    auto u = random_solenoidal(g, RandomSpectrum{1.0, seed + i, std::max(1, g.n() / 4)});
    const auto f = rhs_f(u, u, p).f;
    cancel = std::max(cancel, cancellation_residual(u, f, p));
    div = std::max(div, divergence_defect(f) / (norm_dar(f, 0.5) + 1e-300));
    herm = std::max(herm, hermitian_defect(f));
    const auto rv = rhs_v(u, v_from_u(u, p.alpha), p);
    const auto expected = v_from_u(f - p.nu * frac_stokes_apply(u, p.s), p.alpha);
    vform = std::max(vform, norm_dar(rv - expected, 0.0) / (norm_dar(rv, 0.0) + 1e-300));
  }
  checks.push_back({"cancellation", cancel, 1e-10});
  checks.push_back({"divergence_of_f", div, 1e-12});
  checks.push_back({"hermitian_defect_of_f", herm, 1e-12});
  checks.push_back({"v_form_consistency", vform, 1e-8});

  InitialData shear_init;
  shear_init.kind = InitKind::Shear;
  const auto shear = make_initial(shear_init, g);
  checks.push_back({"shear_is_steady_for_f", norm_dar(rhs_f(shear, shear, p).f, 1.0), 1e-12});

  const auto base = random_solenoidal(g, RandomSpectrum{1.0, seed + 100, std::max(1, g.n() / 4)});
  const auto pw = leray_project(advect(base, base));
  checks.push_back({"leray_idempotent", norm_dar(leray_project(pw) - pw, 0.0) / (norm_dar(pw, 0.0) + 1e-300), 1e-14});

  CsvTable table{{"check", "value", "threshold", "pass"}, {}};
  bool ok = true;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    const bool pass = c.value <= c.threshold;
    ok = ok && pass;
    std::printf("%-24s %-12s <= %-8s %s\n", c.name.c_str(), fmt(c.value).c_str(), fmt(c.threshold).c_str(),
                pass ? "ok" : "FAIL");
    table.rows.push_back({static_cast<double>(i), c.value, c.threshold, pass ? 1.0 : 0.0});
  }
  emit_csv(table, out / "ops_test.csv");
  return verdict(ok);
}

}  // namespace flans::cli
