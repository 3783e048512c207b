#include "flans/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "flans/diagnostics.hpp"
#include "flans/error.hpp"
#include "flans/io.hpp"
#include "flans/operators.hpp"
#include "flans/spectral.hpp"

namespace flans {

namespace {

constexpr double kInvariantTol = 1e-10;
constexpr double kBlowupFactor = 1e6;

bool all_finite(const SpectralField& u) {
  for (const auto& c : u.coeffs()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

void check_state(const SpectralField& u, long step_index, double t) {
  const double herm = hermitian_defect(u);
  const double div = divergence_defect(u);
  const double mean = mean_defect(u);
  if (herm > kInvariantTol || div > kInvariantTol || mean > kInvariantTol) {
    throw Error(ErrorCode::InvariantViolation,
                "step " + std::to_string(step_index) + " (t=" + std::to_string(t) + "): hermitian " +
                    std::to_string(herm) + ", divergence " + std::to_string(div) + ", mean " + std::to_string(mean));
  }
}

// Physical-space construction for the closed-form initial fields.
SpectralField from_physical(const GridSpec& grid, auto&& velocity) {
  PhysicalField phys(grid, grid.dim());
  const int n = grid.n();
  const double h = grid.spacing();
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    std::size_t rem = idx;
    for (int a = grid.dim() - 1; a >= 0; --a) {
      x[a] = h * static_cast<double>(rem % n);
      rem /= n;
    }
    const auto v = velocity(x);
    for (int c = 0; c < grid.dim(); ++c) phys.component(c)[idx] = v[c];
  }
  SpectralField out = to_spectral(phys, grid);
  // Closed-form fields are exact trigonometric polynomials; clear transform noise.
  double peak = 0.0;
  for (const auto& c : out.coeffs()) peak = std::max(peak, std::abs(c));
  for (auto& c : out.coeffs()) {
    if (std::abs(c) < 1e-14 * peak) c = 0.0;
  }
  out.flags() = {true, true, true};
  return out;
}

std::string snapshot_name(long step_index) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "snapshot_%06ld.flns", step_index);
  return buf;
}

long step_count(double t_end, double dt) {
  if (t_end <= 0.0) return 0;
  return static_cast<long>(std::ceil(t_end / dt - 1e-9));
}

// Shared time loop for the u- and v-form runs. `to_u` maps the evolved state
// back to velocity for diagnostics and snapshots.
Trajectory march(const SimConfig& config, SpectralField state, const NonlinearTerm& nonlinear,
                 const std::function<SpectralField(const SpectralField&)>& to_u, bool velocity_form) {
  const auto& params = config.params;
  const double dt = config.scheme.dt;
  if (!(dt > 0.0)) throw Error(ErrorCode::BadParams, "dt must be > 0");
  if (config.t_end < 0.0) throw Error(ErrorCode::NegativeTime, "t_end must be >= 0");

  if (config.galerkin_n) state = galerkin_truncate(state, *config.galerkin_n);

  Trajectory traj;
  const bool write_through = !config.out_dir.empty();
  if (write_through) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + config.out_dir.string() + ": " + ec.message());
  }

  auto take_snapshot = [&](const SpectralField& u, double t, long step_index) {
    traj.times.push_back(t);
    traj.snapshots.push_back(u);
    if (write_through) {
      const auto path = config.out_dir / snapshot_name(step_index);
      write_snapshot(u, SnapshotMeta{params.alpha, params.nu, params.s, t}, path);
      traj.snapshot_files.push_back(path);
    }
  };

  // f(u, u) is needed for the cancellation diagnostic; in the u-form with the
  // full right-hand side it is also the stepper's first stage.
  auto record_state = [&](const SpectralField& u, const SpectralField* n0, double t) {
    if (velocity_form && config.rhs == RhsMode::Full && n0 != nullptr) {
      traj.diag.push_back(record_with_rhs(u, *n0, params, t));
    } else {
      traj.diag.push_back(record(u, params, t));
    }
  };

  SpectralField u = to_u(state);
  const double initial_norm = norm_dar(u, 1.0);
  const long total = step_count(config.t_end, dt);
  const ExponentialStepper stepper(config.grid, params, config.scheme.kind, dt);

  take_snapshot(u, 0.0, 0);
  double t = 0.0;
  for (long i = 0; i < total; ++i) {
    const double t_next = (i + 1 == total) ? config.t_end : static_cast<double>(i + 1) * dt;
    const double h = t_next - t;
    const SpectralField n0 = nonlinear(state);
    record_state(u, &n0, t);

    SpectralField next;
    try {
      if (h == dt) {
        next = stepper.advance(state, n0, nonlinear);
      } else {
        const ExponentialStepper last(config.grid, params, config.scheme.kind, h);
        next = last.advance(state, n0, nonlinear);
      }
    } catch (const DivergedError&) {
      throw DivergedError(i + 1, t_next, "non-finite coefficients at step " + std::to_string(i + 1));
    }
    if (config.galerkin_n) next = galerkin_truncate(next, *config.galerkin_n);
    state = std::move(next);
    t = t_next;
    u = to_u(state);

    if (!all_finite(u)) throw DivergedError(i + 1, t, "non-finite coefficients at step " + std::to_string(i + 1));
    const double norm = norm_dar(u, 1.0);
    if (initial_norm > 0.0 && norm > kBlowupFactor * initial_norm) {
      throw DivergedError(i + 1, t, "||u||_{D(A)} grew beyond 1e6 x initial at step " + std::to_string(i + 1));
    }
    check_state(u, i + 1, t);

    const bool last_step = i + 1 == total;
    if (last_step || (config.snapshot_every > 0 && (i + 1) % config.snapshot_every == 0)) {
      take_snapshot(u, t, i + 1);
    }
  }
  record_state(u, nullptr, t);
  return traj;
}

}  // namespace

SpectralField make_initial(const InitialData& init, const GridSpec& grid) {
  const double a = init.amplitude;
  switch (init.kind) {
    case InitKind::TaylorGreen:
      if (grid.dim() == 2) {
        return from_physical(grid, [a](const std::array<double, 3>& x) {
          return std::array<double, 3>{a * std::sin(x[0]) * std::cos(x[1]), -a * std::cos(x[0]) * std::sin(x[1]), 0.0};
        });
      }
      return from_physical(grid, [a](const std::array<double, 3>& x) {
        const double cz = std::cos(x[2]);
        return std::array<double, 3>{a * std::sin(x[0]) * std::cos(x[1]) * cz,
                                     -a * std::cos(x[0]) * std::sin(x[1]) * cz, 0.0};
      });
    case InitKind::Shear:
      return from_physical(grid, [a](const std::array<double, 3>& x) {
        return std::array<double, 3>{a * std::sin(x[1]), 0.0, 0.0};
      });
    case InitKind::RandomSpectrum: {
      SpectralField u = random_solenoidal(grid, RandomSpectrum{init.decay_exponent, init.seed, init.band});
      const double norm = norm_dar(u, 1.0);
      if (norm > 0.0) u *= a / norm;
      return u;
    }
    case InitKind::FromSnapshot: {
      auto [field, meta] = read_snapshot(init.path);
      if (!(field.grid() == grid)) {
        throw Error(ErrorCode::GridMismatch, "snapshot " + init.path.string() + " has N=" +
                                                 std::to_string(field.grid().n()) + ", config expects N=" +
                                                 std::to_string(grid.n()));
      }
      field.flags() = detect_flags(field, 1e-10);
      if (!field.flags().solenoidal || !field.flags().zero_mean) {
        throw Error(ErrorCode::CorruptPayload, "snapshot initial data must be solenoidal and zero-mean");
      }
      return field;
    }
  }
  throw Error(ErrorCode::BadValue, "unknown initial data kind");
}

SpectralField galerkin_truncate(const SpectralField& field, int n_cut) {
  if (n_cut < 1) throw Error(ErrorCode::BadParams, "Galerkin cutoff must be >= 1");
  SpectralField out = field;
  const auto& grid = field.grid();
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const auto& k = grid.wavevector(idx);
    int kmax = 0;
    for (int a = 0; a < grid.dim(); ++a) kmax = std::max(kmax, std::abs(k[a]));
    if (kmax <= n_cut) continue;
    for (int c = 0; c < field.components(); ++c) out.at(c, idx) = 0.0;
  }
  return out;
}

PhiValues phi_functions(double z) {
  if (std::abs(z) < 1e-4) {
    // sum_{n<6} z^n/(n+1)! and z^n/(n+2)!, Horner form.
    const double phi1 = 1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0 * (1.0 + z / 5.0 * (1.0 + z / 6.0))));
    const double phi2 =
        0.5 * (1.0 + z / 3.0 * (1.0 + z / 4.0 * (1.0 + z / 5.0 * (1.0 + z / 6.0 * (1.0 + z / 7.0)))));
    return {phi1, phi2};
  }
  // Extended precision keeps the z^2 cancellation in phi2 below 1e-15 near the switch.
  const long double zl = z;
  const long double em1 = std::expm1(zl);
  return {static_cast<double>(em1 / zl), static_cast<double>((em1 - zl) / (zl * zl))};
}

ExponentialStepper::ExponentialStepper(const GridSpec& grid, const Params& params, SchemeKind kind, double dt)
    : grid_(grid), kind_(kind), dt_(dt), decay_(grid.size()), phi1_(grid.size()), phi2_(grid.size()) {
  if (dt < 0.0) throw Error(ErrorCode::NegativeTime, "dt must be >= 0");
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double z = -params.nu * dt * stokes_power_symbol(grid.k2(idx), params.s);
    const auto phi = phi_functions(z);
    decay_[idx] = std::exp(z);
    phi1_[idx] = phi.phi1;
    phi2_[idx] = phi.phi2;
  }
}

SpectralField ExponentialStepper::combine(const SpectralField& u, const SpectralField& n,
                                          const std::vector<double>& phi) const {
  SpectralField out = u;
  for (int c = 0; c < u.components(); ++c) {
    auto o = out.component(c);
    const auto nc = n.component(c);
    for (std::size_t idx = 0; idx < grid_.size(); ++idx) o[idx] = decay_[idx] * o[idx] + dt_ * phi[idx] * nc[idx];
  }
  return out;
}

SpectralField ExponentialStepper::advance(const SpectralField& u, const SpectralField& n0,
                                          const NonlinearTerm& nonlinear) const {
  SpectralField a = combine(u, n0, phi1_);
  if (kind_ == SchemeKind::ETD2RK && dt_ > 0.0) {
    const SpectralField n1 = nonlinear(a);
    for (int c = 0; c < u.components(); ++c) {
      auto ac = a.component(c);
      const auto n0c = n0.component(c);
      const auto n1c = n1.component(c);
      for (std::size_t idx = 0; idx < grid_.size(); ++idx) ac[idx] += dt_ * phi2_[idx] * (n1c[idx] - n0c[idx]);
    }
  }
  a.flags() = u.flags();
  if (!all_finite(a)) throw DivergedError(-1, dt_, "non-finite coefficients after step");
  return a;
}

NonlinearTerm u_form_nonlinearity(const Params& params, RhsMode mode) {
  if (mode == RhsMode::LinearOnly) {
    return [](const SpectralField& u) { return SpectralField(u.grid()); };
  }
  return [params](const SpectralField& u) { return rhs_f(u, u, params).f; };
}

SpectralField step(const SpectralField& u, const Params& params, const StepScheme& scheme, double dt, RhsMode mode) {
  if (dt == 0.0) return u;
  const auto nonlinear = u_form_nonlinearity(params, mode);
  const ExponentialStepper stepper(u.grid(), params, scheme.kind, dt);
  return stepper.advance(u, nonlinear(u), nonlinear);
}

double suggest_dt(const SpectralField& u, const GridSpec& grid, const Params& /*params*/, double cfl_safety) {
  constexpr double cap = 1.0;
  const PhysicalField phys = to_physical(u);
  double vmax = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    double mag2 = 0.0;
    for (int c = 0; c < grid.dim(); ++c) mag2 += phys.component(c)[p] * phys.component(c)[p];
    vmax = std::max(vmax, std::sqrt(mag2));
  }
  if (vmax == 0.0) return cap;
  return std::min(cap, cfl_safety * grid.spacing() / vmax);
}

Trajectory run(const SimConfig& config) { return run_from(config, make_initial(config.initial, config.grid)); }

Trajectory run_from(const SimConfig& config, const SpectralField& u0) {
  if (!(u0.grid() == config.grid)) throw Error(ErrorCode::GridMismatch, "initial state is not on the config grid");
  return march(config, u0, u_form_nonlinearity(config.params, config.rhs),
               [](const SpectralField& u) { return u; }, true);
}

Trajectory run_v_form(const SimConfig& config, const SpectralField& u0) {
  if (!(u0.grid() == config.grid)) throw Error(ErrorCode::GridMismatch, "initial state is not on the config grid");
  const double alpha = config.params.alpha;
  NonlinearTerm nonlinear;
  if (config.rhs == RhsMode::LinearOnly) {
    nonlinear = [](const SpectralField& v) { return SpectralField(v.grid()); };
  } else {
    nonlinear = [alpha](const SpectralField& v) { return nonlinear_v(u_from_v(v, alpha), v); };
  }
  return march(config, v_from_u(u0, alpha), nonlinear,
               [alpha](const SpectralField& v) { return u_from_v(v, alpha); }, false);
}

UniquenessReport run_pair_uniqueness(const SimConfig& config, double perturbation_scale) {
  if (perturbation_scale < 0.0) throw Error(ErrorCode::BadParams, "perturbation scale must be >= 0");
  const auto& grid = config.grid;
  const auto& params = config.params;

  SpectralField u = make_initial(config.initial, grid);
  SpectralField w0 = random_solenoidal(grid, RandomSpectrum{4.0, config.initial.seed + 1,
                                                            std::min(4, grid.dealias_limit())});
  const double w_norm = norm_dar(w0, 1.0);
  if (w_norm > 0.0) w0 *= perturbation_scale / w_norm;
  SpectralField v = u + w0;

  const double dt = config.scheme.dt;
  const long total = step_count(config.t_end, dt);
  const auto nonlinear = u_form_nonlinearity(params, config.rhs);
  const ExponentialStepper stepper(grid, params, config.scheme.kind, dt);

  UniquenessReport report;
  const double w_initial = norm_dar(v - u, 1.0);
  auto observe = [&](double t, double dissipation) {
    const double w = norm_dar(v - u, 1.0);
    report.times.push_back(t);
    report.growth.push_back(w_initial > 0.0 ? w / w_initial : 0.0);
    report.dissipation.push_back(dissipation);
    report.max_abs_difference = std::max(report.max_abs_difference, w);
  };

  auto dissipation_density = [&](const SpectralField& f) {
    const double n = l2_norm(frac_stokes_apply(f, 1.0 + params.s / 2.0));
    return n * n;
  };

  double t = 0.0;
  double integral = 0.0;
  double density = dissipation_density(u);
  observe(t, integral);
  for (long i = 0; i < total; ++i) {
    const double t_next = (i + 1 == total) ? config.t_end : static_cast<double>(i + 1) * dt;
    const double h = t_next - t;
    if (h == dt) {
      u = stepper.advance(u, nonlinear(u), nonlinear);
      v = stepper.advance(v, nonlinear(v), nonlinear);
    } else {
      const ExponentialStepper last(grid, params, config.scheme.kind, h);
      u = last.advance(u, nonlinear(u), nonlinear);
      v = last.advance(v, nonlinear(v), nonlinear);
    }
    if (!all_finite(u) || !all_finite(v)) throw DivergedError(i + 1, t_next, "pair run produced non-finite values");
    const double next_density = dissipation_density(u);
    integral += 0.5 * h * (density + next_density);
    density = next_density;
    t = t_next;
    observe(t, integral);
  }

  report.growth_max = *std::max_element(report.growth.begin(), report.growth.end());
  report.growth_final = report.growth.back();
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    if (report.dissipation[i] > 0.0 && report.growth[i] > 1.0) {
      report.envelope_c = std::max(report.envelope_c, params.nu * std::log(report.growth[i]) / report.dissipation[i]);
    }
  }
  return report;
}

}  // namespace flans
