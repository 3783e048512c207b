#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flans/diag_record.hpp"
#include "flans/field.hpp"
#include "flans/grid.hpp"

namespace flans {

enum class SchemeKind { ExpEuler, ETD2RK };

struct StepScheme {
  SchemeKind kind = SchemeKind::ETD2RK;
  double dt = 1e-3;
  double cfl_safety = 0.5;
};

enum class InitKind { TaylorGreen, Shear, RandomSpectrum, FromSnapshot };

/// Initial velocity u0.
///  - TaylorGreen: amplitude * (sin x cos y, -cos x sin y) in 2D,
///    amplitude * (sin x cos y cos z, -cos x sin y cos z, 0) in 3D.
///  - Shear: amplitude * (sin y, 0[, 0]).
///  - RandomSpectrum: random_solenoidal() rescaled so ||u0||_{D(A)} = amplitude.
///  - FromSnapshot: coefficients read from a snapshot file on the same grid.
struct InitialData {
  InitKind kind = InitKind::TaylorGreen;
  double amplitude = 1.0;
  double decay_exponent = 2.0;
  std::uint64_t seed = 0;
  int band = -1;
  std::filesystem::path path;
};

/// Which right-hand side the stepper integrates.
enum class RhsMode { Full, LinearOnly };

struct SimConfig {
  GridSpec grid;
  Params params;
  StepScheme scheme;
  double t_end = 1.0;
  std::optional<int> galerkin_n;
  int snapshot_every = 0;  // 0: initial and final snapshot only
  InitialData initial;
  RhsMode rhs = RhsMode::Full;
  std::filesystem::path out_dir;  // empty: no snapshot write-through
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> snapshots;
  std::vector<DiagRecord> diag;
  std::vector<std::filesystem::path> snapshot_files;
};

SpectralField make_initial(const InitialData& init, const GridSpec& grid);

/// P_N: zero every mode with max_i |k_i| > n_cut.
SpectralField galerkin_truncate(const SpectralField& field, int n_cut);

struct PhiValues {
  double phi1;
  double phi2;
};

/// phi1(z) = (e^z - 1)/z, phi2(z) = (e^z - 1 - z)/z^2 for z <= 0; a 6-term
/// Taylor series below |z| = 1e-4.
PhiValues phi_functions(double z);

using NonlinearTerm = std::function<SpectralField(const SpectralField&)>;

/// Exponential integrator for du/dt = -nu A^s u + N(u). The linear part is
/// applied through exact per-mode factors, so N == 0 makes every step exact.
class ExponentialStepper {
 public:
  ExponentialStepper(const GridSpec& grid, const Params& params, SchemeKind kind, double dt);

  double dt() const noexcept { return dt_; }

  /// One step from u given n0 = N(u).
  SpectralField advance(const SpectralField& u, const SpectralField& n0, const NonlinearTerm& nonlinear) const;

 private:
  SpectralField combine(const SpectralField& u, const SpectralField& n, const std::vector<double>& phi) const;

  GridSpec grid_;
  SchemeKind kind_;
  double dt_;
  std::vector<double> decay_;
  std::vector<double> phi1_;
  std::vector<double> phi2_;
};

/// The nonlinearity f(u, u) for RhsMode::Full or zero for LinearOnly.
NonlinearTerm u_form_nonlinearity(const Params& params, RhsMode mode = RhsMode::Full);

/// One step of du/dt = -nu A^s u + f(u, u). Throws DivergedError on
/// non-finite coefficients.
SpectralField step(const SpectralField& u, const Params& params, const StepScheme& scheme, double dt,
                   RhsMode mode = RhsMode::Full);

/// dt = cfl_safety * dx / max_x |u(x)|, capped at 1.
double suggest_dt(const SpectralField& u, const GridSpec& grid, const Params& params, double cfl_safety);

/// Marches to t_end. Records diagnostics every step and snapshots every
/// snapshot_every steps (plus the initial and final states). Throws
/// DivergedError when a coefficient becomes non-finite or ||u||_{D(A)}
/// exceeds 1e6 times its initial value, and Error{InvariantViolation} if
/// the state loses divergence-freeness, zero mean, or hermitian symmetry.
Trajectory run(const SimConfig& config);

/// Same as run() but starting from the given state instead of config.initial.
Trajectory run_from(const SimConfig& config, const SpectralField& u0);

/// Evolves the v-form v = (1 + alpha^2 A) u with the same stepper and maps
/// each snapshot back to u. Diagnostics are recorded on the mapped u.
Trajectory run_v_form(const SimConfig& config, const SpectralField& u0);

struct UniquenessReport {
  std::vector<double> times;
  std::vector<double> growth;          // ||w(t)||_{D(A)} / ||w(0)||_{D(A)}, 0 when w(0) = 0
  std::vector<double> dissipation;     // int_0^t ||A^{1+s/2} u||^2 dtau
  double growth_max = 0.0;
  double growth_final = 0.0;
  double envelope_c = 0.0;             // min c >= 0 with growth <= exp(c * dissipation / nu)
  double max_abs_difference = 0.0;     // max_t ||w(t)||_{D(A)}
};

/// Runs u0 and u0 + w0 side by side with ||w0||_{D(A)} = perturbation_scale,
/// w0 a smooth random solenoidal field drawn from initial.seed + 1.
UniquenessReport run_pair_uniqueness(const SimConfig& config, double perturbation_scale);

}  // namespace flans
