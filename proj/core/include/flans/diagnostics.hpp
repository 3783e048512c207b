#pragma once

#include <vector>

#include "flans/diag_record.hpp"
#include "flans/field.hpp"
#include "flans/grid.hpp"
#include "flans/integrator.hpp"
#include "flans/mild_oracle.hpp"

namespace flans {

/// |<(1 + alpha^2 A) u, f>| / (||u||_{D(A)}^3 + tiny), the discrete form of
/// the vanishing nonlinear pairing in the H^1-alpha energy identity.
double cancellation_residual(const SpectralField& u, const SpectralField& f, const Params& params);

DiagRecord record(const SpectralField& u, const Params& params, double t);

/// record() with f(u, u) already evaluated.
DiagRecord record_with_rhs(const SpectralField& u, const SpectralField& f, const Params& params, double t);

/// |E1(t) + 2 nu int_0^t D - E1(0)| / E1(0) at every record, trapezoid in time.
/// Throws TooFewRecords for fewer than two records.
std::vector<double> energy_balance_residual(const std::vector<DiagRecord>& records, const Params& params);
std::vector<double> energy_balance_residual(const Trajectory& traj, const Params& params);

struct AprioriReport {
  double initial_nDA = 0.0;
  double sup_nDA = 0.0;
  double C = 0.0;                     // sup_t ||u||_{D(A)} / ||u0||_{D(A)} (1 for zero data)
  double dissipation_integral = 0.0;  // int ||A^{1+s/2} u||^2 dt
  bool bounded = true;                // every quantity finite
};

AprioriReport apriori_monitor(const Trajectory& traj, const Params& params);

struct RateFit {
  double t_min = 0.0;
  double t_max = 0.0;
  double slope = 0.0;     // fitted exponent of ||u(t)||_{D(A^{1+r})} against t
  double r = 0.0;
  double expected = 0.0;  // -r/s
  double residual = 0.0;  // RMS of the log-log fit
  int samples = 0;

  /// One-sided envelope check: slope >= expected - margin.
  bool within_envelope(double margin) const noexcept { return slope >= expected - margin; }
};

/// Least-squares slope of log ||u(t)||_{D(A^{1+r})} against log t over the
/// snapshots in [t_min, t_max], thinned to at most `samples` log-uniform
/// times. Throws EmptyWindow if fewer than two snapshots qualify.
RateFit smoothing_rate(const Trajectory& traj, double r, double s, double t_min, double t_max, int samples = 24);

/// Critical-case quotient report: requires (dim, s) = (2, 1/2) and delegates
/// to holder_membership with R the minimal feasible radius. Throws WrongRegime.
HolderReport holder_quotients(const Trajectory& traj, double beta, const Params& params, double tol = 1.0);

/// E(kappa) = 1/2 sum_{kappa <= |k| < kappa+1} |u_hat(k)|^2 (L^2-weighted);
/// sums to E0 / 2.
std::vector<double> spectrum(const SpectralField& u);

}  // namespace flans
