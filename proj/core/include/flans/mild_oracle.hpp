#pragma once

#include <span>
#include <vector>

#include "flans/field.hpp"
#include "flans/grid.hpp"
#include "flans/integrator.hpp"

namespace flans {

/// Weighted Hoelder class B^beta_{R,T}: trajectories with
///   ||w(t)||_{D(A)} <= R,
///   ||A^{s/2} w(t)||_{D(A)} <= R t^{-1/2},
///   ||w(t+h) - w(t)||_{D(A)} <= R h^beta t^{-beta},
///   ||A^{s/2}(w(t+h) - w(t))||_{D(A)} <= R h^beta t^{-beta-1/2}.
struct HolderClass {
  double R = 1.0;
  double beta = 0.25;  // in (0, 1/2)
  double T = 1.0;      // in (0, 1]
  double tol = 1.0;    // relative slack on membership, >= 1
};

/// Validates beta in (0, 1/2), T in (0, 1], R >= 0 and tol >= 1.
HolderClass make_holder_class(double R, double beta, double T, double tol = 1.0);

struct HolderRow {
  double t = 0.0;
  double h = 0.0;  // 0 for the pointwise quotients
  double amplitude = 0.0;
  double smoothing = 0.0;
  double holder = 0.0;
  double holder_smoothing = 0.0;
};

struct HolderReport {
  // Suprema over the sampled lattice of the four unnormalised quantities.
  double sup_amplitude = 0.0;         // ||w(t)||_{D(A)}
  double sup_smoothing = 0.0;         // t^{1/2} ||A^{s/2} w(t)||_{D(A)}
  double sup_holder = 0.0;            // h^-beta t^beta ||w(t+h) - w(t)||_{D(A)}
  double sup_holder_smoothing = 0.0;  // h^-beta t^{beta+1/2} ||A^{s/2}(w(t+h) - w(t))||_{D(A)}
  double min_R = 0.0;                 // smallest R for which all four bounds hold
  double R = 0.0;                     // radius the quotients are normalised by
  double C = 0.0;                     // min_R / ||w(0)||_{D(A)} (0 for zero data)
  double quotients[4] = {0.0, 0.0, 0.0, 0.0};  // sups divided by R
  bool finite = true;
  bool member = true;                 // all quotients <= tol
  std::vector<HolderRow> rows;
};

/// Composite-trapezoid quadrature of int_0^{t_eval} e^{-(t_eval - tau) nu A^s} f(tau) dtau
/// with the semigroup applied exactly at each node. t_eval must be a mesh node.
/// Throws EmptyMesh, BadEvalTime, ShapeMismatch.
SpectralField duhamel_integral(std::span<const SpectralField> f_samples, std::span<const double> t_mesh,
                               double t_eval, const Params& params);

/// The same quadrature evaluated at every mesh node through the recurrence
/// I_{n+1} = E(dt_n) I_n + dt_n/2 (E(dt_n) f_n + f_{n+1}).
std::vector<SpectralField> duhamel_cumulative(std::span<const SpectralField> f_samples,
                                              std::span<const double> t_mesh, const Params& params);

struct PicardState {
  std::vector<double> t_mesh;
  std::vector<std::vector<SpectralField>> iterates;  // u^(0), u^(1), ...
  std::vector<double> increments_linf;  // ||u^(j) - u^(j-1)||_{L^inf_T D(A)}, j >= 1
  std::vector<double> increments_l2;    // ||u^(j) - u^(j-1)||_{L^2_T D(A^{1+s/2})}
  bool converged = false;

  /// increments_linf[j] / increments_linf[j-1].
  std::vector<double> ratios() const;
};

struct PicardResult {
  Trajectory trajectory;
  PicardState state;
};

/// u^(0)(t) = e^{-t nu A^s} u0, u^(j+1)(t) = u^(0)(t) + int_0^t e^{-(t-tau) nu A^s} f(u^(j), u^(j)) dtau
/// on a uniform mesh of mesh_size nodes over [0, holder.T]. Stops once the
/// L^inf_T D(A) increment drops below tol times the iterate's size. Throws
/// NoContraction if the increment fails to decrease three times in a row.
PicardResult picard_solve(const SpectralField& u0, const Params& params, const HolderClass& holder, int mesh_size,
                          int max_iter, double tol);

/// Quotients of w(t) = e^{-t nu A^s} u0 on a log lattice of t_points times in
/// [1e-3 T, T] and lag set {t/16, ..., t/2, t, 2t, ...} plus h = T - t, all
/// evaluated exactly. R is tol * C * ||u0||_{D(A)} with C the minimal feasible constant.
HolderReport semigroup_class_check(const SpectralField& u0, const Params& params, const HolderClass& holder,
                                   int t_points = 16);

/// Quotients over a sampled trajectory. Lattice times are snapped to the
/// trajectory's sample times; quotients are normalised by holder.R.
HolderReport holder_membership(const Trajectory& traj, const HolderClass& holder, double s, int t_points = 16);

}  // namespace flans
