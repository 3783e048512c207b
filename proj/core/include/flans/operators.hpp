#pragma once

#include <optional>

#include "flans/field.hpp"
#include "flans/grid.hpp"

namespace flans {

/// Value of f(u1, u2) = -P^alpha [u1 . grad u2 + U^alpha(u1, u2)].
struct RhsEval {
  SpectralField f;
  /// (advection part, U^alpha part) before projection, when requested.
  std::optional<std::pair<SpectralField, SpectralField>> parts;
};

/// (grad u)_{ij} = d_j u_i via i k_j multipliers. Derivatives of Nyquist
/// modes along their Nyquist axis are set to zero so the result stays real.
SpectralTensor gradient(const SpectralField& u);

/// Row-wise divergence (div T)_i = d_j T_ij.
SpectralField divergence_rows(const SpectralTensor& t);

/// Pseudo-spectral (u1 . grad) u2 with 2/3 dealiasing of inputs and output.
SpectralField advect(const SpectralField& u1, const SpectralField& u2);

/// U^alpha(u1, u2) = alpha^2 (1 - alpha^2 Delta)^-1 div T with
/// T = G1 G2^T + G1 G2 - G1^T G2, G = grad u. Products are formed pointwise
/// on dealiased inputs and dealiased after the forward transform.
SpectralField u_alpha(const SpectralField& u1, const SpectralField& u2, double alpha);

/// The alpha-Stokes projector. On the torus (1 - alpha^2 Delta) is a scalar
/// multiplier that commutes with the Leray projection, so this is exactly
/// leray_project; alpha is accepted for interface parity.
SpectralField stokes_project_alpha(const SpectralField& w, double alpha);

RhsEval rhs_f(const SpectralField& u1, const SpectralField& u2, const Params& params, bool keep_parts = false);

/// v = (1 + alpha^2 A) u and its inverse.
SpectralField v_from_u(const SpectralField& u, double alpha);
SpectralField u_from_v(const SpectralField& v, double alpha);

/// -P[u . grad v + (grad u)^T v], the nonlinear part of the v-equation.
SpectralField nonlinear_v(const SpectralField& u, const SpectralField& v);

/// Full right-hand side of the v-equation, -nu A^s v + nonlinear_v(u, v).
/// Throws InconsistentPair when v differs from v_from_u(u) by more than
/// pair_tol relative in L^2.
SpectralField rhs_v(const SpectralField& u, const SpectralField& v, const Params& params, double pair_tol = 1e-8);

}  // namespace flans
