#pragma once

#include <cstdint>

#include "flans/field.hpp"
#include "flans/grid.hpp"

namespace flans {

// ---------------------------------------------------------------------------
// Transforms
//
// Norms everywhere are physical L^2([0, 2*pi]^dim) norms. With the
// Fourier-series convention of SpectralField this means
//   ||u||^2 = (2*pi)^dim * sum_k |u_hat(k)|^2.
// ---------------------------------------------------------------------------

/// Requires the hermitian flag (the physical field must be real).
PhysicalField to_physical(const SpectralField& field);

/// Forward transform; the result is symmetrised to exact hermitian form and
/// its solenoidal/zero_mean flags are detected from the coefficients.
SpectralField to_spectral(const PhysicalField& values, const GridSpec& grid);

/// (2*pi)^dim, the weight turning coefficient sums into physical integrals.
double torus_volume(int dim) noexcept;

// ---------------------------------------------------------------------------
// Diagonal multipliers
// ---------------------------------------------------------------------------

/// u_hat <- u_hat - k (k.u_hat)/|k|^2 for k != 0; the mean mode is untouched.
SpectralField leray_project(const SpectralField& field);

/// |k|^(2r), evaluated as exp(r log|k|^2) with the k = 0 mode mapped to 0.
double stokes_power_symbol(double k2, double r) noexcept;

/// A^r: u_hat(k) <- |k|^(2r) u_hat(k), mean mode -> 0.
/// Throws NegativePowerOnMean if r < 0 and the mean mode is nonzero.
SpectralField frac_stokes_apply(const SpectralField& field, double r);

/// (1 - alpha^2 Delta)^-1
SpectralField helmholtz_inverse(const SpectralField& field, double alpha);
/// (1 - alpha^2 Delta)
SpectralField helmholtz_apply(const SpectralField& field, double alpha);

/// exp(-t nu A^s). Throws NegativeTime for t < 0.
SpectralField semigroup_apply(const SpectralField& field, double t, const Params& params);

/// 2/3 rule: zero every mode with some |k_i| >= N/3.
SpectralField dealias(const SpectralField& field);
bool is_dealiased_mode(const GridSpec& grid, std::size_t idx) noexcept;

/// Zero-pad or truncate onto another grid of the same dimension; modes that
/// exist on both grids are copied, Nyquist modes are dropped.
SpectralField resample(const SpectralField& field, const GridSpec& target);

// ---------------------------------------------------------------------------
// Norms and inner products
// ---------------------------------------------------------------------------

/// Re <a, b>_{L^2}.
double inner(const SpectralField& a, const SpectralField& b);
double l2_norm(const SpectralField& field);
/// Quadrature L^2 norm of physical samples.
double physical_l2_norm(const PhysicalField& values);

/// ||f||_{D(A^r)} = (||A^r f||^2 + ||f||^2 [r > 0])^(1/2), r >= 0.
double norm_dar(const SpectralField& field, double r);

// ---------------------------------------------------------------------------
// Invariant checks
// ---------------------------------------------------------------------------

/// max_k |k . u_hat(k)| / |k| divided by the coefficient l2 norm (0 for the zero field).
double divergence_defect(const SpectralField& field);
/// max_k |u_hat(-k) - conj(u_hat(k))| divided by the coefficient l2 norm.
double hermitian_defect(const SpectralField& field);
/// |u_hat(0)| divided by the coefficient l2 norm.
double mean_defect(const SpectralField& field);

/// Detects all three flags from the coefficients at the given relative tolerance.
FieldFlags detect_flags(const SpectralField& field, double tol = 1e-12);

/// True when every claimed flag holds at tolerance.
bool check_flags(const SpectralField& field, double tol = 1e-12);

/// Averages each mode with the conjugate of its mirror; Nyquist-only modes become real.
void symmetrize(SpectralField& field);

// ---------------------------------------------------------------------------
// Random fields
// ---------------------------------------------------------------------------

struct RandomSpectrum {
  double decay_exponent = 2.0;  // |u_hat(k)| = |k|^-decay_exponent before normalisation
  std::uint64_t seed = 0;
  int band = -1;                // max |k_i| retained; < 0 means the dealiasing limit
};

/// Hermitian, solenoidal, zero-mean random field with power-law spectrum and
/// uniformly random phases. The draw depends only on (dim, seed, band,
/// decay_exponent), not on N, as long as the band fits on the grid.
SpectralField random_solenoidal(const GridSpec& grid, const RandomSpectrum& spec);

}  // namespace flans
