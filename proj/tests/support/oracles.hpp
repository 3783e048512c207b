#pragma once

// Reference computations that avoid the library's transforms and multipliers.
// They are slow and only meant for small grids.

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "flans/field.hpp"
#include "flans/grid.hpp"

namespace oracle {

using Vec3 = std::array<double, 3>;
using VectorFn = std::function<Vec3(double x, double y, double z)>;
// One real array per component, laid out like the grid (last axis fastest).
using Samples = std::vector<std::vector<double>>;

// Physical coordinate of grid point p along each axis.
Vec3 point(const flans::GridSpec& grid, std::size_t p);

// Evaluates fn on the grid.
Samples sample(const flans::GridSpec& grid, const VectorFn& fn);

// Fourier coefficients by the defining sum (1/N^d) sum_x f(x) e^{-ik.x}.
std::vector<std::complex<double>> naive_dft(const flans::GridSpec& grid, const std::vector<double>& values);

// sum_k c(k) e^{ik.x} evaluated directly at x, real part, one entry per component.
Vec3 evaluate(const flans::SpectralField& field, const Vec3& x);

// Field whose coefficients come from naive_dft of fn's samples.
flans::SpectralField field_from(const flans::GridSpec& grid, const VectorFn& fn);

// Samples of a spectral field obtained through evaluate() at every grid point.
Samples physical(const flans::SpectralField& field);

// Centered second-order difference of a periodic array along an axis.
std::vector<double> fd_derivative(const flans::GridSpec& grid, const std::vector<double>& f, int axis);

// G[i][j] = d_j u_i by centered differences.
std::vector<Samples> fd_gradient(const flans::GridSpec& grid, const Samples& u);

// (u1 . grad) u2 by centered differences.
Samples fd_advect(const flans::GridSpec& grid, const Samples& u1, const Samples& u2);

// div_j of T = G1 G2^T + G1 G2 - G1^T G2 with G = grad u, all by centered differences.
Samples fd_div_stress(const flans::GridSpec& grid, const Samples& u1, const Samples& u2);

// max over points and components of |a - b|, and of |b|.
double max_abs_diff(const Samples& a, const Samples& b);
double max_abs(const Samples& a);

// sum over modes of |c|^2 times (2 pi)^d, i.e. the physical L2 norm squared, computed mode by mode.
double l2_squared(const flans::SpectralField& f);

// (||A^r f||^2 + ||f||^2 [r > 0])^{1/2} computed with std::pow per mode.
double dar_norm(const flans::SpectralField& f, double r);

// max_k |a(k) - b(k)| over all components.
double coeff_max_diff(const flans::SpectralField& a, const flans::SpectralField& b);

// phi_1 and phi_2 from their power series summed in long double (40 terms).
std::pair<long double, long double> phi_series(long double z);

}  // namespace oracle
