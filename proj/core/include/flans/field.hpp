#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "flans/grid.hpp"

namespace flans {

using Complex = std::complex<double>;

/// Claims carried alongside a field. Operations propagate them; check_flags()
/// in spectral.hpp verifies a claim against the coefficients.
struct FieldFlags {
  bool hermitian = true;
  bool solenoidal = false;
  bool zero_mean = false;
};

/// Vector field on the torus stored as Fourier-series coefficients
/// u(x) = sum_k u_hat(k) exp(i k.x), one block of N^dim coefficients per
/// component, components outermost.
class SpectralField {
 public:
  SpectralField() = default;
  /// Zero field; a zero field satisfies every flag.
  explicit SpectralField(const GridSpec& grid);
  SpectralField(const GridSpec& grid, std::vector<Complex> coeffs, FieldFlags flags);

  const GridSpec& grid() const noexcept { return grid_; }
  int components() const noexcept { return grid_.dim(); }
  std::size_t modes() const noexcept { return grid_.size(); }

  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> component(int c) noexcept { return {coeffs_.data() + c * modes(), modes()}; }
  std::span<const Complex> component(int c) const noexcept {
    return {coeffs_.data() + c * modes(), modes()};
  }

  Complex& at(int c, std::size_t idx) noexcept { return coeffs_[c * modes() + idx]; }
  const Complex& at(int c, std::size_t idx) const noexcept { return coeffs_[c * modes() + idx]; }

  FieldFlags& flags() noexcept { return flags_; }
  const FieldFlags& flags() const noexcept { return flags_; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double a) noexcept;
  /// this += a * other
  SpectralField& axpy(double a, const SpectralField& other);

 private:
  GridSpec grid_;
  std::vector<Complex> coeffs_;
  FieldFlags flags_{true, true, true};
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double a, SpectralField f);

/// Real-valued vector field sampled at x_j = 2*pi*j/N on each axis, same
/// row-major layout as the coefficients.
class PhysicalField {
 public:
  PhysicalField() = default;
  PhysicalField(const GridSpec& grid, int components);

  const GridSpec& grid() const noexcept { return grid_; }
  int components() const noexcept { return components_; }
  std::size_t points() const noexcept { return grid_.size(); }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> component(int c) noexcept { return {values_.data() + c * points(), points()}; }
  std::span<const double> component(int c) const noexcept {
    return {values_.data() + c * points(), points()};
  }

 private:
  GridSpec grid_;
  int components_ = 0;
  std::vector<double> values_;
};

/// dim x dim collection of scalar spectral fields, entry(i, j) = d_j u_i.
class SpectralTensor {
 public:
  SpectralTensor() = default;
  explicit SpectralTensor(const GridSpec& grid);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<Complex> entry(int i, int j) noexcept {
    return {data_.data() + (i * grid_.dim() + j) * grid_.size(), grid_.size()};
  }
  std::span<const Complex> entry(int i, int j) const noexcept {
    return {data_.data() + (i * grid_.dim() + j) * grid_.size(), grid_.size()};
  }

 private:
  GridSpec grid_;
  std::vector<Complex> data_;
};

}  // namespace flans
