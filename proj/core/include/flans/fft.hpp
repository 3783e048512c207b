#pragma once

#include <complex>
#include <span>

#include "flans/grid.hpp"

namespace flans {

/// FFTW-backed scalar transform on one torus grid.
///
/// forward:  c(k) = N^-dim * sum_x f(x) exp(-i k.x)   (Fourier-series coefficients)
/// inverse:  f(x) = Re sum_k c(k) exp(+i k.x)
///
/// Plans are built with FFTW_ESTIMATE so the transform is bitwise
/// deterministic for a given grid. Instances own their work buffer and are
/// not safe to share across threads; use transform_for() which hands out a
/// per-thread instance.
class ScalarTransform {
 public:
  explicit ScalarTransform(const GridSpec& grid);
  ~ScalarTransform();
  ScalarTransform(const ScalarTransform&) = delete;
  ScalarTransform& operator=(const ScalarTransform&) = delete;

  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

  const GridSpec& grid() const noexcept { return grid_; }

 private:
  GridSpec grid_;
  void* buffer_ = nullptr;  // fftw_complex[N^dim]
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Thread-local cached transform for the grid.
ScalarTransform& transform_for(const GridSpec& grid);

}  // namespace flans
