#include "flans/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "flans/error.hpp"

namespace flans {

namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

ScalarTransform::ScalarTransform(const GridSpec& grid) : grid_(grid) {
  const int n = grid.n();
  const int dims[3] = {n, n, n};
  auto* buf = fftw_alloc_complex(grid.size());
  buffer_ = buf;
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft(grid.dim(), dims, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft(grid.dim(), dims, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

ScalarTransform::~ScalarTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  fftw_free(buffer_);
}

void ScalarTransform::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  const std::size_t m = grid_.size();
  if (in.size() != m || out.size() != m) throw Error(ErrorCode::ShapeMismatch, "forward transform size");
  auto* buf = static_cast<fftw_complex*>(buffer_);
  for (std::size_t i = 0; i < m; ++i) {
    buf[i][0] = in[i];
    buf[i][1] = 0.0;
  }
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = {buf[i][0] * scale, buf[i][1] * scale};
}

void ScalarTransform::forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  const std::size_t m = grid_.size();
  if (in.size() != m || out.size() != m) throw Error(ErrorCode::ShapeMismatch, "forward transform size");
  auto* buf = static_cast<fftw_complex*>(buffer_);
  for (std::size_t i = 0; i < m; ++i) {
    buf[i][0] = in[i].real();
    buf[i][1] = in[i].imag();
  }
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = {buf[i][0] * scale, buf[i][1] * scale};
}

void ScalarTransform::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  const std::size_t m = grid_.size();
  if (in.size() != m || out.size() != m) throw Error(ErrorCode::ShapeMismatch, "inverse transform size");
  auto* buf = static_cast<fftw_complex*>(buffer_);
  for (std::size_t i = 0; i < m; ++i) {
    buf[i][0] = in[i].real();
    buf[i][1] = in[i].imag();
  }
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  for (std::size_t i = 0; i < m; ++i) out[i] = buf[i][0];
}

ScalarTransform& transform_for(const GridSpec& grid) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<ScalarTransform>> cache;
  auto& slot = cache[{grid.dim(), grid.n()}];
  if (!slot) slot = std::make_unique<ScalarTransform>(grid);
  return *slot;
}

}  // namespace flans
