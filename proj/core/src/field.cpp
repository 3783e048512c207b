#include "flans/field.hpp"

#include <string>

#include "flans/error.hpp"

namespace flans {

namespace {

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) {
    throw Error(ErrorCode::GridMismatch, "fields live on different grids (N=" + std::to_string(a.n()) +
                                             " vs N=" + std::to_string(b.n()) + ")");
  }
}

FieldFlags combine(const FieldFlags& a, const FieldFlags& b) {
  return {a.hermitian && b.hermitian, a.solenoidal && b.solenoidal, a.zero_mean && b.zero_mean};
}

}  // namespace

SpectralField::SpectralField(const GridSpec& grid)
    : grid_(grid), coeffs_(static_cast<std::size_t>(grid.dim()) * grid.size()) {}

SpectralField::SpectralField(const GridSpec& grid, std::vector<Complex> coeffs, FieldFlags flags)
    : grid_(grid), coeffs_(std::move(coeffs)), flags_(flags) {
  if (coeffs_.size() != static_cast<std::size_t>(grid.dim()) * grid.size()) {
    throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(grid.dim() * grid.size()) +
                                              " coefficients, got " + std::to_string(coeffs_.size()));
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) { return axpy(1.0, other); }

SpectralField& SpectralField::operator-=(const SpectralField& other) { return axpy(-1.0, other); }

SpectralField& SpectralField::operator*=(double a) noexcept {
  for (auto& c : coeffs_) c *= a;
  return *this;
}

SpectralField& SpectralField::axpy(double a, const SpectralField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += a * other.coeffs_[i];
  flags_ = combine(flags_, other.flags_);
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double a, SpectralField f) { return f *= a; }

PhysicalField::PhysicalField(const GridSpec& grid, int components)
    : grid_(grid), components_(components), values_(static_cast<std::size_t>(components) * grid.size()) {}

SpectralTensor::SpectralTensor(const GridSpec& grid)
    : grid_(grid), data_(static_cast<std::size_t>(grid.dim() * grid.dim()) * grid.size()) {}

}  // namespace flans
