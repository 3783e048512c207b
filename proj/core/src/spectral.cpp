#include "flans/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "flans/error.hpp"
#include "flans/fft.hpp"

namespace flans {

namespace {

double coeff_norm(const SpectralField& f) {
  double sum = 0.0;
  for (const auto& c : f.coeffs()) sum += std::norm(c);
  return std::sqrt(sum);
}

// Applies a real per-mode multiplier to every component.
template <class Symbol>
SpectralField apply_symbol(const SpectralField& field, Symbol symbol) {
  SpectralField out = field;
  const auto& grid = field.grid();
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double m = symbol(idx);
    for (int c = 0; c < field.components(); ++c) out.at(c, idx) *= m;
  }
  return out;
}

}  // namespace

double torus_volume(int dim) noexcept { return std::pow(2.0 * std::numbers::pi, dim); }

PhysicalField to_physical(const SpectralField& field) {
  if (!field.flags().hermitian) {
    throw Error(ErrorCode::NotHermitian, "to_physical requires a hermitian field");
  }
  PhysicalField out(field.grid(), field.components());
  auto& fft = transform_for(field.grid());
  for (int c = 0; c < field.components(); ++c) fft.inverse(field.component(c), out.component(c));
  return out;
}

SpectralField to_spectral(const PhysicalField& values, const GridSpec& grid) {
  if (!(values.grid() == grid) || values.components() != grid.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "physical array does not match grid (dim=" +
                                              std::to_string(grid.dim()) + ", N=" + std::to_string(grid.n()) +
                                              ")");
  }
  SpectralField out(grid);
  auto& fft = transform_for(grid);
  for (int c = 0; c < grid.dim(); ++c) fft.forward(values.component(c), out.component(c));
  symmetrize(out);
  out.flags() = detect_flags(out);
  out.flags().hermitian = true;
  return out;
}

void symmetrize(SpectralField& field) {
  const auto& grid = field.grid();
  for (int c = 0; c < field.components(); ++c) {
    auto comp = field.component(c);
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
      const std::size_t m = grid.mirror(idx);
      if (m < idx) continue;
      if (m == idx) {
        comp[idx] = {comp[idx].real(), 0.0};
      } else {
        const Complex avg = 0.5 * (comp[idx] + std::conj(comp[m]));
        comp[idx] = avg;
        comp[m] = std::conj(avg);
      }
    }
  }
  field.flags().hermitian = true;
}

SpectralField leray_project(const SpectralField& field) {
  SpectralField out = field;
  const auto& grid = field.grid();
  const int d = grid.dim();
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double k2 = grid.k2(idx);
    if (k2 == 0.0) continue;
    const auto& k = grid.wavevector(idx);
    Complex kdotu = 0.0;
    for (int c = 0; c < d; ++c) kdotu += static_cast<double>(k[c]) * field.at(c, idx);
    const Complex scale = kdotu / k2;
    for (int c = 0; c < d; ++c) out.at(c, idx) -= static_cast<double>(k[c]) * scale;
  }
  out.flags().solenoidal = true;
  return out;
}

double stokes_power_symbol(double k2, double r) noexcept {
  if (k2 == 0.0) return 0.0;
  return std::exp(r * std::log(k2));
}

SpectralField frac_stokes_apply(const SpectralField& field, double r) {
  if (r < 0.0) {
    for (int c = 0; c < field.components(); ++c) {
      if (field.at(c, 0) != Complex(0.0, 0.0)) {
        throw Error(ErrorCode::NegativePowerOnMean, "A^r with r < 0 on a field with nonzero mean");
      }
    }
  }
  const auto& grid = field.grid();
  SpectralField out = apply_symbol(field, [&](std::size_t idx) { return stokes_power_symbol(grid.k2(idx), r); });
  out.flags().zero_mean = true;
  return out;
}

SpectralField helmholtz_inverse(const SpectralField& field, double alpha) {
  const auto& grid = field.grid();
  const double a2 = alpha * alpha;
  return apply_symbol(field, [&](std::size_t idx) { return 1.0 / (1.0 + a2 * grid.k2(idx)); });
}

SpectralField helmholtz_apply(const SpectralField& field, double alpha) {
  const auto& grid = field.grid();
  const double a2 = alpha * alpha;
  return apply_symbol(field, [&](std::size_t idx) { return 1.0 + a2 * grid.k2(idx); });
}

SpectralField semigroup_apply(const SpectralField& field, double t, const Params& params) {
  if (t < 0.0) throw Error(ErrorCode::NegativeTime, "semigroup time must be >= 0, got " + std::to_string(t));
  const auto& grid = field.grid();
  const double nu_t = params.nu * t;
  return apply_symbol(field,
                      [&](std::size_t idx) { return std::exp(-nu_t * stokes_power_symbol(grid.k2(idx), params.s)); });
}

bool is_dealiased_mode(const GridSpec& grid, std::size_t idx) noexcept {
  const auto& k = grid.wavevector(idx);
  for (int a = 0; a < grid.dim(); ++a) {
    if (3 * std::abs(k[a]) >= grid.n()) return false;
  }
  return true;
}

SpectralField dealias(const SpectralField& field) {
  const auto& grid = field.grid();
  return apply_symbol(field, [&](std::size_t idx) { return is_dealiased_mode(grid, idx) ? 1.0 : 0.0; });
}

SpectralField resample(const SpectralField& field, const GridSpec& target) {
  const auto& src = field.grid();
  if (src.dim() != target.dim()) throw Error(ErrorCode::GridMismatch, "resample across dimensions");
  SpectralField out(target);
  out.flags() = field.flags();
  const int limit = std::min(src.n(), target.n()) / 2;
  for (std::size_t idx = 0; idx < src.size(); ++idx) {
    const auto& k = src.wavevector(idx);
    bool fits = true;
    for (int a = 0; a < src.dim(); ++a) fits = fits && std::abs(k[a]) < limit;
    if (!fits) continue;
    const std::size_t t_idx = target.index_of(k);
    for (int c = 0; c < src.dim(); ++c) out.at(c, t_idx) = field.at(c, idx);
  }
  return out;
}

double inner(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) throw Error(ErrorCode::GridMismatch, "inner product across grids");
  double sum = 0.0;
  const auto ca = a.coeffs();
  const auto cb = b.coeffs();
  for (std::size_t i = 0; i < ca.size(); ++i) sum += ca[i].real() * cb[i].real() + ca[i].imag() * cb[i].imag();
  return torus_volume(a.grid().dim()) * sum;
}

double l2_norm(const SpectralField& field) {
  return std::sqrt(torus_volume(field.grid().dim())) * coeff_norm(field);
}

double physical_l2_norm(const PhysicalField& values) {
  double sum = 0.0;
  for (double v : values.values()) sum += v * v;
  const double cell = std::pow(values.grid().spacing(), values.grid().dim());
  return std::sqrt(cell * sum);
}

double norm_dar(const SpectralField& field, double r) {
  if (r < 0.0) throw Error(ErrorCode::BadParams, "norm order must be >= 0");
  const auto& grid = field.grid();
  double power = 0.0;
  double plain = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    double mag2 = 0.0;
    for (int c = 0; c < field.components(); ++c) mag2 += std::norm(field.at(c, idx));
    plain += mag2;
    if (r == 0.0) continue;
    const double sym = stokes_power_symbol(grid.k2(idx), r);
    power += sym * sym * mag2;
  }
  const double vol = torus_volume(grid.dim());
  if (r == 0.0) return std::sqrt(vol * plain);
  return std::sqrt(vol * (power + plain));
}

double divergence_defect(const SpectralField& field) {
  const double norm = coeff_norm(field);
  if (norm == 0.0) return 0.0;
  const auto& grid = field.grid();
  double worst = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double k2 = grid.k2(idx);
    if (k2 == 0.0) continue;
    const auto& k = grid.wavevector(idx);
    Complex kdotu = 0.0;
    for (int c = 0; c < grid.dim(); ++c) kdotu += static_cast<double>(k[c]) * field.at(c, idx);
    worst = std::max(worst, std::abs(kdotu) / std::sqrt(k2));
  }
  return worst / norm;
}

double hermitian_defect(const SpectralField& field) {
  const double norm = coeff_norm(field);
  if (norm == 0.0) return 0.0;
  const auto& grid = field.grid();
  double worst = 0.0;
  for (int c = 0; c < field.components(); ++c) {
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
      worst = std::max(worst, std::abs(field.at(c, grid.mirror(idx)) - std::conj(field.at(c, idx))));
    }
  }
  return worst / norm;
}

double mean_defect(const SpectralField& field) {
  const double norm = coeff_norm(field);
  if (norm == 0.0) return 0.0;
  double mean2 = 0.0;
  for (int c = 0; c < field.components(); ++c) mean2 += std::norm(field.at(c, 0));
  return std::sqrt(mean2) / norm;
}

FieldFlags detect_flags(const SpectralField& field, double tol) {
  return {hermitian_defect(field) <= tol, divergence_defect(field) <= tol, mean_defect(field) <= tol};
}

bool check_flags(const SpectralField& field, double tol) {
  const auto& f = field.flags();
  if (f.hermitian && hermitian_defect(field) > tol) return false;
  if (f.solenoidal && divergence_defect(field) > tol) return false;
  if (f.zero_mean && mean_defect(field) > tol) return false;
  return true;
}

SpectralField random_solenoidal(const GridSpec& grid, const RandomSpectrum& spec) {
  const int d = grid.dim();
  const int band = spec.band < 0 ? grid.dealias_limit() : spec.band;
  if (band >= grid.n() / 2) {
    throw Error(ErrorCode::BadParams, "random band " + std::to_string(band) + " does not fit on N=" +
                                          std::to_string(grid.n()));
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);

  SpectralField out(grid);
  // Walk the box [-band, band]^d in a grid-independent order; draw only for the
  // canonical half (first nonzero component positive) and mirror the rest.
  std::array<int, 3> k{0, 0, 0};
  std::array<int, 3> lo{-band, -band, d == 3 ? -band : 0};
  std::array<int, 3> hi{band, band, d == 3 ? band : 0};
  for (k[0] = lo[0]; k[0] <= hi[0]; ++k[0]) {
    for (k[1] = lo[1]; k[1] <= hi[1]; ++k[1]) {
      for (k[2] = lo[2]; k[2] <= hi[2]; ++k[2]) {
        int first = 0;
        for (int a = 0; a < d; ++a) {
          if (k[a] != 0) {
            first = k[a];
            break;
          }
        }
        if (first <= 0) continue;

        std::array<Complex, 3> v{};
        for (int c = 0; c < d; ++c) v[c] = {uniform(rng), uniform(rng)};
        const double k2 = static_cast<double>(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        Complex kdotv = 0.0;
        for (int c = 0; c < d; ++c) kdotv += static_cast<double>(k[c]) * v[c];
        double mag2 = 0.0;
        for (int c = 0; c < d; ++c) {
          v[c] -= static_cast<double>(k[c]) * kdotv / k2;
          mag2 += std::norm(v[c]);
        }
        if (mag2 == 0.0) continue;
        const double target = std::exp(-0.5 * spec.decay_exponent * std::log(k2));
        const double scale = target / std::sqrt(mag2);
        const std::size_t idx = grid.index_of(k);
        const std::size_t mir = grid.mirror(idx);
        for (int c = 0; c < d; ++c) {
          out.at(c, idx) = scale * v[c];
          out.at(c, mir) = std::conj(scale * v[c]);
        }
      }
    }
  }
  out.flags() = {true, true, true};
  return out;
}

}  // namespace flans
