#include "flans/operators.hpp"

#include <cassert>
#include <string>
#include <vector>

#include "flans/error.hpp"
#include "flans/fft.hpp"
#include "flans/spectral.hpp"

namespace flans {

namespace {

using RealArray = std::vector<double>;

void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) {
    throw Error(ErrorCode::GridMismatch, "operands on different grids (N=" + std::to_string(a.grid().n()) +
                                             " vs N=" + std::to_string(b.grid().n()) + ")");
  }
}

Complex derivative_symbol(const GridSpec& grid, std::size_t idx, int axis) {
  const int k = grid.wavevector(idx)[axis];
  if (2 * k == -grid.n()) return {0.0, 0.0};
  return {0.0, static_cast<double>(k)};
}

// Physical samples of a dealiased field, one array per component.
std::vector<RealArray> physical_components(const SpectralField& u) {
  const auto& grid = u.grid();
  auto& fft = transform_for(grid);
  std::vector<RealArray> out(u.components(), RealArray(grid.size()));
  for (int c = 0; c < u.components(); ++c) fft.inverse(u.component(c), out[c]);
  return out;
}

// Physical samples of grad u, entry (i, j) at index i * dim + j.
std::vector<RealArray> physical_gradient(const SpectralField& u) {
  const auto& grid = u.grid();
  const int d = grid.dim();
  auto& fft = transform_for(grid);
  std::vector<RealArray> out(d * d, RealArray(grid.size()));
  std::vector<Complex> scratch(grid.size());
  for (int i = 0; i < d; ++i) {
    const auto comp = u.component(i);
    for (int j = 0; j < d; ++j) {
      for (std::size_t idx = 0; idx < grid.size(); ++idx) scratch[idx] = derivative_symbol(grid, idx, j) * comp[idx];
      fft.inverse(scratch, out[i * d + j]);
    }
  }
  return out;
}

// Forward transform of one physical component per vector entry, then dealias.
SpectralField spectral_vector(const GridSpec& grid, const std::vector<RealArray>& values) {
  SpectralField out(grid);
  auto& fft = transform_for(grid);
  for (int c = 0; c < grid.dim(); ++c) fft.forward(values[c], out.component(c));
  symmetrize(out);
  out = dealias(out);
  out.flags() = {true, false, false};
  return out;
}

// u1 . grad u2 given physical u1 and grad u2.
std::vector<RealArray> advection_product(const std::vector<RealArray>& u1, const std::vector<RealArray>& g2,
                                         int d, std::size_t points) {
  std::vector<RealArray> out(d, RealArray(points, 0.0));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const auto& a = u1[j];
      const auto& b = g2[i * d + j];
      auto& o = out[i];
      for (std::size_t p = 0; p < points; ++p) o[p] += a[p] * b[p];
    }
  }
  return out;
}

// alpha^2 (1 - alpha^2 Delta)^-1 div T from physical G1 = grad u1, G2 = grad u2.
SpectralField u_alpha_from_gradients(const GridSpec& grid, const std::vector<RealArray>& g1,
                                     const std::vector<RealArray>& g2, double alpha) {
  const int d = grid.dim();
  const std::size_t points = grid.size();
  auto& fft = transform_for(grid);
  SpectralTensor t_hat(grid);
  RealArray t(points);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      std::fill(t.begin(), t.end(), 0.0);
      for (int k = 0; k < d; ++k) {
        const auto& g1_ik = g1[i * d + k];
        const auto& g2_jk = g2[j * d + k];
        const auto& g2_kj = g2[k * d + j];
        const auto& g1_ki = g1[k * d + i];
        for (std::size_t p = 0; p < points; ++p) {
          t[p] += g1_ik[p] * g2_jk[p] + g1_ik[p] * g2_kj[p] - g1_ki[p] * g2_kj[p];
        }
      }
      auto entry = t_hat.entry(i, j);
      fft.forward(t, entry);
      for (std::size_t idx = 0; idx < points; ++idx) {
        if (!is_dealiased_mode(grid, idx)) entry[idx] = 0.0;
      }
    }
  }
  SpectralField div = divergence_rows(t_hat);
  symmetrize(div);
  SpectralField out = helmholtz_inverse(div, alpha);
  out *= alpha * alpha;
  out.flags() = {true, false, true};
  return out;
}

}  // namespace

SpectralTensor gradient(const SpectralField& u) {
  const auto& grid = u.grid();
  const int d = grid.dim();
  SpectralTensor out(grid);
  for (int i = 0; i < d; ++i) {
    const auto comp = u.component(i);
    for (int j = 0; j < d; ++j) {
      auto e = out.entry(i, j);
      for (std::size_t idx = 0; idx < grid.size(); ++idx) e[idx] = derivative_symbol(grid, idx, j) * comp[idx];
    }
  }
  return out;
}

SpectralField divergence_rows(const SpectralTensor& t) {
  const auto& grid = t.grid();
  const int d = grid.dim();
  SpectralField out(grid);
  for (int i = 0; i < d; ++i) {
    auto o = out.component(i);
    for (int j = 0; j < d; ++j) {
      const auto e = t.entry(i, j);
      for (std::size_t idx = 0; idx < grid.size(); ++idx) o[idx] += derivative_symbol(grid, idx, j) * e[idx];
    }
  }
  out.flags() = {true, false, true};
  return out;
}

SpectralField advect(const SpectralField& u1, const SpectralField& u2) {
  require_same_grid(u1, u2);
  const auto& grid = u1.grid();
  const auto p1 = physical_components(dealias(u1));
  const auto g2 = physical_gradient(dealias(u2));
  return spectral_vector(grid, advection_product(p1, g2, grid.dim(), grid.size()));
}

SpectralField u_alpha(const SpectralField& u1, const SpectralField& u2, double alpha) {
  require_same_grid(u1, u2);
  const auto& grid = u1.grid();
  if (alpha == 0.0) return SpectralField(grid);
  const auto g1 = physical_gradient(dealias(u1));
  const auto g2 = physical_gradient(dealias(u2));
  return u_alpha_from_gradients(grid, g1, g2, alpha);
}

SpectralField stokes_project_alpha(const SpectralField& w, double /*alpha*/) { return leray_project(w); }

RhsEval rhs_f(const SpectralField& u1, const SpectralField& u2, const Params& params, bool keep_parts) {
  require_same_grid(u1, u2);
  const auto& grid = u1.grid();
  const bool same = &u1 == &u2;

  const SpectralField d1 = dealias(u1);
  const auto p1 = physical_components(d1);
  const auto g2 = physical_gradient(same ? d1 : dealias(u2));
  SpectralField adv = spectral_vector(grid, advection_product(p1, g2, grid.dim(), grid.size()));

  SpectralField ua(grid);
  if (params.alpha != 0.0) {
    if (same) {
      ua = u_alpha_from_gradients(grid, g2, g2, params.alpha);
    } else {
      ua = u_alpha_from_gradients(grid, physical_gradient(d1), g2, params.alpha);
    }
  }

  SpectralField sum = adv + ua;
  SpectralField f = stokes_project_alpha(sum, params.alpha);
  f *= -1.0;
  for (int c = 0; c < f.components(); ++c) f.at(c, 0) = 0.0;
  f.flags() = {true, true, true};
  assert(divergence_defect(f) <= 1e-10);

  RhsEval out{std::move(f), std::nullopt};
  if (keep_parts) out.parts = std::make_pair(std::move(adv), std::move(ua));
  return out;
}

SpectralField v_from_u(const SpectralField& u, double alpha) { return helmholtz_apply(u, alpha); }

SpectralField u_from_v(const SpectralField& v, double alpha) { return helmholtz_inverse(v, alpha); }

SpectralField nonlinear_v(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u, v);
  const auto& grid = u.grid();
  const int d = grid.dim();
  const std::size_t points = grid.size();
  const SpectralField du = dealias(u);
  const SpectralField dv = dealias(v);
  const auto pu = physical_components(du);
  const auto pv = physical_components(dv);
  const auto gu = physical_gradient(du);
  const auto gv = physical_gradient(dv);

  auto prod = advection_product(pu, gv, d, points);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const auto& a = gu[j * d + i];
      const auto& b = pv[j];
      auto& o = prod[i];
      for (std::size_t p = 0; p < points; ++p) o[p] += a[p] * b[p];
    }
  }
  SpectralField out = leray_project(spectral_vector(grid, prod));
  out *= -1.0;
  for (int c = 0; c < d; ++c) out.at(c, 0) = 0.0;
  out.flags() = {true, true, true};
  return out;
}

SpectralField rhs_v(const SpectralField& u, const SpectralField& v, const Params& params, double pair_tol) {
  require_same_grid(u, v);
  const SpectralField expected = v_from_u(u, params.alpha);
  const double scale = l2_norm(expected);
  const double mismatch = l2_norm(expected - v);
  if (mismatch > pair_tol * scale && mismatch > 0.0) {
    throw Error(ErrorCode::InconsistentPair,
                "v differs from (1 + alpha^2 A) u by relative " + std::to_string(scale > 0 ? mismatch / scale : mismatch));
  }
  SpectralField out = frac_stokes_apply(v, params.s);
  out *= -params.nu;
  out += nonlinear_v(u, v);
  return out;
}

}  // namespace flans
