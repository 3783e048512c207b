#include "flans/mild_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <utility>

#include "flans/error.hpp"
#include "flans/operators.hpp"
#include "flans/spectral.hpp"

namespace flans {

namespace {

void check_mesh(std::span<const SpectralField> f_samples, std::span<const double> t_mesh) {
  if (t_mesh.empty()) throw Error(ErrorCode::EmptyMesh, "quadrature mesh has no nodes");
  if (f_samples.size() != t_mesh.size()) {
    throw Error(ErrorCode::ShapeMismatch, std::to_string(f_samples.size()) + " samples for " +
                                              std::to_string(t_mesh.size()) + " mesh nodes");
  }
  for (std::size_t i = 1; i < t_mesh.size(); ++i) {
    if (!(t_mesh[i] > t_mesh[i - 1])) throw Error(ErrorCode::BadEvalTime, "mesh must be strictly increasing");
  }
}

// The four Def-style quantities for a pair (w(t), w(t+h)); h = 0 gives only
// the pointwise ones.
struct PointQuantities {
  double amplitude;
  double smoothing;
};

PointQuantities point_quantities(const SpectralField& w, double t, double s) {
  return {norm_dar(w, 1.0), std::sqrt(t) * norm_dar(frac_stokes_apply(w, s / 2.0), 1.0)};
}

std::pair<double, double> lag_quantities(const SpectralField& w_t, const SpectralField& w_th, double t, double h,
                                         double s, double beta) {
  const SpectralField diff = w_th - w_t;
  const double weight = std::pow(t / h, beta);
  return {weight * norm_dar(diff, 1.0), weight * std::sqrt(t) * norm_dar(frac_stokes_apply(diff, s / 2.0), 1.0)};
}

// t lattice: n points log-spaced on [t_lo, t_hi].
std::vector<double> log_lattice(double t_lo, double t_hi, int n) {
  std::vector<double> out;
  if (n <= 1) return {t_hi};
  const double a = std::log(t_lo);
  const double b = std::log(t_hi);
  for (int i = 0; i < n; ++i) out.push_back(std::exp(a + (b - a) * i / (n - 1)));
  out.back() = t_hi;
  return out;
}

// Lags {t/16, t/8, t/4, t/2, t, 2t, ...} below T - t, plus T - t itself.
std::vector<double> lag_set(double t, double T) {
  std::vector<double> out;
  const double room = T - t;
  if (room <= 0.0) return out;
  for (double h = t / 16.0; h < room * (1.0 - 1e-12); h *= 2.0) out.push_back(h);
  out.push_back(room);
  return out;
}

void finalize(HolderReport& report, double R, double tol, double base_norm) {
  report.min_R = std::max({report.sup_amplitude, report.sup_smoothing, report.sup_holder,
                           report.sup_holder_smoothing});
  report.finite = std::isfinite(report.min_R);
  report.R = R;
  report.C = base_norm > 0.0 ? report.min_R / base_norm : 0.0;
  const double sups[4] = {report.sup_amplitude, report.sup_smoothing, report.sup_holder, report.sup_holder_smoothing};
  report.member = report.finite;
  for (int i = 0; i < 4; ++i) {
    report.quotients[i] = R > 0.0 ? sups[i] / R : (sups[i] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    report.member = report.member && report.quotients[i] <= tol;
  }
}

void absorb(HolderReport& report, const HolderRow& row) {
  report.sup_amplitude = std::max(report.sup_amplitude, row.amplitude);
  report.sup_smoothing = std::max(report.sup_smoothing, row.smoothing);
  report.sup_holder = std::max(report.sup_holder, row.holder);
  report.sup_holder_smoothing = std::max(report.sup_holder_smoothing, row.holder_smoothing);
  report.rows.push_back(row);
}

}  // namespace

HolderClass make_holder_class(double R, double beta, double T, double tol) {
  if (!(beta > 0.0 && beta < 0.5)) throw Error(ErrorCode::BadParams, "beta must lie in (0, 1/2)");
  if (!(T > 0.0 && T <= 1.0)) throw Error(ErrorCode::BadParams, "T must lie in (0, 1]");
  if (!(R >= 0.0)) throw Error(ErrorCode::BadParams, "R must be >= 0");
  if (!(tol >= 1.0)) throw Error(ErrorCode::BadParams, "membership tolerance must be >= 1");
  return HolderClass{R, beta, T, tol};
}

SpectralField duhamel_integral(std::span<const SpectralField> f_samples, std::span<const double> t_mesh,
                               double t_eval, const Params& params) {
  check_mesh(f_samples, t_mesh);
  std::size_t last = t_mesh.size();
  for (std::size_t i = 0; i < t_mesh.size(); ++i) {
    if (std::abs(t_mesh[i] - t_eval) <= 1e-12 * std::max(1.0, std::abs(t_eval))) {
      last = i;
      break;
    }
  }
  if (last == t_mesh.size()) {
    throw Error(ErrorCode::BadEvalTime, "t_eval=" + std::to_string(t_eval) + " is not a mesh node");
  }
  SpectralField out(f_samples.front().grid());
  for (std::size_t m = 0; m + 1 <= last; ++m) {
    const double h = t_mesh[m + 1] - t_mesh[m];
    out.axpy(0.5 * h, semigroup_apply(f_samples[m], t_mesh[last] - t_mesh[m], params));
    out.axpy(0.5 * h, semigroup_apply(f_samples[m + 1], t_mesh[last] - t_mesh[m + 1], params));
  }
  out.flags() = f_samples.front().flags();
  return out;
}

std::vector<SpectralField> duhamel_cumulative(std::span<const SpectralField> f_samples,
                                              std::span<const double> t_mesh, const Params& params) {
  check_mesh(f_samples, t_mesh);
  std::vector<SpectralField> out;
  out.reserve(t_mesh.size());
  out.emplace_back(f_samples.front().grid());
  for (std::size_t n = 0; n + 1 < t_mesh.size(); ++n) {
    const double h = t_mesh[n + 1] - t_mesh[n];
    SpectralField next = semigroup_apply(out.back(), h, params);
    next.axpy(0.5 * h, semigroup_apply(f_samples[n], h, params));
    next.axpy(0.5 * h, f_samples[n + 1]);
    next.flags() = f_samples[n].flags();
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<double> PicardState::ratios() const {
  std::vector<double> out;
  for (std::size_t j = 1; j < increments_linf.size(); ++j) {
    out.push_back(increments_linf[j - 1] > 0.0 ? increments_linf[j] / increments_linf[j - 1] : 0.0);
  }
  return out;
}

PicardResult picard_solve(const SpectralField& u0, const Params& params, const HolderClass& holder, int mesh_size,
                          int max_iter, double tol) {
  if (mesh_size < 2) throw Error(ErrorCode::EmptyMesh, "Picard mesh needs at least two nodes");
  if (max_iter < 1) throw Error(ErrorCode::BadParams, "max_iter must be >= 1");
  const double T = holder.T;

  PicardState state;
  for (int n = 0; n < mesh_size; ++n) state.t_mesh.push_back(T * n / (mesh_size - 1));
  state.t_mesh.back() = T;

  std::vector<SpectralField> linear;
  linear.reserve(mesh_size);
  for (double t : state.t_mesh) linear.push_back(semigroup_apply(u0, t, params));
  state.iterates.push_back(linear);

  const double r_high = 1.0 + params.s / 2.0;
  int non_decreasing = 0;
  for (int j = 1; j <= max_iter; ++j) {
    const auto& prev = state.iterates.back();
    std::vector<SpectralField> f;
    f.reserve(mesh_size);
    for (const auto& u : prev) f.push_back(rhs_f(u, u, params).f);
    const auto duhamel = duhamel_cumulative(f, state.t_mesh, params);

    std::vector<SpectralField> next;
    next.reserve(mesh_size);
    double inc_linf = 0.0;
    double size_linf = 0.0;
    double inc_l2_sq = 0.0;
    double prev_density = 0.0;
    for (int n = 0; n < mesh_size; ++n) {
      next.push_back(linear[n] + duhamel[n]);
      const SpectralField diff = next[n] - prev[n];
      inc_linf = std::max(inc_linf, norm_dar(diff, 1.0));
      size_linf = std::max(size_linf, norm_dar(next[n], 1.0));
      const double high = norm_dar(diff, r_high);
      const double density = high * high;
      if (n > 0) inc_l2_sq += 0.5 * (state.t_mesh[n] - state.t_mesh[n - 1]) * (density + prev_density);
      prev_density = density;
    }
    if (!std::isfinite(inc_linf)) throw Error(ErrorCode::NoContraction, "Picard iterate became non-finite");

    state.iterates.push_back(std::move(next));
    state.increments_linf.push_back(inc_linf);
    state.increments_l2.push_back(std::sqrt(inc_l2_sq));

    if (inc_linf <= tol * std::max(size_linf, std::numeric_limits<double>::min())) {
      state.converged = true;
      break;
    }
    const std::size_t k = state.increments_linf.size();
    if (k >= 2 && state.increments_linf[k - 1] >= state.increments_linf[k - 2]) {
      if (++non_decreasing >= 3) {
        throw Error(ErrorCode::NoContraction, "increments failed to decrease for 3 consecutive iterations (iterate " +
                                                  std::to_string(j) + ")");
      }
    } else {
      non_decreasing = 0;
    }
  }

  PicardResult result;
  result.trajectory.times = state.t_mesh;
  result.trajectory.snapshots = state.iterates.back();
  result.state = std::move(state);
  return result;
}

HolderReport semigroup_class_check(const SpectralField& u0, const Params& params, const HolderClass& holder,
                                   int t_points) {
  const double T = holder.T;
  HolderReport report;
  const double s = params.s;
  for (double t : log_lattice(1e-3 * T, T, t_points)) {
    const SpectralField w_t = semigroup_apply(u0, t, params);
    const auto pq = point_quantities(w_t, t, s);
    absorb(report, HolderRow{t, 0.0, pq.amplitude, pq.smoothing, 0.0, 0.0});
    for (double h : lag_set(t, T)) {
      const SpectralField w_th = semigroup_apply(u0, t + h, params);
      const auto [hq, hsq] = lag_quantities(w_t, w_th, t, h, s, holder.beta);
      absorb(report, HolderRow{t, h, 0.0, 0.0, hq, hsq});
    }
  }
  // w(0) = u0 enters the amplitude bound on the closed interval.
  report.sup_amplitude = std::max(report.sup_amplitude, norm_dar(u0, 1.0));
  const double base = norm_dar(u0, 1.0);
  HolderReport probe = report;
  finalize(probe, 1.0, holder.tol, base);
  finalize(report, holder.tol * probe.min_R, holder.tol, base);
  return report;
}

HolderReport holder_membership(const Trajectory& traj, const HolderClass& holder, double s, int t_points) {
  HolderReport report;
  const auto& times = traj.times;
  const auto& snaps = traj.snapshots;
  if (times.empty()) {
    finalize(report, holder.R, holder.tol, 0.0);
    return report;
  }
  report.sup_amplitude = norm_dar(snaps.front(), 1.0);

  // Positive sample times only; the lattice is snapped onto them.
  std::size_t first = 0;
  while (first < times.size() && times[first] <= 0.0) ++first;
  const double T = std::min(holder.T, times.back());
  if (first < times.size() && times[first] <= T) {
    auto nearest = [&](double target) {
      std::size_t best = first;
      for (std::size_t i = first; i < times.size() && times[i] <= T * (1.0 + 1e-12); ++i) {
        if (std::abs(std::log(times[i] / target)) < std::abs(std::log(times[best] / target))) best = i;
      }
      return best;
    };
    std::set<std::size_t> t_idx;
    for (double t : log_lattice(times[first], T, t_points)) t_idx.insert(nearest(t));

    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i : t_idx) {
      const double t = times[i];
      const auto pq = point_quantities(snaps[i], t, s);
      absorb(report, HolderRow{t, 0.0, pq.amplitude, pq.smoothing, 0.0, 0.0});
      for (double h : lag_set(t, T)) {
        // Snap t + h onto the samples, keeping j > i.
        std::size_t j = i + 1;
        for (std::size_t m = i + 1; m < times.size() && times[m] <= T * (1.0 + 1e-12); ++m) {
          if (std::abs(times[m] - (t + h)) < std::abs(times[j] - (t + h))) j = m;
        }
        if (j >= times.size() || times[j] > T * (1.0 + 1e-12)) continue;
        if (!pairs.insert({i, j}).second) continue;
        const auto [hq, hsq] = lag_quantities(snaps[i], snaps[j], t, times[j] - t, s, holder.beta);
        absorb(report, HolderRow{t, times[j] - t, 0.0, 0.0, hq, hsq});
      }
    }
  }
  finalize(report, holder.R, holder.tol, norm_dar(snaps.front(), 1.0));
  return report;
}

}  // namespace flans
