#include "flans/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "flans/error.hpp"
#include "flans/operators.hpp"
#include "flans/spectral.hpp"

namespace flans {

double cancellation_residual(const SpectralField& u, const SpectralField& f, const Params& params) {
  const double pairing = inner(v_from_u(u, params.alpha), f);
  const double scale = norm_dar(u, 1.0);
  return std::abs(pairing) / (scale * scale * scale + 1e-300);
}

DiagRecord record(const SpectralField& u, const Params& params, double t) {
  return record_with_rhs(u, rhs_f(u, u, params).f, params, t);
}

DiagRecord record_with_rhs(const SpectralField& u, const SpectralField& f, const Params& params, double t) {
  const auto& grid = u.grid();
  const double a2 = params.alpha * params.alpha;
  const double s = params.s;
  double e0 = 0.0, h1 = 0.0, ds = 0.0, d1s = 0.0, a2norm = 0.0, high = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    double mag2 = 0.0;
    for (int c = 0; c < u.components(); ++c) mag2 += std::norm(u.at(c, idx));
    if (mag2 == 0.0) continue;
    const double k2 = grid.k2(idx);
    e0 += mag2;
    if (k2 == 0.0) continue;
    h1 += k2 * mag2;
    ds += stokes_power_symbol(k2, s) * mag2;
    d1s += stokes_power_symbol(k2, 1.0 + s) * mag2;
    a2norm += k2 * k2 * mag2;
    high += stokes_power_symbol(k2, 2.0 + s) * mag2;
  }
  const double vol = torus_volume(grid.dim());
  DiagRecord rec;
  rec.t = t;
  rec.E0 = vol * e0;
  rec.E1 = vol * (e0 + a2 * h1);
  rec.D = vol * (ds + a2 * d1s);
  rec.nDA = std::sqrt(vol * (a2norm + e0));
  rec.n1ps2 = std::sqrt(vol * high);
  rec.cancel = cancellation_residual(u, f, params);
  return rec;
}

std::vector<double> energy_balance_residual(const std::vector<DiagRecord>& records, const Params& params) {
  if (records.size() < 2) {
    throw Error(ErrorCode::TooFewRecords, "energy balance needs >= 2 records, got " + std::to_string(records.size()));
  }
  const double e1_0 = records.front().E1;
  const double scale = e1_0 > 0.0 ? e1_0 : 1.0;
  std::vector<double> out;
  out.reserve(records.size());
  double dissipated = 0.0;
  out.push_back(0.0);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const double h = records[i].t - records[i - 1].t;
    dissipated += 0.5 * h * (records[i].D + records[i - 1].D);
    out.push_back(std::abs(records[i].E1 + 2.0 * params.nu * dissipated - e1_0) / scale);
  }
  return out;
}

std::vector<double> energy_balance_residual(const Trajectory& traj, const Params& params) {
  return energy_balance_residual(traj.diag, params);
}

AprioriReport apriori_monitor(const Trajectory& traj, const Params& params) {
  AprioriReport report;
  std::vector<DiagRecord> recs = traj.diag;
  if (recs.empty()) {
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) recs.push_back(record(traj.snapshots[i], params, traj.times[i]));
  }
  if (recs.empty()) return report;
  report.initial_nDA = recs.front().nDA;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    report.sup_nDA = std::max(report.sup_nDA, recs[i].nDA);
    if (i > 0) {
      const double h = recs[i].t - recs[i - 1].t;
      report.dissipation_integral += 0.5 * h * (recs[i].n1ps2 * recs[i].n1ps2 + recs[i - 1].n1ps2 * recs[i - 1].n1ps2);
    }
  }
  report.C = report.initial_nDA > 0.0 ? report.sup_nDA / report.initial_nDA : 1.0;
  report.bounded = std::isfinite(report.sup_nDA) && std::isfinite(report.dissipation_integral);
  return report;
}

RateFit smoothing_rate(const Trajectory& traj, double r, double s, double t_min, double t_max, int samples) {
  RateFit fit;
  fit.t_min = t_min;
  fit.t_max = t_max;
  fit.r = r;
  fit.expected = -r / s;
  if (!(t_min > 0.0) || !(t_max > t_min)) throw Error(ErrorCode::EmptyWindow, "window must satisfy 0 < t_min < t_max");

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    if (t >= t_min * (1.0 - 1e-12) && t <= t_max * (1.0 + 1e-12)) candidates.push_back(i);
  }
  if (candidates.size() < 2) {
    throw Error(ErrorCode::EmptyWindow, "fewer than two snapshots in [" + std::to_string(t_min) + ", " +
                                            std::to_string(t_max) + "]");
  }

  // Log-uniform thinning keeps the late, densely sampled part of the window
  // from dominating the fit.
  std::set<std::size_t> chosen;
  const int n = std::max(2, samples);
  const double a = std::log(traj.times[candidates.front()]);
  const double b = std::log(traj.times[candidates.back()]);
  for (int j = 0; j < n; ++j) {
    const double target = a + (b - a) * j / (n - 1);
    std::size_t best = candidates.front();
    for (std::size_t i : candidates) {
      if (std::abs(std::log(traj.times[i]) - target) < std::abs(std::log(traj.times[best]) - target)) best = i;
    }
    chosen.insert(best);
  }

  std::vector<double> xs, ys;
  for (std::size_t i : chosen) {
    xs.push_back(std::log(traj.times[i]));
    ys.push_back(std::log(norm_dar(traj.snapshots[i], 1.0 + r)));
  }
  const double m = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::EmptyWindow, "window collapses to a single time");
  fit.slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (my + fit.slope * (xs[i] - mx));
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / m);
  fit.samples = static_cast<int>(xs.size());
  return fit;
}

HolderReport holder_quotients(const Trajectory& traj, double beta, const Params& params, double tol) {
  if (traj.snapshots.empty()) throw Error(ErrorCode::TooFewRecords, "empty trajectory");
  const int dim = traj.snapshots.front().grid().dim();
  if (dim != 2 || std::abs(params.s - 0.5) > 1e-12) {
    throw Error(ErrorCode::WrongRegime, "critical-case quotients need (dim, s) = (2, 1/2), got (" +
                                            std::to_string(dim) + ", " + std::to_string(params.s) + ")");
  }
  const double T = std::min(1.0, traj.times.back());
  HolderReport report = holder_membership(traj, make_holder_class(1.0, beta, T, tol), params.s);
  report.R = report.min_R;
  const double sups[4] = {report.sup_amplitude, report.sup_smoothing, report.sup_holder, report.sup_holder_smoothing};
  report.member = report.finite;
  for (int i = 0; i < 4; ++i) {
    report.quotients[i] = report.R > 0.0 ? sups[i] / report.R : 0.0;
    report.member = report.member && report.quotients[i] <= tol;
  }
  return report;
}

std::vector<double> spectrum(const SpectralField& u) {
  const auto& grid = u.grid();
  double kmax = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) kmax = std::max(kmax, grid.k2(idx));
  std::vector<double> out(static_cast<std::size_t>(std::floor(std::sqrt(kmax))) + 1, 0.0);
  const double vol = torus_volume(grid.dim());
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    double mag2 = 0.0;
    for (int c = 0; c < u.components(); ++c) mag2 += std::norm(u.at(c, idx));
    out[static_cast<std::size_t>(std::floor(std::sqrt(grid.k2(idx))))] += 0.5 * vol * mag2;
  }
  return out;
}

}  // namespace flans
