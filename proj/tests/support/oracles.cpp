#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::array<int, 3> multi_index(const flans::GridSpec& grid, std::size_t p) {
  std::array<int, 3> j{0, 0, 0};
  const int n = grid.n();
  for (int a = grid.dim() - 1; a >= 0; --a) {
    j[a] = static_cast<int>(p % n);
    p /= n;
  }
  return j;
}

std::size_t flat(const flans::GridSpec& grid, const std::array<int, 3>& j) {
  std::size_t p = 0;
  for (int a = 0; a < grid.dim(); ++a) p = p * grid.n() + static_cast<std::size_t>(j[a]);
  return p;
}

}  // namespace

Vec3 point(const flans::GridSpec& grid, std::size_t p) {
  const auto j = multi_index(grid, p);
  const double h = kTwoPi / grid.n();
  return {j[0] * h, j[1] * h, j[2] * h};
}

Samples sample(const flans::GridSpec& grid, const VectorFn& fn) {
  Samples out(grid.dim(), std::vector<double>(grid.size()));
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto x = point(grid, p);
    const auto v = fn(x[0], x[1], x[2]);
    for (int c = 0; c < grid.dim(); ++c) out[c][p] = v[c];
  }
  return out;
}

std::vector<std::complex<double>> naive_dft(const flans::GridSpec& grid, const std::vector<double>& values) {
  std::vector<std::complex<double>> out(grid.size());
  const double norm = 1.0 / static_cast<double>(grid.size());
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const auto& k = grid.wavevector(idx);
    std::complex<long double> acc = 0.0;
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const auto x = point(grid, p);
      long double phase = 0.0;
      for (int a = 0; a < grid.dim(); ++a) phase -= static_cast<long double>(k[a]) * x[a];
      acc += static_cast<long double>(values[p]) * std::complex<long double>(std::cos(phase), std::sin(phase));
    }
    out[idx] = {static_cast<double>(acc.real()) * norm, static_cast<double>(acc.imag()) * norm};
  }
  return out;
}

Vec3 evaluate(const flans::SpectralField& field, const Vec3& x) {
  const auto& grid = field.grid();
  Vec3 out{0.0, 0.0, 0.0};
  for (int c = 0; c < field.components(); ++c) {
    long double acc = 0.0;
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
      const auto& k = grid.wavevector(idx);
      long double phase = 0.0;
      for (int a = 0; a < grid.dim(); ++a) phase += static_cast<long double>(k[a]) * x[a];
      const auto v = field.at(c, idx);
      acc += v.real() * std::cos(phase) - v.imag() * std::sin(phase);
    }
    out[c] = static_cast<double>(acc);
  }
  return out;
}

flans::SpectralField field_from(const flans::GridSpec& grid, const VectorFn& fn) {
  const auto values = sample(grid, fn);
  std::vector<std::complex<double>> coeffs;
  for (int c = 0; c < grid.dim(); ++c) {
    const auto comp = naive_dft(grid, values[c]);
    coeffs.insert(coeffs.end(), comp.begin(), comp.end());
  }
  return flans::SpectralField(grid, std::move(coeffs), flans::FieldFlags{true, false, false});
}

Samples physical(const flans::SpectralField& field) {
  const auto& grid = field.grid();
  Samples out(grid.dim(), std::vector<double>(grid.size()));
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto v = evaluate(field, point(grid, p));
    for (int c = 0; c < grid.dim(); ++c) out[c][p] = v[c];
  }
  return out;
}

std::vector<double> fd_derivative(const flans::GridSpec& grid, const std::vector<double>& f, int axis) {
  const int n = grid.n();
  const double h = kTwoPi / n;
  std::vector<double> out(f.size());
  for (std::size_t p = 0; p < f.size(); ++p) {
    auto plus = multi_index(grid, p);
    auto minus = plus;
    plus[axis] = (plus[axis] + 1) % n;
    minus[axis] = (minus[axis] + n - 1) % n;
    out[p] = (f[flat(grid, plus)] - f[flat(grid, minus)]) / (2.0 * h);
  }
  return out;
}

std::vector<Samples> fd_gradient(const flans::GridSpec& grid, const Samples& u) {
  const int d = grid.dim();
  std::vector<Samples> g(d, Samples(d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g[i][j] = fd_derivative(grid, u[i], j);
  }
  return g;
}

Samples fd_advect(const flans::GridSpec& grid, const Samples& u1, const Samples& u2) {
  const int d = grid.dim();
  const auto g = fd_gradient(grid, u2);
  Samples out(d, std::vector<double>(grid.size(), 0.0));
  for (std::size_t p = 0; p < grid.size(); ++p) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) out[i][p] += u1[j][p] * g[i][j][p];
    }
  }
  return out;
}

Samples fd_div_stress(const flans::GridSpec& grid, const Samples& u1, const Samples& u2) {
  const int d = grid.dim();
  const auto g1 = fd_gradient(grid, u1);
  const auto g2 = fd_gradient(grid, u2);
  // Pointwise matrix products written out as matrices.
  std::vector<Samples> t(d, Samples(d, std::vector<double>(grid.size(), 0.0)));
  for (std::size_t p = 0; p < grid.size(); ++p) {
    double a[3][3] = {}, b[3][3] = {};
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        a[i][j] = g1[i][j][p];
        b[i][j] = g2[i][j][p];
      }
    }
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        double a_bt = 0.0, a_b = 0.0, at_b = 0.0;
        for (int m = 0; m < d; ++m) {
          a_bt += a[i][m] * b[j][m];
          a_b += a[i][m] * b[m][j];
          at_b += a[m][i] * b[m][j];
        }
        t[i][j][p] = a_bt + a_b - at_b;
      }
    }
  }
  Samples out(d, std::vector<double>(grid.size(), 0.0));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const auto dj = fd_derivative(grid, t[i][j], j);
      for (std::size_t p = 0; p < grid.size(); ++p) out[i][p] += dj[p];
    }
  }
  return out;
}

double max_abs_diff(const Samples& a, const Samples& b) {
  double m = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    for (std::size_t p = 0; p < a[c].size(); ++p) m = std::max(m, std::abs(a[c][p] - b[c][p]));
  }
  return m;
}

double max_abs(const Samples& a) {
  double m = 0.0;
  for (const auto& comp : a) {
    for (double v : comp) m = std::max(m, std::abs(v));
  }
  return m;
}

double l2_squared(const flans::SpectralField& f) {
  long double sum = 0.0;
  for (const auto& c : f.coeffs()) sum += std::norm(c);
  return static_cast<double>(sum) * std::pow(kTwoPi, f.grid().dim());
}

double dar_norm(const flans::SpectralField& f, double r) {
  const auto& grid = f.grid();
  long double top = 0.0, base = 0.0;
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const auto& k = grid.wavevector(idx);
    double k2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) k2 += static_cast<double>(k[a]) * k[a];
    double mag2 = 0.0;
    for (int c = 0; c < f.components(); ++c) mag2 += std::norm(f.at(c, idx));
    base += mag2;
    if (k2 > 0.0) top += std::pow(k2, 2.0 * r) * mag2;
  }
  const double vol = std::pow(kTwoPi, grid.dim());
  return std::sqrt(vol * static_cast<double>(top + (r > 0.0 ? base : 0.0L)));
}

double coeff_max_diff(const flans::SpectralField& a, const flans::SpectralField& b) {
  double m = 0.0;
  const auto ca = a.coeffs();
  const auto cb = b.coeffs();
  for (std::size_t i = 0; i < ca.size(); ++i) m = std::max(m, std::abs(ca[i] - cb[i]));
  return m;
}

std::pair<long double, long double> phi_series(long double z) {
  // phi_1 = sum z^j / (j+1)!, phi_2 = sum z^j / (j+2)!
  long double p1 = 0.0L, p2 = 0.0L;
  long double term1 = 1.0L, term2 = 0.5L;
  for (int j = 0; j < 40; ++j) {
    p1 += term1;
    p2 += term2;
    term1 *= z / (j + 2);
    term2 *= z / (j + 3);
  }
  return {p1, p2};
}

}  // namespace oracle
