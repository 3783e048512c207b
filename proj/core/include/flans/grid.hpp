#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace flans {

/// Per-mode wavevector table for a torus grid. Entries are indexed by the flat
/// row-major mode index (axis 0 outermost), FFT-standard ordering per axis.
struct WaveTable {
  std::vector<std::array<int, 3>> k;  // unused trailing axes are 0
  std::vector<double> k2;             // |k|^2
  std::vector<std::size_t> mirror;    // flat index of -k (mod N)
};

/// Discretization of the 2*pi-periodic torus [0, 2*pi)^dim with N points per axis.
class GridSpec {
 public:
  GridSpec() = default;

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return size_; }  // N^dim, per component
  double spacing() const noexcept;                     // 2*pi / N

  const std::array<int, 3>& wavevector(std::size_t idx) const { return table_->k[idx]; }
  double k2(std::size_t idx) const { return table_->k2[idx]; }
  std::size_t mirror(std::size_t idx) const { return table_->mirror[idx]; }
  const WaveTable& table() const { return *table_; }

  /// Flat index of the mode with the given integer wavevector; components
  /// are reduced modulo N.
  std::size_t index_of(const std::array<int, 3>& k) const noexcept;

  /// Largest |k_i| retained by the 2/3 rule: |k_i| < N/3.
  int dealias_limit() const noexcept { return (n_ - 1) / 3; }

  friend bool operator==(const GridSpec& a, const GridSpec& b) noexcept {
    return a.dim_ == b.dim_ && a.n_ == b.n_;
  }

 private:
  friend GridSpec make_grid(int dim, int n);

  int dim_ = 0;
  int n_ = 0;
  std::size_t size_ = 0;
  std::shared_ptr<const WaveTable> table_;
};

/// Validates dim in {2,3} and even N >= 8. Throws Error{BadDim, OddN, TooSmallN}.
GridSpec make_grid(int dim, int n);

/// Maps a per-axis FFT index j in [0, N) to its signed wavenumber in [-N/2, N/2).
constexpr int wavenumber(int j, int n) noexcept { return j < n / 2 ? j : j - n; }

enum class Regime { GlobalRange, LocalRange, Unrestricted };

struct Params {
  double alpha = 0.0;
  double nu = 1.0;
  double s = 0.5;
  Regime regime = Regime::Unrestricted;
};

/// GlobalRange when s >= dim/4, LocalRange when s >= 1/2, otherwise Unrestricted.
Regime infer_regime(int dim, double s) noexcept;

/// Checks alpha >= 0, nu > 0, s in (0,1) and that the requested regime's
/// hypotheses hold for (dim, s). Throws Error{BadParams}.
Params make_params(int dim, double alpha, double nu, double s, Regime regime);

/// Same as above with the regime inferred from (dim, s).
Params make_params(int dim, double alpha, double nu, double s);

const char* to_string(Regime regime) noexcept;

}  // namespace flans
