#include "flans/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "flans/error.hpp"

namespace flans {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BadDim: return "BadDim";
    case ErrorCode::OddN: return "OddN";
    case ErrorCode::TooSmallN: return "TooSmallN";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NegativePowerOnMean: return "NegativePowerOnMean";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::InconsistentPair: return "InconsistentPair";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::NoContraction: return "NoContraction";
    case ErrorCode::EmptyMesh: return "EmptyMesh";
    case ErrorCode::BadEvalTime: return "BadEvalTime";
    case ErrorCode::TooFewRecords: return "TooFewRecords";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::WrongRegime: return "WrongRegime";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::BadValue: return "BadValue";
    case ErrorCode::RegimeViolation: return "RegimeViolation";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptPayload: return "CorruptPayload";
    case ErrorCode::EmptyOutput: return "EmptyOutput";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

double GridSpec::spacing() const noexcept { return 2.0 * std::numbers::pi / n_; }

std::size_t GridSpec::index_of(const std::array<int, 3>& k) const noexcept {
  std::size_t idx = 0;
  for (int a = 0; a < dim_; ++a) {
    int j = k[a] % n_;
    if (j < 0) j += n_;
    idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }
  return idx;
}

GridSpec make_grid(int dim, int n) {
  if (dim != 2 && dim != 3) throw Error(ErrorCode::BadDim, "dim must be 2 or 3, got " + std::to_string(dim));
  if (n % 2 != 0) throw Error(ErrorCode::OddN, "modes per axis must be even, got " + std::to_string(n));
  if (n < 8) throw Error(ErrorCode::TooSmallN, "modes per axis must be >= 8, got " + std::to_string(n));

  GridSpec g;
  g.dim_ = dim;
  g.n_ = n;
  g.size_ = 1;
  for (int a = 0; a < dim; ++a) g.size_ *= static_cast<std::size_t>(n);

  auto table = std::make_shared<WaveTable>();
  table->k.resize(g.size_);
  table->k2.resize(g.size_);
  table->mirror.resize(g.size_);
  for (std::size_t idx = 0; idx < g.size_; ++idx) {
    std::array<int, 3> k{0, 0, 0};
    std::size_t rem = idx;
    for (int a = dim - 1; a >= 0; --a) {
      k[a] = wavenumber(static_cast<int>(rem % n), n);
      rem /= n;
    }
    table->k[idx] = k;
    table->k2[idx] = static_cast<double>(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    table->mirror[idx] = g.index_of({-k[0], -k[1], -k[2]});
  }
  g.table_ = std::move(table);
  return g;
}

Regime infer_regime(int dim, double s) noexcept {
  if (s >= dim / 4.0 && s < 1.0) return Regime::GlobalRange;
  if (s >= 0.5 && s < 1.0) return Regime::LocalRange;
  return Regime::Unrestricted;
}

Params make_params(int dim, double alpha, double nu, double s, Regime regime) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::BadParams, "alpha must be >= 0");
  if (!(nu > 0.0) || !std::isfinite(nu)) throw Error(ErrorCode::BadParams, "nu must be > 0");
  if (!(s > 0.0 && s < 1.0)) throw Error(ErrorCode::BadParams, "s must lie in (0,1)");
  switch (regime) {
    case Regime::GlobalRange:
      if (s < dim / 4.0)
        throw Error(ErrorCode::BadParams, "GlobalRange requires s >= dim/4 (s=" + std::to_string(s) + ")");
      break;
    case Regime::LocalRange:
      if (s < 0.5) throw Error(ErrorCode::BadParams, "LocalRange requires s >= 1/2");
      break;
    case Regime::Unrestricted:
      break;
  }
  return Params{alpha, nu, s, regime};
}

Params make_params(int dim, double alpha, double nu, double s) {
  return make_params(dim, alpha, nu, s, infer_regime(dim, s));
}

const char* to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::GlobalRange: return "GlobalRange";
    case Regime::LocalRange: return "LocalRange";
    case Regime::Unrestricted: return "Unrestricted";
  }
  return "Unknown";
}

}  // namespace flans
