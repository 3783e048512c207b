#pragma once

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "flans/error.hpp"
#include "flans/field.hpp"
#include "flans/grid.hpp"
#include "flans/spectral.hpp"

namespace testing_util {

inline constexpr double kPi = std::numbers::pi;

// Single-mode shear u = amp * (sin y, 0[, 0]).
inline flans::SpectralField shear(const flans::GridSpec& g, double amp = 1.0) {
  flans::SpectralField u(g);
  std::array<int, 3> k{0, 1, 0};
  u.at(0, g.index_of(k)) = {0.0, -0.5 * amp};
  k[1] = -1;
  u.at(0, g.index_of(k)) = {0.0, 0.5 * amp};
  u.flags() = {true, true, true};
  return u;
}

inline flans::SpectralField random_field(const flans::GridSpec& g, std::uint64_t seed, double decay = 2.0,
                                         int band = -1) {
  return flans::random_solenoidal(g, flans::RandomSpectrum{decay, seed, band});
}

// Hermitian but neither solenoidal nor zero-mean.
inline flans::SpectralField random_general(const flans::GridSpec& g, std::uint64_t seed) {
  flans::SpectralField u(g);
  std::uint64_t state = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  auto next = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) / static_cast<double>(1ULL << 53) - 0.5;
  };
  for (auto& c : u.coeffs()) c = {next(), next()};
  flans::symmetrize(u);
  u.flags() = flans::detect_flags(u);
  return u;
}

template <class F>
flans::ErrorCode code_of(F&& fn) {
  try {
    fn();
  } catch (const flans::Error& e) {
    return e.code();
  }
  FAIL("expected flans::Error");
  return flans::ErrorCode::Io;
}

}  // namespace testing_util
