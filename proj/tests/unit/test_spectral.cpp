#include <random>

#include "../support/oracles.hpp"
#include "helpers.hpp"

using namespace flans;
using namespace testing_util;

TEST_SUITE("spectral_core") {

TEST_CASE("make_grid builds the wavevector table") {
  const auto g = make_grid(2, 8);
  CHECK(g.size() == 64);
  int lo = 100, hi = -100;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (int a = 0; a < 2; ++a) {
      lo = std::min(lo, g.wavevector(i)[a]);
      hi = std::max(hi, g.wavevector(i)[a]);
    }
  }
  CHECK(lo == -4);
  CHECK(hi == 3);
  CHECK(make_grid(3, 16).size() == 4096);

  CHECK(code_of([] { make_grid(2, 7); }) == ErrorCode::OddN);
  CHECK(code_of([] { make_grid(2, 6); }) == ErrorCode::TooSmallN);
  CHECK(code_of([] { make_grid(4, 8); }) == ErrorCode::BadDim);
}

TEST_CASE("mirror and index_of are consistent") {
  const auto g = make_grid(3, 8);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto k = g.wavevector(i);
    CHECK(g.index_of(k) == i);
    const auto m = g.wavevector(g.mirror(i));
    for (int a = 0; a < 3; ++a) CHECK(((m[a] + k[a]) % 8 + 8) % 8 == 0);
  }
}

TEST_CASE("params infer the hypothesis regime") {
  CHECK(infer_regime(2, 0.5) == Regime::GlobalRange);
  CHECK(infer_regime(3, 0.6) == Regime::LocalRange);
  CHECK(infer_regime(3, 0.75) == Regime::GlobalRange);
  CHECK(infer_regime(2, 0.3) == Regime::Unrestricted);
  CHECK(code_of([] { make_params(2, 0.5, 0.1, 0.4, Regime::GlobalRange); }) == ErrorCode::BadParams);
  CHECK(code_of([] { make_params(2, 0.5, 0.0, 0.5); }) == ErrorCode::BadParams);
  CHECK(code_of([] { make_params(2, 0.5, 0.1, 1.0); }) == ErrorCode::BadParams);
}

TEST_CASE("a single imaginary mode is sin y") {
  const auto g = make_grid(2, 16);
  const auto u = shear(g);
  const auto phys = to_physical(u);
  double worst = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const auto x = oracle::point(g, p);
    worst = std::max(worst, std::abs(phys.component(0)[p] - std::sin(x[1])));
    worst = std::max(worst, std::abs(phys.component(1)[p]));
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("forward transform matches the defining sum") {
  for (int dim : {2, 3}) {
    const auto g = make_grid(dim, 8);
    const auto fn = [](double x, double y, double z) {
      return oracle::Vec3{std::sin(x + 2 * y) + 0.3 * std::cos(3 * z - x), std::exp(std::cos(y)) * std::sin(z + x),
                          std::cos(x) * std::cos(2 * y)};
    };
    const auto expected = oracle::field_from(g, fn);
    PhysicalField phys(g, dim);
    const auto samples = oracle::sample(g, fn);
    for (int c = 0; c < dim; ++c) std::copy(samples[c].begin(), samples[c].end(), phys.component(c).begin());
    const auto got = to_spectral(phys, g);
    CHECK(oracle::coeff_max_diff(got, expected) < 1e-14);
  }
}

TEST_CASE("inverse transform matches pointwise series evaluation") {
  const auto g = make_grid(2, 12);
  const auto u = random_field(g, 3);
  const auto phys = to_physical(u);
  const auto ref = oracle::physical(u);
  double worst = 0.0;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t p = 0; p < g.size(); ++p) worst = std::max(worst, std::abs(phys.component(c)[p] - ref[c][p]));
  }
  CHECK(worst < 1e-13);
}

TEST_CASE("round trip and Parseval on random fields") {
  for (int dim : {2, 3}) {
    const auto g = make_grid(dim, dim == 2 ? 32 : 16);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto u = random_general(g, seed);
      const auto phys = to_physical(u);
      const auto back = to_spectral(phys, g);
      double scale = 0.0;
      for (const auto& c : u.coeffs()) scale = std::max(scale, std::abs(c));
      CHECK(oracle::coeff_max_diff(back, u) <= 1e-12 * scale);
      const double coeff = std::sqrt(oracle::l2_squared(u));
      CHECK(std::abs(physical_l2_norm(phys) - coeff) <= 1e-12 * coeff);
      CHECK(std::abs(l2_norm(u) - coeff) <= 1e-13 * coeff);
    }
  }
}

TEST_CASE("Parseval on the shear flow") {
  const auto g = make_grid(2, 16);
  const auto u = shear(g);
  // integral of sin^2 y over the torus is 2 pi^2
  CHECK(physical_l2_norm(to_physical(u)) == doctest::Approx(kPi * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(l2_norm(u) == doctest::Approx(kPi * std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("transform contract errors") {
  const auto g = make_grid(2, 8);
  PhysicalField wrong(make_grid(2, 16), 2);
  CHECK(code_of([&] { to_spectral(wrong, g); }) == ErrorCode::ShapeMismatch);
  SpectralField u(g);
  u.at(0, 1) = {1.0, 0.0};
  u.flags() = detect_flags(u);
  CHECK_FALSE(u.flags().hermitian);
  CHECK(code_of([&] { to_physical(u); }) == ErrorCode::NotHermitian);
}

TEST_CASE("leray projection") {
  const auto g = make_grid(2, 16);
  SUBCASE("kills gradients") {
    SpectralField grad(g);
    const auto phi = random_general(g, 11);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto& k = g.wavevector(i);
      for (int c = 0; c < 2; ++c) grad.at(c, i) = Complex(0.0, k[c]) * phi.at(0, i);
    }
    const auto p = leray_project(grad);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g.k2(i) == 0.0) continue;
      for (int c = 0; c < 2; ++c) CHECK(std::abs(p.at(c, i)) < 1e-15);
    }
  }
  SUBCASE("solenoidal fields are unchanged") {
    const auto u = random_field(g, 5);
    CHECK(oracle::coeff_max_diff(leray_project(u), u) < 1e-14);
  }
  SUBCASE("compressive mode vanishes") {
    SpectralField u(g);
    u.at(1, g.index_of({0, 2, 0})) = 1.0;
    u.at(1, g.index_of({0, -2, 0})) = 1.0;
    const auto p = leray_project(u);
    for (const auto& c : p.coeffs()) CHECK(std::abs(c) == 0.0);
  }
  SUBCASE("orthogonal projection: idempotent and self-adjoint") {
    const auto a = random_general(g, 21);
    const auto b = random_general(g, 22);
    const auto pa = leray_project(a);
    CHECK(oracle::coeff_max_diff(leray_project(pa), pa) < 1e-12);
    const double lhs = inner(pa, b);
    const double rhs = inner(a, leray_project(b));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
    CHECK(divergence_defect(pa) < 1e-14);
  }
  SUBCASE("commutes with the diagonal multipliers") {
    const auto a = random_general(g, 23);
    const auto p = make_params(2, 0.7, 0.3, 0.6);
    CHECK(oracle::coeff_max_diff(leray_project(frac_stokes_apply(a, 0.4)),
                                 frac_stokes_apply(leray_project(a), 0.4)) < 1e-13);
    CHECK(oracle::coeff_max_diff(leray_project(helmholtz_inverse(a, 0.7)),
                                 helmholtz_inverse(leray_project(a), 0.7)) < 1e-13);
    CHECK(oracle::coeff_max_diff(leray_project(semigroup_apply(a, 0.5, p)),
                                 semigroup_apply(leray_project(a), 0.5, p)) < 1e-13);
  }
}

TEST_CASE("fractional Stokes powers") {
  const auto g = make_grid(2, 16);
  const auto u = shear(g);
  for (double s : {0.1, 0.5, 0.75, 0.99}) CHECK(oracle::coeff_max_diff(frac_stokes_apply(u, s), u) < 1e-15);

  SpectralField m(g);
  m.at(0, g.index_of({0, 2, 0})) = {0.0, -0.5};
  m.at(0, g.index_of({0, -2, 0})) = {0.0, 0.5};
  m.flags() = {true, true, true};
  CHECK(oracle::coeff_max_diff(frac_stokes_apply(m, 0.5), 2.0 * m) < 1e-15);

  const auto r = random_field(g, 9);
  const auto two_step = frac_stokes_apply(frac_stokes_apply(r, 0.3), 0.45);
  const auto one_step = frac_stokes_apply(r, 0.75);
  double scale = 0.0;
  for (const auto& c : one_step.coeffs()) scale = std::max(scale, std::abs(c));
  CHECK(oracle::coeff_max_diff(two_step, one_step) <= 1e-12 * scale);

  // symbol agrees with the direct power
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.k2(i) == 0.0) {
      CHECK(stokes_power_symbol(g.k2(i), 0.3) == 0.0);
      continue;
    }
    CHECK(stokes_power_symbol(g.k2(i), 0.3) == doctest::Approx(std::pow(std::sqrt(g.k2(i)), 0.6)).epsilon(1e-14));
  }

  SpectralField with_mean = r;
  with_mean.at(0, 0) = 1.0;
  CHECK(code_of([&] { frac_stokes_apply(with_mean, -0.5); }) == ErrorCode::NegativePowerOnMean);
  CHECK(oracle::coeff_max_diff(frac_stokes_apply(frac_stokes_apply(r, -0.5), 0.5), r) < 1e-15);
}

TEST_CASE("Helmholtz inverse") {
  const auto g = make_grid(2, 16);
  SpectralField m(g);
  m.at(0, g.index_of({0, 2, 0})) = {0.0, -0.5};
  m.at(0, g.index_of({0, -2, 0})) = {0.0, 0.5};
  const double alpha = 0.7;
  CHECK(oracle::coeff_max_diff(helmholtz_inverse(m, alpha), (1.0 / (1.0 + 4.0 * alpha * alpha)) * m) < 1e-16);
  const auto r = random_general(g, 4);
  CHECK(oracle::coeff_max_diff(helmholtz_inverse(r, 0.0), r) == 0.0);
  CHECK(oracle::coeff_max_diff(helmholtz_inverse(helmholtz_apply(r, alpha), alpha), r) < 1e-12);
}

TEST_CASE("semigroup") {
  const auto g = make_grid(2, 16);
  const auto p = make_params(2, 0.5, 0.3, 0.6);
  const auto r = random_field(g, 17);
  CHECK(oracle::coeff_max_diff(semigroup_apply(r, 0.0, p), r) == 0.0);
  const auto u = shear(g);
  CHECK(oracle::coeff_max_diff(semigroup_apply(u, 2.0, p), std::exp(-0.6) * u) < 1e-16);
  const auto two = semigroup_apply(semigroup_apply(r, 0.3, p), 0.7, p);
  const auto one = semigroup_apply(r, 1.0, p);
  CHECK(oracle::coeff_max_diff(two, one) <= 1e-13);
  CHECK(code_of([&] { semigroup_apply(r, -1e-3, p); }) == ErrorCode::NegativeTime);

  SUBCASE("contraction and smoothing bounds") {
    for (double t : {1e-3, 1e-2, 0.1, 1.0}) {
      const auto e = semigroup_apply(r, t, p);
      CHECK(l2_norm(e) <= l2_norm(r));
      for (double sigma : {0.25, 0.5, 1.0}) {
        const double c = std::pow(sigma / (std::numbers::e * p.s), sigma / p.s);
        const double bound = c * std::pow(p.nu * t, -sigma / p.s) * l2_norm(r);
        CHECK(l2_norm(frac_stokes_apply(e, sigma)) <= bound * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("D(A^r) norms") {
  const auto g = make_grid(2, 16);
  const auto u = shear(g);
  CHECK(norm_dar(u, 1.0) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
  CHECK(norm_dar(u, 0.0) == doctest::Approx(kPi * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(norm_dar(SpectralField(g), 1.0) == 0.0);
  const auto r = random_field(g, 31);
  double prev = 0.0;
  for (double order = 0.0; order <= 2.0; order += 0.125) {
    const double n = norm_dar(r, order);
    CHECK(n == doctest::Approx(oracle::dar_norm(r, order)).epsilon(1e-12));
    if (order > 0.0) CHECK(n >= prev);
    prev = n;
  }
}

TEST_CASE("dealiasing") {
  const auto g = make_grid(2, 12);
  SpectralField u(g);
  const auto k4 = g.index_of({4, 0, 0});
  const auto k3 = g.index_of({3, 0, 0});
  u.at(1, k4) = 1.0;
  u.at(1, g.mirror(k4)) = 1.0;
  u.at(1, k3) = 1.0;
  u.at(1, g.mirror(k3)) = 1.0;
  const auto d = dealias(u);
  CHECK(d.at(1, k4) == Complex(0.0));
  CHECK(d.at(1, k3) == Complex(1.0));
  CHECK(oracle::coeff_max_diff(dealias(d), d) == 0.0);

  const auto band = random_field(make_grid(2, 32), 2);
  CHECK(oracle::coeff_max_diff(dealias(band), band) == 0.0);
}

TEST_CASE("random solenoidal fields are grid independent") {
  const auto small = make_grid(2, 16);
  const auto large = make_grid(2, 64);
  const auto a = random_field(small, 42, 2.0, 4);
  const auto b = random_field(large, 42, 2.0, 4);
  CHECK(oracle::coeff_max_diff(resample(a, large), b) == 0.0);
  CHECK(check_flags(a));
  CHECK(divergence_defect(a) < 1e-15);
  CHECK(code_of([&] { random_field(small, 1, 2.0, 8); }) == ErrorCode::BadParams);
}

TEST_CASE("field arithmetic checks grids") {
  SpectralField a(make_grid(2, 8));
  SpectralField b(make_grid(2, 16));
  CHECK(code_of([&] { a += b; }) == ErrorCode::GridMismatch);
}

}
