#include "doctest.h"

#include "fracns/constants.hpp"
#include "fracns/diagnostics.hpp"
#include "fracns/errors.hpp"
#include "fracns/fourier_transform.hpp"
#include "fracns/initial_data.hpp"
#include "fracns/operators.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <array>
#include <cmath>
#include <random>

using namespace fracns;
using testing_util::l2;
using testing_util::random_field;

TEST_CASE("grid rejects bad shapes") {
  CHECK_THROWS_AS(TorusGrid(1, 8), DomainError);
  CHECK_THROWS_AS(TorusGrid(4, 8), DomainError);
  CHECK_THROWS_AS(TorusGrid(2, 7), DomainError);
  CHECK_THROWS_AS(TorusGrid(2, 2), DomainError);
  CHECK_NOTHROW(TorusGrid(3, 4));
}

TEST_CASE("grid lattice indexing") {
  for (int dim : {2, 3}) {
    const TorusGrid g(dim, 8);
    CHECK(g.size() == (dim == 2 ? 64 : 512));
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const Wavevector k = g.wavevector(i);
      REQUIRE(g.index_of(k).has_value());
      CHECK(*g.index_of(k) == i);
      for (int a = 0; a < dim; ++a) {
        CHECK(k(a) > -4);
        CHECK(k(a) <= 4);
        CHECK(g.wavenumbers()(i, a) == k(a));
      }
      CHECK(g.wavenumber_sq()(i) == doctest::Approx(k.squaredNorm()));
      const bool on_nyquist = (k.array().abs() == 4).any();
      CHECK(static_cast<bool>(g.nyquist()(i)) == on_nyquist);
      if (!on_nyquist) CHECK(g.wavevector(g.conjugate_index()(i)) == Wavevector(-k));
    }
    Wavevector off(dim);
    off.setConstant(5);
    CHECK_FALSE(g.index_of(off).has_value());
  }
  CHECK(TorusGrid(3, 8).lattice_radius() == doctest::Approx(4 * std::sqrt(3.0)));
}

TEST_CASE("spectral field invariants are enforced on construction") {
  const TorusGrid g(2, 8);
  SpectralFieldd::Coeffs c = SpectralFieldd::Coeffs::Zero(g.size(), 2);
  Wavevector k(2);
  k << 1, 2;
  c(*g.index_of(k), 0) = {1.0, 2.0};
  c(0, 1) = {3.0, 0.0};  // zero mode
  Wavevector ny(2);
  ny << 4, 1;
  c(*g.index_of(ny), 0) = {5.0, 0.0};
  const SpectralFieldd u(g, c);
  CHECK(u.at(Wavevector(-k))(0) == std::conj(u.at(k)(0)));
  CHECK(u.coeffs().row(0).abs().maxCoeff() == 0.0);
  CHECK(u.at(ny).norm() == 0.0);
  Wavevector off(2);
  off << 9, 0;
  CHECK_THROWS_AS(u.at(off), IndexError);
  CHECK_THROWS_AS(SpectralFieldd(g, SpectralFieldd::Coeffs::Zero(g.size(), 3)), GridMismatchError);
  CHECK_THROWS_AS(u + SpectralFieldd(TorusGrid(2, 16)), GridMismatchError);
  CHECK(SpectralFieldd(g).is_zero());
  CHECK((u - u).is_zero());
  CHECK(testing_util::max_abs_diff(2.0 * u, u + u) == 0.0);
}

TEST_CASE("fourier transform matches a naive DFT") {
  for (auto [dim, n] : {std::pair{2, 8}, std::pair{3, 4}, std::pair{2, 6}}) {
    const TorusGrid g(dim, n);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    FourierTransform<double>::Column phys(g.size());
    std::vector<std::complex<double>> ref_in(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      phys(i) = {normal(rng), normal(rng)};
      ref_in[i] = phys(i);
    }
    FourierTransform<double> fft(g);
    const auto spec = fft.to_spectral(phys);
    const auto ref = oracle::naive_forward(ref_in, dim, n);
    double err = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) err = std::max(err, std::abs(spec(i) - ref[i]));
    CHECK(err < 1e-14);
    const auto back = fft.to_physical(spec);
    CHECK((back - phys).abs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("Parseval: grid mean square equals the coefficient sum") {
  for (int dim : {2, 3}) {
    const TorusGrid g(dim, dim == 2 ? 32 : 12);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto u = random_field(g, seed, 100.0);
      const double l2sq = std::pow(l2(u), 2);
      CHECK(physical_mean_square(u) == doctest::Approx(l2sq).epsilon(1e-13));
    }
  }
  // single mode a at k = (1,0,0): norm |a| sqrt(2)
  const TorusGrid g(3, 8);
  Wavevector k(3);
  k << 1, 0, 0;
  SpectralFieldd::ModeVector v(3);
  v << 0.0, std::complex<double>(0.3, 0.4), 0.0;
  const auto u = single_mode_field<double>(g, k, v);
  CHECK(l2(u) == doctest::Approx(0.5 * std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("fractional symbol agrees with an extended precision evaluation") {
  const TorusGrid g(3, 16);
  for (double alpha : {0.0, 0.5, 5.0 / 6.0, 0.9, 1.0, 1.1, 1.25, 2.0}) {
    const auto sym = fractional_symbol<double>(g, alpha);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const auto ksq = static_cast<long long>(g.wavenumber_sq()(i));
      const double ref = oracle::fractional_symbol(ksq, alpha);
      if (ksq == 0) {
        CHECK(sym(i) == 0.0);
        continue;
      }
      worst = std::max(worst, std::abs(sym(i) - ref) / ref);
    }
    CHECK(worst < 4e-16);
  }
  Wavevector k(2);
  k << 3, 4;
  CHECK(fractional_symbol<double>(k, 0.5) == 5.0);
  CHECK(fractional_symbol<double>(k, 1.0) == 25.0);
}

TEST_CASE("Leray projection is idempotent, solenoidal and orthogonal") {
  for (int dim : {2, 3}) {
    const TorusGrid g(dim, dim == 2 ? 16 : 8);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto u = random_field(g, 100 + seed, 100.0);
      const auto p = leray_project(u);
      const auto pp = leray_project(p);
      CHECK(testing_util::max_abs_diff(p, pp) <= 1e-15 * l2(u));
      CHECK(divergence_residual(p) <= kDivergenceTol);
      CHECK(std::abs(inner_product(p, u - p)) <= 1e-14 * l2(u) * l2(u));
      CHECK(l2(p) <= l2(u) * (1 + 1e-15));
    }
  }
}

TEST_CASE("Sobolev norms") {
  const TorusGrid g(3, 8);
  Wavevector k(3);
  k << 0, 2, 0;
  SpectralFieldd::ModeVector v(3);
  v << 1.0, 0.0, 0.0;
  const auto u = single_mode_field<double>(g, k, v);
  for (double s : {-1.5, -1.0, 0.0, 0.5, 1.0, 2.5}) {
    CHECK(sobolev_norm(u, s) == doctest::Approx(std::pow(2.0, s) * std::sqrt(2.0)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(sobolev_norm(u, -1.6), DomainError);
  CHECK_NOTHROW(sobolev_norm(SpectralFieldd(TorusGrid(2, 8)), -1.0));
  CHECK_THROWS_AS(sobolev_norm(SpectralFieldd(TorusGrid(2, 8)), -1.01), DomainError);

  const std::array<double, 2> exps{1.0, 2.0};
  const auto ns = norm_set(u, exps);
  CHECK(ns.l2 == doctest::Approx(std::sqrt(2.0)));
  CHECK(ns.at(2.0) == doctest::Approx(4 * std::sqrt(2.0)));
  CHECK_THROWS_AS(ns.at(3.0), IndexError);
}

TEST_CASE("interpolation inequality holds on random fields and is sharp on one shell") {
  const TorusGrid g(3, 8);
  for (int j = 0; j < 9; ++j) {
    const double alpha = 5.0 / 6.0 + j * (1.25 - 5.0 / 6.0) / 8.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto u = random_field(g, seed * 31 + j, 100.0, -1.0 - 0.1 * (seed % 5));
      const auto r = gn_interpolation_check(u, alpha);
      CHECK(r.ratio <= 1.0 + 1e-12);
    }
    Wavevector k(3);
    k << 0, 0, 1;
    SpectralFieldd::ModeVector v(3);
    v << std::complex<double>(0.2, -0.7), 1.0, 0.0;
    const auto shell = single_mode_field<double>(g, k, v);
    CHECK(gn_interpolation_check(shell, alpha).ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto u = random_field(g, 3, 100.0);
  const auto at_upper = gn_interpolation_check(u, 1.25);
  CHECK(at_upper.lhs == doctest::Approx(l2(u)).epsilon(1e-14));
  CHECK(at_upper.ratio == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(gn_interpolation_check(u, 0.8), DomainError);
  CHECK_THROWS_AS(gn_interpolation_check(u, 1.3), DomainError);
  CHECK_THROWS_AS(gn_interpolation_check(SpectralFieldd(g), 1.0), DomainError);
}

TEST_CASE("rescaling multiplies every Sobolev norm by a fixed power") {
  const TorusGrid g(3, 16);
  const auto u = random_field(g, 11, 2.0);
  for (int lambda : {2, 3}) {
    for (double alpha : {5.0 / 6.0, 1.0, 1.25}) {
      const auto v = scale_field(u, lambda, alpha);
      for (double s : {0.0, alpha, 2 * alpha}) {
        const double ratio = sobolev_norm(v, s) / sobolev_norm(u, s);
        CHECK(ratio == doctest::Approx(std::pow(double(lambda), 2 * alpha - 1 + s)).epsilon(1e-12));
      }
      // The criticality quantity scales like lambda^{3/2} for every alpha.
      const double q_u = criticality_quantity(l2(u), sobolev_norm(u, alpha), alpha);
      const double q_v = criticality_quantity(l2(v), sobolev_norm(v, alpha), alpha);
      CHECK(q_v / q_u == doctest::Approx(std::pow(double(lambda), 1.5)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(scale_field(u, 4, 1.0), OverflowError);
  CHECK_THROWS_AS(scale_field(u, 0, 1.0), DomainError);
}

TEST_CASE("regrid keeps shared modes") {
  const TorusGrid small(2, 16);
  const TorusGrid big(2, 32);
  const auto u = random_field(small, 5, 6.0);
  const auto up = regrid(u, big);
  CHECK(l2(up) == doctest::Approx(l2(u)).epsilon(1e-15));
  const auto down = regrid(up, small);
  CHECK(testing_util::max_abs_diff(down, u) == 0.0);
  CHECK_THROWS_AS(regrid(u, TorusGrid(3, 16)), GridMismatchError);
}

TEST_CASE("initial data") {
  const TorusGrid g2(2, 16);
  const auto tg = taylor_green(g2, 2.0);
  CHECK(divergence_residual(tg) <= kDivergenceTol);
  CHECK(std::pow(l2(tg), 2) == doctest::Approx(2.0).epsilon(1e-15));  // A^2/2
  const TorusGrid g3(3, 8);
  const auto tg3 = taylor_green(g3, 1.0);
  CHECK(divergence_residual(tg3) <= kDivergenceTol);
  CHECK(std::pow(l2(tg3), 2) == doctest::Approx(0.25).epsilon(1e-15));  // A^2/4
  CHECK(std::pow(sobolev_norm(tg3, 1.0), 2) == doctest::Approx(0.75).epsilon(1e-15));

  const auto r1 = random_divfree_field(g3, -2.0, 42);
  const auto r2 = random_divfree_field(g3, -2.0, 42);
  const auto r3 = random_divfree_field(g3, -2.0, 43);
  CHECK(testing_util::max_abs_diff(r1, r2) == 0.0);
  CHECK(testing_util::max_abs_diff(r1, r3) > 0.0);
  CHECK(l2(r1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(divergence_residual(r1) <= kDivergenceTol);
  const auto band = random_divfree_field(g3, 0.0, 1, 2.0);
  for (Eigen::Index i = 0; i < g3.size(); ++i) {
    if (g3.wavenumber_sq()(i) > 4.0) CHECK(band.coeffs().row(i).abs().maxCoeff() == 0.0);
  }
}
