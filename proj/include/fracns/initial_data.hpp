#pragma once

#include "fracns/operators.hpp"
#include "fracns/spectral_field.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace fracns {

/// Classical Taylor-Green vortex.
///   2D: u = A (sin x cos y, -cos x sin y),          modes |k|^2 = 2
///   3D: u = A (sin x cos y cos z, -cos x sin y cos z, 0), modes |k|^2 = 3
template <typename Scalar = double>
SpectralField<Scalar> taylor_green(const TorusGrid& grid, Scalar amplitude = Scalar(1)) {
  using Complex = std::complex<Scalar>;
  using Coeffs = typename SpectralField<Scalar>::Coeffs;
  Coeffs c = Coeffs::Zero(grid.size(), grid.dim());
  const Scalar weight = grid.dim() == 2 ? Scalar(0.25) : Scalar(0.125);
  const int zsigns = grid.dim() == 2 ? 1 : 2;
  for (int sx : {-1, 1}) {
    for (int sy : {-1, 1}) {
      for (int iz = 0; iz < zsigns; ++iz) {
        Wavevector k(grid.dim());
        k(0) = sx;
        k(1) = sy;
        if (grid.dim() == 3) k(2) = iz == 0 ? -1 : 1;
        const auto idx = *grid.index_of(k);
        c(idx, 0) = Complex(0, -weight * sx) * amplitude;
        c(idx, 1) = Complex(0, weight * sy) * amplitude;
      }
    }
  }
  return SpectralField<Scalar>(grid, std::move(c));
}

/// Places `value` at k and its conjugate at -k. No projection is applied.
template <typename Scalar>
SpectralField<Scalar> single_mode_field(const TorusGrid& grid, const Wavevector& k,
                                        const typename SpectralField<Scalar>::ModeVector& value) {
  using Coeffs = typename SpectralField<Scalar>::Coeffs;
  Coeffs c = Coeffs::Zero(grid.size(), grid.dim());
  const auto idx = grid.index_of(k);
  const auto neg = grid.index_of(Wavevector(-k));
  if (!idx || !neg) throw IndexError("single_mode_field: wavevector outside lattice");
  c.row(*idx) = value.transpose().array();
  c.row(*neg) = value.transpose().array().conjugate();
  return SpectralField<Scalar>(grid, std::move(c));
}

/// Random solenoidal field with |c(k)| ~ |k|^slope on 0 < |k| <= kmax,
/// normalised to unit L2 norm. Deterministic in `seed`.
template <typename Scalar = double>
SpectralField<Scalar> random_divfree_field(const TorusGrid& grid, double slope, std::uint64_t seed,
                                           double kmax = std::numeric_limits<double>::infinity()) {
  using Complex = std::complex<Scalar>;
  using Coeffs = typename SpectralField<Scalar>::Coeffs;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Coeffs c = Coeffs::Zero(grid.size(), grid.dim());
  const auto& ksq = grid.wavenumber_sq();
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (grid.nyquist()(i) || ksq(i) == 0.0 || ksq(i) > kmax * kmax) continue;
    const double amp = std::pow(ksq(i), 0.5 * slope);
    for (int a = 0; a < grid.dim(); ++a) {
      const double re = normal(rng);
      const double im = normal(rng);
      c(i, a) = Complex(static_cast<Scalar>(amp * re), static_cast<Scalar>(amp * im));
    }
  }
  SpectralField<Scalar> field(grid, leray_project<Scalar>(grid, std::move(c)));
  const Scalar norm = sobolev_norm<Scalar>(field, Scalar(0));
  if (norm == Scalar(0)) return field;
  return (Scalar(1) / norm) * field;
}

}  // namespace fracns
