#pragma once

#include "fracns/constants.hpp"
#include "fracns/errors.hpp"
#include "fracns/fourier_transform.hpp"
#include "fracns/spectral_field.hpp"

#include <Eigen/Core>

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fracns {

/// Symbol of the fractional Laplacian (-Δ)^alpha: |k|^{2 alpha}, and 0 at k = 0
/// for every alpha (the zero mode is never populated).
template <typename Scalar = double>
Scalar fractional_symbol(const Wavevector& k, Scalar alpha) {
  const Scalar ksq = static_cast<Scalar>(k.squaredNorm());
  if (ksq == Scalar(0)) return Scalar(0);
  using std::pow;
  return pow(ksq, alpha);
}

/// |k|^{2 alpha} for every mode of the grid, with 0 at k = 0.
template <typename Scalar = double>
Eigen::Array<Scalar, Eigen::Dynamic, 1> fractional_symbol(const TorusGrid& grid, Scalar alpha) {
  const auto& ksq = grid.wavenumber_sq();
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(grid.size());
  using std::pow;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    out(i) = ksq(i) == 0.0 ? Scalar(0) : pow(static_cast<Scalar>(ksq(i)), alpha);
  }
  return out;
}

/// Real L2 inner product sum_k Re(f(k) conj(g(k))).
template <typename Scalar>
Scalar inner_product(const SpectralField<Scalar>& f, const SpectralField<Scalar>& g) {
  SpectralField<Scalar>::check_same_grid(f, g);
  return (f.coeffs() * g.coeffs().conjugate()).real().sum();
}

/// Leray projection onto solenoidal fields: c(k) - k (k.c(k)) / |k|^2.
template <typename Scalar>
typename SpectralField<Scalar>::Coeffs leray_project(const TorusGrid& grid,
                                                     typename SpectralField<Scalar>::Coeffs coeffs) {
  using Complex = std::complex<Scalar>;
  const auto& kk = grid.wavenumbers();
  const auto& ksq = grid.wavenumber_sq();
  const int dim = grid.dim();
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (ksq(i) == 0.0) {
      coeffs.row(i).setZero();
      continue;
    }
    Complex kdotc(0);
    for (int a = 0; a < dim; ++a) kdotc += static_cast<Scalar>(kk(i, a)) * coeffs(i, a);
    const Complex scale = kdotc / static_cast<Scalar>(ksq(i));
    for (int a = 0; a < dim; ++a) coeffs(i, a) -= static_cast<Scalar>(kk(i, a)) * scale;
  }
  return coeffs;
}

template <typename Scalar>
SpectralField<Scalar> leray_project(const SpectralField<Scalar>& f) {
  return SpectralField<Scalar>(f.grid(), leray_project<Scalar>(f.grid(), f.coeffs()));
}

/// Largest per-mode ratio |k.c(k)| / (|k| |c(k)|) over nonzero modes.
template <typename Scalar>
Scalar divergence_residual(const SpectralField<Scalar>& u) {
  const auto& grid = u.grid();
  const auto& kk = grid.wavenumbers();
  const auto& ksq = grid.wavenumber_sq();
  using std::abs;
  using std::sqrt;
  Scalar worst(0);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const Scalar mag = sqrt(u.coeffs().row(i).abs2().sum());
    if (mag == Scalar(0) || ksq(i) == 0.0) continue;
    std::complex<Scalar> kdotc(0);
    for (int a = 0; a < grid.dim(); ++a) kdotc += static_cast<Scalar>(kk(i, a)) * u.coeffs()(i, a);
    worst = std::max(worst, Scalar(abs(kdotc) / (sqrt(static_cast<Scalar>(ksq(i))) * mag)));
  }
  return worst;
}

/// Homogeneous Sobolev norm sqrt(sum_{k != 0} |k|^{2s} |c(k)|^2). With the
/// coefficient convention of SpectralField, s = 0 gives the root mean square
/// of the physical field (the (2π)^n volume factor is dropped throughout).
template <typename Scalar>
Scalar sobolev_norm(const SpectralField<Scalar>& u, Scalar s) {
  const int dim = u.dim();
  if (s < -Scalar(dim) / 2) {
    throw DomainError("sobolev_norm: exponent " + std::to_string(static_cast<double>(s)) +
                      " is below -n/2 = " + std::to_string(-dim / 2.0));
  }
  const auto weights = fractional_symbol<Scalar>(u.grid(), s);
  using std::sqrt;
  return sqrt((u.coeffs().abs2().rowwise().sum() * weights).sum());
}

/// L2 norm plus a set of Sobolev seminorms evaluated by the same summation.
struct NormSet {
  double l2 = 0.0;
  std::vector<std::pair<double, double>> hs;

  /// Seminorm at exponent s; throws IndexError if it was not requested.
  double at(double s) const {
    for (const auto& [exponent, value] : hs) {
      if (exponent == s) return value;
    }
    throw IndexError("NormSet: exponent not computed");
  }
};

template <typename Scalar>
NormSet norm_set(const SpectralField<Scalar>& u, std::span<const double> exponents) {
  NormSet out;
  out.l2 = static_cast<double>(sobolev_norm<Scalar>(u, Scalar(0)));
  out.hs.reserve(exponents.size());
  for (double s : exponents) {
    out.hs.emplace_back(s, static_cast<double>(sobolev_norm<Scalar>(u, static_cast<Scalar>(s))));
  }
  return out;
}

/// Grid mean of |u(x)|^2 computed in physical space.
template <typename Scalar>
Scalar physical_mean_square(const SpectralField<Scalar>& u) {
  FourierTransform<Scalar> fft(u.grid());
  Scalar total(0);
  for (int c = 0; c < u.dim(); ++c) {
    const auto phys = fft.to_physical(u.coeffs().col(c));
    total += phys.abs2().sum();
  }
  return total / static_cast<Scalar>(u.grid().size());
}

struct GnInterpolation {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// Compares ||u||_{H^{(5-4a)/2}} with ||u||^{(6a-5)/2a} ||Λ^a u||^{(5-4a)/2a}.
/// For zero-mean fields on the torus Hölder's inequality over the Fourier
/// modes gives ratio <= 1, with equality on single-shell fields.
template <typename Scalar>
GnInterpolation gn_interpolation_check(const SpectralField<Scalar>& u, Scalar alpha) {
  if (!alpha_in_closed_range(static_cast<double>(alpha))) {
    throw DomainError("gn_interpolation_check: alpha must lie in [5/6, 5/4]");
  }
  if (u.is_zero()) throw DomainError("gn_interpolation_check: field is zero");
  using std::pow;
  const Scalar lhs = sobolev_norm<Scalar>(u, (Scalar(5) - 4 * alpha) / 2);
  const Scalar l2 = sobolev_norm<Scalar>(u, Scalar(0));
  const Scalar ha = sobolev_norm<Scalar>(u, alpha);
  const Scalar rhs = pow(l2, (6 * alpha - 5) / (2 * alpha)) * pow(ha, (5 - 4 * alpha) / (2 * alpha));
  return {static_cast<double>(lhs), static_cast<double>(rhs), static_cast<double>(lhs / rhs)};
}

/// Fixed-time rescaling u -> λ^{2a-1} u(λ x): the coefficient at k moves to λk.
/// Every Sobolev norm picks up the factor λ^{2a-1+s}.
template <typename Scalar>
SpectralField<Scalar> scale_field(const SpectralField<Scalar>& u, int lambda, Scalar alpha) {
  if (lambda < 1) throw DomainError("scale_field: lambda must be a positive integer");
  const auto& grid = u.grid();
  using Coeffs = typename SpectralField<Scalar>::Coeffs;
  using std::pow;
  const Scalar factor = pow(static_cast<Scalar>(lambda), 2 * alpha - 1);
  Coeffs out = Coeffs::Zero(grid.size(), grid.dim());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if ((u.coeffs().row(i) == std::complex<Scalar>(0)).all()) continue;
    const Wavevector target = grid.wavevector(i) * lambda;
    // Nyquist-plane targets are excluded: they cannot carry a conjugate pair.
    if ((target.array().abs() * 2 >= grid.resolution()).any()) {
      throw OverflowError("scale_field: mode scaled by " + std::to_string(lambda) +
                          " leaves the lattice");
    }
    out.row(*grid.index_of(target)) = u.coeffs().row(i) * factor;
  }
  return SpectralField<Scalar>(grid, std::move(out));
}

/// Copies the modes common to both grids; modes absent from `target` are
/// dropped, new ones are zero.
template <typename Scalar>
SpectralField<Scalar> regrid(const SpectralField<Scalar>& u, const TorusGrid& target) {
  if (target.dim() != u.dim()) throw GridMismatchError("regrid: dimensions differ");
  using Coeffs = typename SpectralField<Scalar>::Coeffs;
  Coeffs out = Coeffs::Zero(target.size(), target.dim());
  const auto& src = u.grid();
  for (Eigen::Index i = 0; i < src.size(); ++i) {
    if (src.nyquist()(i)) continue;
    if (const auto j = target.index_of(src.wavevector(i))) out.row(*j) = u.coeffs().row(i);
  }
  return SpectralField<Scalar>(target, std::move(out));
}

}  // namespace fracns
