#pragma once

#include "fracns/errors.hpp"
#include "fracns/grid.hpp"

#include <Eigen/Core>

#include <complex>
#include <string>
#include <utility>

namespace fracns {

/// Truncated Fourier coefficients of a real, zero-mean vector field on the
/// torus. Coefficients are stored as a grid.size() x dim array, one column per
/// velocity component, with the convention u(x) = sum_k c(k) e^{i k.x}.
///
/// Construction enforces the structural invariants: c(0) = 0, Nyquist-plane
/// modes are zero and c(-k) = conj(c(k)) (the Hermitian part of the input is
/// kept). Solenoidality is not imposed here; see leray_project.
template <typename Scalar>
class SpectralField {
 public:
  using Complex = std::complex<Scalar>;
  using Coeffs = Eigen::Array<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  using ModeVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

  explicit SpectralField(TorusGrid grid)
      : grid_(std::move(grid)), coeffs_(Coeffs::Zero(grid_.size(), grid_.dim())) {}

  SpectralField(TorusGrid grid, Coeffs coeffs) : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
    if (coeffs_.rows() != grid_.size() || coeffs_.cols() != grid_.dim()) {
      throw GridMismatchError("SpectralField: coefficient array is " +
                              std::to_string(coeffs_.rows()) + "x" + std::to_string(coeffs_.cols()) +
                              ", grid expects " + std::to_string(grid_.size()) + "x" +
                              std::to_string(grid_.dim()));
    }
    enforce_invariants();
  }

  const TorusGrid& grid() const noexcept { return grid_; }
  int dim() const noexcept { return grid_.dim(); }
  const Coeffs& coeffs() const noexcept { return coeffs_; }

  /// Coefficient vector at wavenumber k; throws IndexError off the lattice.
  ModeVector at(const Wavevector& k) const {
    const auto idx = grid_.index_of(k);
    if (!idx) throw IndexError("SpectralField::at: wavevector outside lattice");
    return coeffs_.row(*idx).matrix().transpose();
  }

  bool is_zero() const { return (coeffs_ == Complex(0)).all(); }

  template <typename Other>
  SpectralField<Other> cast() const {
    return SpectralField<Other>(grid_, coeffs_.template cast<std::complex<Other>>());
  }

  SpectralField operator-() const { return SpectralField(grid_, Coeffs(-coeffs_), Trusted{}); }

  friend SpectralField operator+(const SpectralField& a, const SpectralField& b) {
    check_same_grid(a, b);
    return SpectralField(a.grid_, Coeffs(a.coeffs_ + b.coeffs_), Trusted{});
  }
  friend SpectralField operator-(const SpectralField& a, const SpectralField& b) {
    check_same_grid(a, b);
    return SpectralField(a.grid_, Coeffs(a.coeffs_ - b.coeffs_), Trusted{});
  }
  friend SpectralField operator*(Scalar s, const SpectralField& a) {
    return SpectralField(a.grid_, Coeffs(a.coeffs_ * Complex(s)), Trusted{});
  }
  friend SpectralField operator*(const SpectralField& a, Scalar s) { return s * a; }

  static void check_same_grid(const SpectralField& a, const SpectralField& b) {
    if (!(a.grid_ == b.grid_)) throw GridMismatchError("SpectralField: grids differ");
  }

 private:
  struct Trusted {};

  // Linear combinations of invariant-satisfying fields stay invariant exactly
  // (conjugation commutes with real scaling and addition), so only the zero
  // mode is reset.
  SpectralField(TorusGrid grid, Coeffs coeffs, Trusted) : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
    coeffs_.row(0).setZero();
  }

  void enforce_invariants() {
    const auto& partner = grid_.conjugate_index();
    const auto& nyq = grid_.nyquist();
    Coeffs sym(coeffs_.rows(), coeffs_.cols());
    for (Eigen::Index i = 0; i < coeffs_.rows(); ++i) {
      if (nyq(i)) {
        sym.row(i).setZero();
        continue;
      }
      const Eigen::Index j = partner(i);
      for (Eigen::Index c = 0; c < coeffs_.cols(); ++c) {
        sym(i, c) = (coeffs_(i, c) + std::conj(coeffs_(j, c))) * Scalar(0.5);
      }
    }
    sym.row(0).setZero();
    coeffs_ = std::move(sym);
  }

  TorusGrid grid_;
  Coeffs coeffs_;
};

using SpectralFieldd = SpectralField<double>;

}  // namespace fracns
