#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <optional>

namespace fracns {

/// Integer wavevector with 2 or 3 components.
using Wavevector = Eigen::Matrix<int, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

/// Periodic box [0, 2π)^n sampled with N points per axis.
///
/// Modes are stored in FFT order: along each axis index i carries the
/// wavenumber i for i <= N/2 and i - N otherwise, so the lattice is
/// { k : -N/2 < k_i <= N/2 }. The flat index is row-major over the axes.
/// Modes touching the Nyquist plane (some |k_i| = N/2) have no distinct
/// conjugate partner on the lattice; fields keep them at zero.
///
/// Wavenumber tables are computed once and shared between copies.
class TorusGrid {
 public:
  TorusGrid(int dim, int resolution);

  int dim() const noexcept { return dim_; }
  int resolution() const noexcept { return resolution_; }
  Eigen::Index size() const noexcept { return size_; }

  /// size() x dim() table of wavenumber components.
  const Eigen::ArrayXXd& wavenumbers() const noexcept { return tables_->k; }
  const Eigen::ArrayXd& wavenumber_sq() const noexcept { return tables_->ksq; }
  /// Flat index of -k for every mode (wrapping on the Nyquist plane).
  const Eigen::ArrayXi& conjugate_index() const noexcept { return tables_->partner; }
  /// 1 where some component sits on the Nyquist plane, else 0.
  const Eigen::Array<std::uint8_t, Eigen::Dynamic, 1>& nyquist() const noexcept {
    return tables_->nyquist;
  }

  Wavevector wavevector(Eigen::Index flat) const;
  /// Flat index of k, or nullopt when k is off the lattice.
  std::optional<Eigen::Index> index_of(const Wavevector& k) const;

  /// Largest |k| present on the lattice.
  double lattice_radius() const noexcept;

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) noexcept {
    return a.dim_ == b.dim_ && a.resolution_ == b.resolution_;
  }

 private:
  struct Tables {
    Eigen::ArrayXXd k;
    Eigen::ArrayXd ksq;
    Eigen::ArrayXi partner;
    Eigen::Array<std::uint8_t, Eigen::Dynamic, 1> nyquist;
  };

  int dim_;
  int resolution_;
  Eigen::Index size_;
  std::shared_ptr<const Tables> tables_;
};

}  // namespace fracns
