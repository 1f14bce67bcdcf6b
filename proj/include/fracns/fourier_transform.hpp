#pragma once

#include "fracns/grid.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include <complex>
#include <vector>

namespace fracns {

/// n-dimensional complex FFT on a TorusGrid built from 1-D transforms along
/// each axis.
///
///   to_physical: u(x_j) = sum_k c(k) e^{i k.x_j}          (unscaled)
///   to_spectral: c(k)   = N^{-n} sum_j u(x_j) e^{-i k.x_j}
///
/// With this pairing the mean square of u over the grid equals sum_k |c(k)|^2.
/// The object caches plans and scratch buffers, so each task needs its own.
template <typename Scalar>
class FourierTransform {
 public:
  using Complex = std::complex<Scalar>;
  using Column = Eigen::Array<Complex, Eigen::Dynamic, 1>;

  explicit FourierTransform(const TorusGrid& grid)
      : dim_(grid.dim()), n_(grid.resolution()), size_(grid.size()), line_in_(n_), line_out_(n_) {
    fft_.SetFlag(Eigen::FFT<Scalar>::Unscaled);
  }

  Column to_physical(const Column& spectral) {
    Column out = spectral;
    for (int a = 0; a < dim_; ++a) transform_axis(out, a, /*inverse=*/true);
    return out;
  }

  Column to_spectral(const Column& physical) {
    Column out = physical;
    for (int a = 0; a < dim_; ++a) transform_axis(out, a, /*inverse=*/false);
    out *= Scalar(1) / static_cast<Scalar>(size_);
    return out;
  }

 private:
  void transform_axis(Column& data, int axis, bool inverse) {
    Eigen::Index stride = 1;
    for (int a = axis + 1; a < dim_; ++a) stride *= n_;
    const Eigen::Index block = stride * n_;
    for (Eigen::Index outer = 0; outer < size_; outer += block) {
      for (Eigen::Index inner = 0; inner < stride; ++inner) {
        const Eigen::Index base = outer + inner;
        for (int i = 0; i < n_; ++i) line_in_[i] = data(base + i * stride);
        if (inverse) {
          fft_.inv(line_out_.data(), line_in_.data(), n_);
        } else {
          fft_.fwd(line_out_.data(), line_in_.data(), n_);
        }
        for (int i = 0; i < n_; ++i) data(base + i * stride) = line_out_[i];
      }
    }
  }

  int dim_;
  int n_;
  Eigen::Index size_;
  Eigen::FFT<Scalar> fft_;
  std::vector<Complex> line_in_;
  std::vector<Complex> line_out_;
};

}  // namespace fracns
