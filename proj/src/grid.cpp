#include "fracns/grid.hpp"

#include "fracns/errors.hpp"

#include <cmath>
#include <string>

namespace fracns {

namespace {

int axis_wavenumber(int idx, int n) { return idx <= n / 2 ? idx : idx - n; }

}  // namespace

TorusGrid::TorusGrid(int dim, int resolution) : dim_(dim), resolution_(resolution) {
  if (dim != 2 && dim != 3) {
    throw DomainError("TorusGrid: dim must be 2 or 3, got " + std::to_string(dim));
  }
  if (resolution < 4 || resolution % 2 != 0) {
    throw DomainError("TorusGrid: resolution must be even and >= 4, got " +
                      std::to_string(resolution));
  }
  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= resolution;

  auto tables = std::make_shared<Tables>();
  tables->k.resize(size_, dim);
  tables->ksq.resize(size_);
  tables->partner.resize(size_);
  tables->nyquist.resize(size_);

  const int n = resolution;
  for (Eigen::Index flat = 0; flat < size_; ++flat) {
    Eigen::Index rem = flat;
    Eigen::Index partner = 0;
    double ksq = 0.0;
    bool nyq = false;
    Eigen::Index stride = size_;
    for (int a = 0; a < dim; ++a) {
      stride /= n;
      const int idx = static_cast<int>(rem / stride);
      rem %= stride;
      const int k = axis_wavenumber(idx, n);
      tables->k(flat, a) = k;
      ksq += static_cast<double>(k) * k;
      nyq = nyq || (idx == n / 2);
      partner += static_cast<Eigen::Index>((n - idx) % n) * stride;
    }
    tables->ksq(flat) = ksq;
    tables->partner(flat) = static_cast<int>(partner);
    tables->nyquist(flat) = nyq ? 1 : 0;
  }
  tables_ = std::move(tables);
}

Wavevector TorusGrid::wavevector(Eigen::Index flat) const {
  Wavevector k(dim_);
  for (int a = 0; a < dim_; ++a) k(a) = static_cast<int>(tables_->k(flat, a));
  return k;
}

std::optional<Eigen::Index> TorusGrid::index_of(const Wavevector& k) const {
  if (k.size() != dim_) return std::nullopt;
  const int n = resolution_;
  Eigen::Index flat = 0;
  for (int a = 0; a < dim_; ++a) {
    const int ka = k(a);
    if (ka <= -n / 2 || ka > n / 2) return std::nullopt;
    flat = flat * n + (ka >= 0 ? ka : ka + n);
  }
  return flat;
}

double TorusGrid::lattice_radius() const noexcept {
  return 0.5 * resolution_ * std::sqrt(static_cast<double>(dim_));
}

}  // namespace fracns
