#pragma once

#include "fracns/initial_data.hpp"
#include "fracns/operators.hpp"

#include <cmath>
#include <random>

namespace testing_util {

/// Random zero-mean (not projected) field with modes up to `kmax`.
inline fracns::SpectralFieldd random_field(const fracns::TorusGrid& g, std::uint64_t seed,
                                           double kmax, double slope = -1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  fracns::SpectralFieldd::Coeffs c = fracns::SpectralFieldd::Coeffs::Zero(g.size(), g.dim());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double ksq = g.wavenumber_sq()(i);
    if (ksq == 0.0 || ksq > kmax * kmax) continue;
    const double amp = std::pow(ksq, 0.5 * slope);
    for (int a = 0; a < g.dim(); ++a) c(i, a) = {amp * normal(rng), amp * normal(rng)};
  }
  return fracns::SpectralFieldd(g, std::move(c));
}

inline double max_abs_diff(const fracns::SpectralFieldd& a, const fracns::SpectralFieldd& b) {
  return (a.coeffs() - b.coeffs()).abs().maxCoeff();
}

inline double l2(const fracns::SpectralFieldd& u) { return fracns::sobolev_norm(u, 0.0); }

}  // namespace testing_util
