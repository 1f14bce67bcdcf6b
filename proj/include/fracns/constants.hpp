#pragma once

namespace fracns {

/// Range of the dissipation index on which the criticality quantity and the
/// interpolation exponents (6a-5)/2a, (5-4a)/2a are both nonnegative.
inline constexpr double kAlphaLower = 5.0 / 6.0;
inline constexpr double kAlphaUpper = 5.0 / 4.0;
/// Slack used when testing alpha against the endpoints above.
inline constexpr double kAlphaTol = 1e-12;

/// Per-mode divergence tolerance |k.c(k)| <= eps |k| |c(k)|.
inline constexpr double kDivergenceTol = 1e-12;

inline constexpr bool alpha_in_closed_range(double alpha) {
  return alpha >= kAlphaLower - kAlphaTol && alpha <= kAlphaUpper + kAlphaTol;
}

}  // namespace fracns
