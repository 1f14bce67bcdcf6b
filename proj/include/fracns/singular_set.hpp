#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace fracns {

/// Samples y_j = ||Λ^α u(t_j)|| with strictly increasing t_j.
struct NormSeries {
  std::vector<double> t;
  std::vector<double> y;
  std::optional<double> alpha;
  std::optional<double> nu;

  std::size_t size() const noexcept { return t.size(); }
  /// Throws DomainError if the invariants (sizes, ordering, y >= 0) fail.
  void validate() const;
};

struct BlowupExponents {
  double time = 0.0;       ///< (6a-5)/(4a)
  double viscosity = 0.0;  ///< (5-2a)/(4a)
};

/// Exponents of the lower bound ||Λ^α u(t)|| >= C ν^{(5-2a)/4a} (t0-t)^{-(6a-5)/4a}.
BlowupExponents blowup_exponents(double alpha);

/// C ν^{(5-2a)/4a} (t0-t)^{-(6a-5)/4a} for t < t0 and 5/6 < a < 5/4.
double blowup_envelope(double t, double t0, double alpha, double nu, double C = 1.0);

struct BlowupFit {
  double t0 = 0.0;
  double beta = 0.0;
  double A = 0.0;
  double rms_log_error = 0.0;
  std::optional<double> alpha;
  std::optional<double> beta_theory;  ///< (6a-5)/(4a) when alpha is known and in range
  std::optional<double> beta_discrepancy;
};

/// Bracket for the t0 search, as multiples of the window span past t_last.
inline constexpr double kFitBracketSpans = 10.0;
/// Golden-section termination width in t0.
inline constexpr double kFitT0Tolerance = 1e-10;

/// Least-squares fit of log y = log A - beta log(t0 - t) over samples
/// [begin, end). For each trial t0 the problem is linear in (log A, beta);
/// t0 minimises the rms log residual on (t_last, t_last + 10 span], located by
/// a log-spaced scan and refined by golden-section search.
BlowupFit fit_blowup(const NormSeries& series, std::size_t begin, std::size_t end);
BlowupFit fit_blowup(const NormSeries& series);

/// Sorted, disjoint open intervals (tau_i, s_i) inside [span_start, tail_start].
class IntervalSet {
 public:
  IntervalSet() = default;
  /// Sorts, merges overlapping intervals and clips to [span_start, tail_start].
  IntervalSet(std::vector<std::pair<double, double>> intervals, double span_start, double tail_start);

  const std::vector<std::pair<double, double>>& intervals() const noexcept { return intervals_; }
  double span_start() const noexcept { return span_start_; }
  double tail_start() const noexcept { return tail_start_; }
  bool empty() const noexcept { return intervals_.empty(); }

  /// Closed components of [span_start, tail_start] not covered by intervals(),
  /// zero-length components omitted.
  std::vector<std::pair<double, double>> gaps() const;
  /// Right endpoints s_i < tail_start.
  std::vector<double> candidate_singular_times() const;

 private:
  std::vector<std::pair<double, double>> intervals_;
  double span_start_ = 0.0;
  double tail_start_ = 0.0;
};

/// Samples with y <= threshold are regular. Each maximal run of regular
/// samples becomes an interval whose endpoints are the neighbouring irregular
/// samples (or the ends of the series). tail_start is eventual_time when given,
/// otherwise the last sample time.
IntervalSet decompose_regular_set(const NormSeries& series, double regular_threshold,
                                  std::optional<double> eventual_time = std::nullopt);

/// Threshold on ||Λ^α u|| obtained by solving Q = ν/C1 at fixed L2 norm:
/// (ν/C1 / l2^{(6a-5)/2a})^{2a/(5-4a)}, for 5/6 <= a < 5/4.
double suggested_regular_threshold(double l2, double nu, double C1, double alpha);

struct CoverMeasure {
  double gamma = 0.0;
  double raw_sum = 0.0;
  double normalized_sum = 0.0;
};

/// Volume of the unit ball in dimension gamma: π^{γ/2} / Γ(γ/2 + 1).
double unit_ball_volume(double gamma);

/// Σ diam(r_j)^γ over the gaps r_j of the regular set, raw and with the
/// Hausdorff normalisation α(γ) 2^{-γ}.
CoverMeasure cover_sum(const IntervalSet& intervals, double gamma);

/// (alpha, (n+2-4 alpha)/(2 alpha)) for each alpha.
std::vector<std::pair<double, double>> dimension_curve(int n, std::span<const double> alphas);

/// Samples of C ν^{(5-2a)/4a} (t0-t)^{-(6a-5)/4a} at the given times.
NormSeries synthetic_blowup_series(double alpha, double nu, double C, double t0,
                                   std::span<const double> times);

/// `tau,s` header, then one row per interval, then `# span_start=`,
/// `# tail_start=` comment lines.
void write_intervals_csv(std::ostream& os, const IntervalSet& set);
/// Reads the format above; without the comment lines the span defaults to
/// [min tau, max s].
IntervalSet read_intervals_csv(std::istream& is);

/// Reads a `t,y` CSV, or an energy-series CSV (y = sqrt(halpha_sq)).
NormSeries read_norm_series_csv(std::istream& is);

}  // namespace fracns
