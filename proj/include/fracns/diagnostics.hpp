#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fracns {

/// Per-time energy diagnostics. `diss_integral` is 2ν∫_0^t ||Λ^α u||^2 over
/// recorded samples and `residual` is l2_sq(t) + diss_integral(t) - l2_sq(0).
///
/// The quadrature is the trapezoid rule; when both neighbouring records carry
/// `halpha_sq_rate` (d/dt of halpha_sq, exact for the discrete system) the
/// endpoint correction h^2/12 (f'_a - f'_b) is added, which makes the rule
/// fourth order in the record spacing.
struct EnergyRecord {
  double t = 0.0;
  double l2_sq = 0.0;
  double halpha_sq = 0.0;
  double h2alpha_sq = 0.0;
  double diss_integral = 0.0;
  std::optional<double> Q;  ///< only for alpha in [5/6, 5/4]
  double residual = 0.0;
  double nonlin_flux = 0.0;
  std::optional<double> halpha_sq_rate;  ///< not serialised to CSV
};

struct SeriesMetadata {
  int dim = 3;
  int resolution = 0;
  double alpha = 1.0;
  double nu = 1.0;
  std::string config_digest;
};

/// Time-ordered energy records of one run.
class EnergySeries {
 public:
  EnergySeries() = default;
  explicit EnergySeries(SeriesMetadata meta) : meta_(std::move(meta)) {}

  const SeriesMetadata& metadata() const noexcept { return meta_; }
  SeriesMetadata& metadata() noexcept { return meta_; }
  const std::vector<EnergyRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const EnergyRecord& operator[](std::size_t i) const { return records_[i]; }
  const EnergyRecord& back() const { return records_.back(); }

  /// Appends a fully populated record; t must exceed the last recorded time.
  void append(const EnergyRecord& record);

  /// Appends a sample, deriving diss_integral, Q and residual from the
  /// previous record and the metadata.
  void append_state(double t, double l2_sq, double halpha_sq, double h2alpha_sq,
                    double nonlin_flux = 0.0, std::optional<double> halpha_sq_rate = std::nullopt);

 private:
  SeriesMetadata meta_;
  std::vector<EnergyRecord> records_;
};

/// ||u||^{(6a-5)/2a} ||Λ^a u||^{(5-4a)/2a}. Both exponents are nonnegative on
/// [5/6, 5/4]; a zero field gives 0.
double criticality_quantity(double l2, double halpha, double alpha);

/// Existence horizon of the strong solution started from ||Λ^a u(0)|| = halpha0:
///   ν^{(5-2a)/(6a-5)} / ( (2aC/(6a-5)) halpha0^{4a/(6a-5)} ),   5/6 < a <= 5/4.
double local_horizon(double halpha0, double nu, double alpha, double C = 1.0);

/// ∫ halpha_sq between consecutive records a and a+1 (corrected trapezoid
/// when derivative samples exist, plain trapezoid otherwise).
double halpha_sq_segment_integral(const EnergyRecord& a, const EnergyRecord& b);

/// l2_sq(t) + 2ν ∫_τ^t halpha_sq - l2_sq(τ), integrating over records with
/// halpha_sq_segment_integral.
double energy_inequality_residual(const EnergySeries& series, std::size_t tau_index,
                                  std::size_t t_index);

struct DecayMonitor {
  double q_threshold_ratio = 0.0;  ///< sup_t Q(t) C1 / ν
  bool smallness_holds = true;     ///< q_threshold_ratio < 1
  bool monotone_decay_verified = true;
  std::optional<double> eventual_time;
  /// ν / Q at records where halpha_sq grew: any C1 below this would make the
  /// smallness flag contradict the observed growth. Heuristic.
  std::optional<double> c1_lower_bound;
};

/// Relative slack used when testing halpha_sq for monotone decay.
inline constexpr double kMonotoneSlack = 1e-8;

DecayMonitor monotone_decay_monitor(const EnergySeries& series, double C1, double nu);

/// First recorded time with Q(t) < ν / C1.
std::optional<double> eventual_regularity_time(const EnergySeries& series, double C1, double nu);

struct GrowthBound {
  double lhs_max = 0.0;    ///< max_t ||Λ^{5/4} u(t)||^2
  double rhs_bound = 0.0;  ///< ||Λ^{5/4} u(0)||^2 exp(C ||u(0)||^2)
  double margin = 0.0;     ///< rhs_bound - lhs_max
  double required_constant = 0.0;  ///< smallest C for which the bound holds
  bool ok = false;
};

/// Checks the critical-case Grönwall bound on a series recorded at alpha = 5/4.
GrowthBound alpha54_growth_bound(const EnergySeries& series, double C);

/// Squared L2 norm of the difference of two runs sampled at common times.
struct DifferenceSeries {
  std::vector<double> t;
  std::vector<double> w_l2_sq;
};

struct StabilityCheck {
  double exponent = 0.0;  ///< 4a / (8a - 5)
  std::vector<double> envelope;
  double max_ratio = 0.0;          ///< max_t w_l2_sq / envelope (w(0) > 0 only)
  double max_relative_w_sq = 0.0;  ///< max_t w_l2_sq / ||u(0)||^2
  bool within_envelope = false;
};

/// Squared-ratio threshold below which two runs count as identical.
inline constexpr double kUniquenessTol = 1e-20;

double stability_exponent(double alpha);

/// Grönwall envelope ||w(0)||^2 exp(C ∫_0^t ||Λ^{2a} u||^{4a/(8a-5)} ds) for the
/// difference between a reference run `u` and a perturbed run.
StabilityCheck weak_strong_stability(const EnergySeries& u, const DifferenceSeries& w, double alpha,
                                     double C);

/// Exponent of λ in E_α(u_λ) = λ^{4a-(n+2)} E_α(u) on the whole space.
double scaling_exponent(double alpha, int n);
/// Upper bound (n+2-4a)/(2a) on the Hausdorff dimension of singular times,
/// valid for (n+2)/6 <= a <= (n+2)/4.
double hausdorff_exponent(double alpha, int n);

struct RegularityReport {
  double alpha = 0.0;
  double nu = 0.0;
  double C = 1.0;
  double C1 = 1.0;
  double q_threshold_ratio = 0.0;
  bool smallness_holds = false;
  std::optional<double> t_star_local;
  std::optional<double> eventual_time;
  bool monotone_decay_verified = false;
  std::optional<double> c1_lower_bound;
  std::vector<std::string> advisories;
};

RegularityReport regularity_report(const EnergySeries& series, double C = 1.0, double C1 = 1.0);

/// Exact CSV header of the energy time series.
inline constexpr const char* kSeriesCsvHeader =
    "t,l2_sq,halpha_sq,h2alpha_sq,diss_integral,Q,residual,nonlin_flux";

/// Header line, one row per record, then `# config_digest=<hex>` when the
/// metadata carries a digest. Numbers use the shortest round-trip form.
void write_series_csv(std::ostream& os, const EnergySeries& series);
/// Reads rows written by write_series_csv; comment lines are skipped.
EnergySeries read_series_csv(std::istream& is, SeriesMetadata meta);

/// Shortest decimal string that parses back to exactly `x`.
std::string format_exact(double x);

}  // namespace fracns
