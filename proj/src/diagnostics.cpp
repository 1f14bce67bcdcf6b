#include "fracns/diagnostics.hpp"

#include "fracns/constants.hpp"
#include "fracns/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <system_error>

namespace fracns {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

double integrate_halpha(const EnergySeries& s, std::size_t a, std::size_t b) {
  double acc = 0.0;
  for (std::size_t j = a; j < b; ++j) acc += halpha_sq_segment_integral(s[j], s[j + 1]);
  return acc;
}

double record_q(const EnergyRecord& r, double alpha) {
  if (r.Q) return *r.Q;
  return criticality_quantity(std::sqrt(r.l2_sq), std::sqrt(r.halpha_sq), alpha);
}

}  // namespace

double halpha_sq_segment_integral(const EnergyRecord& a, const EnergyRecord& b) {
  const double h = b.t - a.t;
  double value = 0.5 * h * (a.halpha_sq + b.halpha_sq);
  if (a.halpha_sq_rate && b.halpha_sq_rate) {
    value += h * h / 12.0 * (*a.halpha_sq_rate - *b.halpha_sq_rate);
  }
  return value;
}

void EnergySeries::append(const EnergyRecord& record) {
  if (!records_.empty() && !(record.t > records_.back().t)) {
    throw DomainError("EnergySeries: times must be strictly increasing");
  }
  records_.push_back(record);
}

void EnergySeries::append_state(double t, double l2_sq, double halpha_sq, double h2alpha_sq,
                                double nonlin_flux, std::optional<double> halpha_sq_rate) {
  EnergyRecord r;
  r.halpha_sq_rate = halpha_sq_rate;
  r.t = t;
  r.l2_sq = l2_sq;
  r.halpha_sq = halpha_sq;
  r.h2alpha_sq = h2alpha_sq;
  r.nonlin_flux = nonlin_flux;
  if (!records_.empty()) {
    const auto& prev = records_.back();
    if (!(t > prev.t)) throw DomainError("EnergySeries: times must be strictly increasing");
    r.diss_integral = prev.diss_integral + 2.0 * meta_.nu * halpha_sq_segment_integral(prev, r);
  }
  if (alpha_in_closed_range(meta_.alpha)) {
    r.Q = criticality_quantity(std::sqrt(l2_sq), std::sqrt(halpha_sq), meta_.alpha);
  }
  const double l2_sq0 = records_.empty() ? l2_sq : records_.front().l2_sq;
  r.residual = l2_sq + r.diss_integral - l2_sq0;
  append(r);
}

double criticality_quantity(double l2, double halpha, double alpha) {
  if (!alpha_in_closed_range(alpha)) {
    throw DomainError("criticality_quantity: alpha must lie in [5/6, 5/4]");
  }
  if (l2 < 0.0 || halpha < 0.0) throw DomainError("criticality_quantity: norms must be >= 0");
  if (l2 == 0.0) return 0.0;
  const double a = std::clamp(alpha, kAlphaLower, kAlphaUpper);
  const double e_l2 = (6.0 * a - 5.0) / (2.0 * a);
  const double e_ha = (5.0 - 4.0 * a) / (2.0 * a);
  return std::pow(l2, e_l2) * std::pow(halpha, e_ha);
}

double local_horizon(double halpha0, double nu, double alpha, double C) {
  if (alpha <= kAlphaLower + kAlphaTol) {
    throw DomainError(
        "local_horizon: requires 5/6 < alpha (the horizon exponents diverge at alpha = 5/6)");
  }
  if (alpha > kAlphaUpper + kAlphaTol) throw DomainError("local_horizon: requires alpha <= 5/4");
  require_positive(halpha0, "local_horizon: halpha0");
  require_positive(nu, "local_horizon: nu");
  require_positive(C, "local_horizon: C");
  const double d = 6.0 * alpha - 5.0;
  const double prefactor = 2.0 * alpha * C / d;
  return std::pow(nu, (5.0 - 2.0 * alpha) / d) / (prefactor * std::pow(halpha0, 4.0 * alpha / d));
}

double energy_inequality_residual(const EnergySeries& series, std::size_t tau_index,
                                  std::size_t t_index) {
  if (tau_index > t_index || t_index >= series.size()) {
    throw IndexError("energy_inequality_residual: need tau_index <= t_index < size");
  }
  if (tau_index == t_index) return 0.0;
  const double nu = series.metadata().nu;
  return series[t_index].l2_sq + 2.0 * nu * integrate_halpha(series, tau_index, t_index) -
         series[tau_index].l2_sq;
}

DecayMonitor monotone_decay_monitor(const EnergySeries& series, double C1, double nu) {
  require_positive(C1, "monotone_decay_monitor: C1");
  require_positive(nu, "monotone_decay_monitor: nu");
  DecayMonitor out;
  const double alpha = series.metadata().alpha;
  std::vector<double> ratio(series.size());
  for (std::size_t j = 0; j < series.size(); ++j) {
    ratio[j] = record_q(series[j], alpha) * C1 / nu;
    out.q_threshold_ratio = std::max(out.q_threshold_ratio, ratio[j]);
  }
  out.smallness_holds = out.q_threshold_ratio < 1.0;

  for (std::size_t j = 0; j + 1 < series.size(); ++j) {
    const double h0 = series[j].halpha_sq;
    const double h1 = series[j + 1].halpha_sq;
    if (h1 <= h0 * (1.0 + kMonotoneSlack)) continue;
    if (ratio[j] < 1.0 && ratio[j + 1] < 1.0) out.monotone_decay_verified = false;
    const double q = std::max(ratio[j], ratio[j + 1]) * nu / C1;
    if (q > 0.0) {
      const double bound = nu / q;
      out.c1_lower_bound = out.c1_lower_bound ? std::max(*out.c1_lower_bound, bound) : bound;
    }
  }
  out.eventual_time = eventual_regularity_time(series, C1, nu);
  return out;
}

std::optional<double> eventual_regularity_time(const EnergySeries& series, double C1, double nu) {
  require_positive(C1, "eventual_regularity_time: C1");
  require_positive(nu, "eventual_regularity_time: nu");
  const double threshold = nu / C1;
  for (const auto& r : series.records()) {
    if (record_q(r, series.metadata().alpha) < threshold) return r.t;
  }
  return std::nullopt;
}

GrowthBound alpha54_growth_bound(const EnergySeries& series, double C) {
  if (std::abs(series.metadata().alpha - kAlphaUpper) > kAlphaTol) {
    throw DomainError("alpha54_growth_bound: series must be recorded at alpha = 5/4");
  }
  if (series.empty()) throw IndexError("alpha54_growth_bound: empty series");
  if (C < 0.0) throw DomainError("alpha54_growth_bound: C must be >= 0");
  GrowthBound out;
  const double h0 = series[0].halpha_sq;
  const double e0 = series[0].l2_sq;
  for (const auto& r : series.records()) out.lhs_max = std::max(out.lhs_max, r.halpha_sq);
  out.rhs_bound = h0 * std::exp(C * e0);
  out.margin = out.rhs_bound - out.lhs_max;
  out.ok = out.lhs_max <= out.rhs_bound;
  if (out.lhs_max <= h0) {
    out.required_constant = 0.0;
  } else if (h0 > 0.0 && e0 > 0.0) {
    out.required_constant = std::log(out.lhs_max / h0) / e0;
  } else {
    out.required_constant = std::numeric_limits<double>::infinity();
  }
  return out;
}

double stability_exponent(double alpha) {
  if (!alpha_in_closed_range(alpha)) {
    throw DomainError("stability_exponent: alpha must lie in [5/6, 5/4]");
  }
  return 4.0 * alpha / (8.0 * alpha - 5.0);
}

StabilityCheck weak_strong_stability(const EnergySeries& u, const DifferenceSeries& w, double alpha,
                                     double C) {
  if (w.t.size() != w.w_l2_sq.size() || w.t.size() != u.size()) {
    throw GridMismatchError("weak_strong_stability: series lengths differ");
  }
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (std::abs(u[j].t - w.t[j]) > 1e-12 * std::max(1.0, std::abs(u[j].t))) {
      throw GridMismatchError("weak_strong_stability: sample times differ");
    }
  }
  if (u.empty()) throw IndexError("weak_strong_stability: empty series");

  StabilityCheck out;
  out.exponent = stability_exponent(alpha);
  // ||Λ^{2a} u||^{4a/(8a-5)} = (h2alpha_sq)^{exponent / 2}
  const double half = 0.5 * out.exponent;
  const double w0 = w.w_l2_sq.front();
  const double e0 = u[0].l2_sq;
  double integral = 0.0;
  out.envelope.resize(u.size());
  bool inside = true;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (j > 0) {
      integral += 0.5 *
                  (std::pow(u[j - 1].h2alpha_sq, half) + std::pow(u[j].h2alpha_sq, half)) *
                  (u[j].t - u[j - 1].t);
    }
    out.envelope[j] = w0 * std::exp(C * integral);
    if (e0 > 0.0) out.max_relative_w_sq = std::max(out.max_relative_w_sq, w.w_l2_sq[j] / e0);
    if (w0 > 0.0) {
      out.max_ratio = std::max(out.max_ratio, w.w_l2_sq[j] / out.envelope[j]);
      inside = inside && w.w_l2_sq[j] <= out.envelope[j] * (1.0 + 1e-12);
    }
  }
  out.within_envelope = w0 > 0.0 ? inside : out.max_relative_w_sq < kUniquenessTol;
  return out;
}

double scaling_exponent(double alpha, int n) {
  if (n < 1) throw DomainError("scaling_exponent: dimension must be >= 1");
  if (!(alpha >= 0.0)) throw DomainError("scaling_exponent: alpha must be >= 0");
  return 4.0 * alpha - (n + 2.0);
}

double hausdorff_exponent(double alpha, int n) {
  if (n < 1) throw DomainError("hausdorff_exponent: dimension must be >= 1");
  const double lo = (n + 2.0) / 6.0;
  const double hi = (n + 2.0) / 4.0;
  if (alpha < lo - kAlphaTol || alpha > hi + kAlphaTol) {
    throw DomainError("hausdorff_exponent: alpha must lie in [(n+2)/6, (n+2)/4] = [" +
                      format_exact(lo) + ", " + format_exact(hi) + "]");
  }
  // (n+2)/(2a) - 2 equals (n+2-4a)/(2a) and rounds to the exact endpoint values.
  return std::max(0.0, (n + 2.0) / (2.0 * alpha) - 2.0);
}

RegularityReport regularity_report(const EnergySeries& series, double C, double C1) {
  if (series.empty()) throw IndexError("regularity_report: empty series");
  const auto& meta = series.metadata();
  RegularityReport out;
  out.alpha = meta.alpha;
  out.nu = meta.nu;
  out.C = C;
  out.C1 = C1;

  const auto monitor = monotone_decay_monitor(series, C1, meta.nu);
  out.q_threshold_ratio = monitor.q_threshold_ratio;
  out.smallness_holds = monitor.smallness_holds;
  out.monotone_decay_verified = monitor.monotone_decay_verified;
  out.eventual_time = monitor.eventual_time;
  out.c1_lower_bound = monitor.c1_lower_bound;

  if (meta.alpha > kAlphaLower + kAlphaTol && meta.alpha <= kAlphaUpper + kAlphaTol &&
      series[0].halpha_sq > 0.0) {
    out.t_star_local = local_horizon(std::sqrt(series[0].halpha_sq), meta.nu, meta.alpha, C);
  }

  std::size_t coarse = 0;
  for (std::size_t j = 0; j + 1 < series.size(); ++j) {
    const double a = series[j].halpha_sq;
    const double b = series[j + 1].halpha_sq;
    if (std::abs(b - a) > 0.1 * std::max(a, b)) ++coarse;
  }
  if (coarse > 0) {
    out.advisories.push_back("halpha_sq changes by more than 10% between " +
                             std::to_string(coarse) +
                             " consecutive record pairs; reduce record_every for accurate "
                             "dissipation integrals");
  }
  if (monitor.c1_lower_bound) {
    out.advisories.push_back("c1_lower_bound is a heuristic estimate from observed growth of "
                             "halpha_sq, not a rigorous constant");
  }
  return out;
}

std::string format_exact(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_series_csv(std::ostream& os, const EnergySeries& series) {
  os << kSeriesCsvHeader << '\n';
  for (const auto& r : series.records()) {
    os << format_exact(r.t) << ',' << format_exact(r.l2_sq) << ',' << format_exact(r.halpha_sq)
       << ',' << format_exact(r.h2alpha_sq) << ',' << format_exact(r.diss_integral) << ','
       << (r.Q ? format_exact(*r.Q) : std::string()) << ',' << format_exact(r.residual) << ','
       << format_exact(r.nonlin_flux) << '\n';
  }
  if (!series.metadata().config_digest.empty()) {
    os << "# config_digest=" << series.metadata().config_digest << '\n';
  }
}

namespace {

double parse_double(const std::string& field, std::size_t line_no) {
  // from_chars for double is available in libstdc++ 11.
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last) {
    throw DomainError("series csv line " + std::to_string(line_no) + ": bad number '" + field + "'");
  }
  return value;
}

}  // namespace

EnergySeries read_series_csv(std::istream& is, SeriesMetadata meta) {
  EnergySeries series(std::move(meta));
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view key = "# config_digest=";
      if (line.rfind(key, 0) == 0) series.metadata().config_digest = line.substr(key.size());
      continue;
    }
    if (!header_seen) {
      if (line != kSeriesCsvHeader) {
        throw DomainError("series csv: header must be '" + std::string(kSeriesCsvHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.emplace_back();
    if (fields.size() != 8) {
      throw DomainError("series csv line " + std::to_string(line_no) + ": expected 8 columns");
    }
    EnergyRecord r;
    r.t = parse_double(fields[0], line_no);
    r.l2_sq = parse_double(fields[1], line_no);
    r.halpha_sq = parse_double(fields[2], line_no);
    r.h2alpha_sq = parse_double(fields[3], line_no);
    r.diss_integral = parse_double(fields[4], line_no);
    if (!fields[5].empty()) r.Q = parse_double(fields[5], line_no);
    r.residual = parse_double(fields[6], line_no);
    r.nonlin_flux = parse_double(fields[7], line_no);
    series.append(r);
  }
  if (!header_seen) throw DomainError("series csv: missing header");
  return series;
}

}  // namespace fracns
