#include "fracns/singular_set.hpp"

#include "fracns/constants.hpp"
#include "fracns/diagnostics.hpp"
#include "fracns/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

namespace fracns {

namespace {

bool alpha_in_open_range(double alpha) {
  return alpha > kAlphaLower + kAlphaTol && alpha < kAlphaUpper - kAlphaTol;
}

struct LinearFit {
  double log_a = 0.0;
  double beta = 0.0;
  double rms = std::numeric_limits<double>::infinity();
};

LinearFit fit_at(const Eigen::ArrayXd& t, const Eigen::ArrayXd& log_y, double t0) {
  const Eigen::Index m = t.size();
  Eigen::MatrixXd design(m, 2);
  design.col(0).setOnes();
  design.col(1) = -(t0 - t).log().matrix();
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(log_y.matrix());
  const Eigen::VectorXd resid = design * coef - log_y.matrix();
  return {coef(0), coef(1), std::sqrt(resid.squaredNorm() / static_cast<double>(m))};
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(f);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DomainError("csv: bad number '" + s + "'");
  }
  return v;
}

}  // namespace

void NormSeries::validate() const {
  if (t.size() != y.size()) throw DomainError("NormSeries: t and y lengths differ");
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (!(y[j] >= 0.0)) throw DomainError("NormSeries: y must be >= 0");
    if (j > 0 && !(t[j] > t[j - 1])) throw DomainError("NormSeries: t must be strictly increasing");
  }
}

BlowupExponents blowup_exponents(double alpha) {
  if (!alpha_in_open_range(alpha)) {
    throw DomainError("blowup_exponents: alpha must lie in (5/6, 5/4)");
  }
  return {(6.0 * alpha - 5.0) / (4.0 * alpha), (5.0 - 2.0 * alpha) / (4.0 * alpha)};
}

double blowup_envelope(double t, double t0, double alpha, double nu, double C) {
  if (!(t < t0)) throw DomainError("blowup_envelope: requires t < t0");
  if (!(nu > 0.0)) throw DomainError("blowup_envelope: nu must be positive");
  const auto e = blowup_exponents(alpha);
  return C * std::pow(nu, e.viscosity) * std::pow(t0 - t, -e.time);
}

BlowupFit fit_blowup(const NormSeries& series, std::size_t begin, std::size_t end) {
  series.validate();
  if (end > series.size() || begin >= end) throw IndexError("fit_blowup: bad window");
  const std::size_t m = end - begin;
  if (m < 4) throw FitError("fit_blowup: need at least 4 samples in the window");
  // Noisy data need not be monotone sample to sample; only net growth is required.
  if (!(series.y[end - 1] > series.y[begin])) {
    throw FitError("fit_blowup: series does not grow over the window");
  }
  Eigen::ArrayXd t(m), log_y(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double y = series.y[begin + j];
    if (!(y > 0.0)) throw FitError("fit_blowup: samples must be positive");
    t(j) = series.t[begin + j];
    log_y(j) = std::log(y);
  }

  const double t_last = t(m - 1);
  const double span = t_last - t(0);
  const double max_offset = kFitBracketSpans * span;
  const double min_offset = 1e-9 * span;
  auto rms_at = [&](double offset) { return fit_at(t, log_y, t_last + offset).rms; };

  constexpr int kScan = 241;
  std::vector<double> offsets(kScan);
  int best = 0;
  double best_rms = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScan; ++i) {
    offsets[i] = min_offset * std::pow(max_offset / min_offset, i / double(kScan - 1));
    const double r = rms_at(offsets[i]);
    if (r < best_rms) {
      best_rms = r;
      best = i;
    }
  }
  if (best == kScan - 1 || best == 0) {
    throw FitError("fit_blowup: t0 search hit the bracket boundary");
  }

  double lo = offsets[best - 1];
  double hi = offsets[best + 1];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = rms_at(x1);
  double f2 = rms_at(x2);
  while (hi - lo > kFitT0Tolerance) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = rms_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = rms_at(x2);
    }
  }
  const double offset = 0.5 * (lo + hi);
  const auto lin = fit_at(t, log_y, t_last + offset);
  if (!(lin.beta > 0.0)) throw FitError("fit_blowup: fitted exponent is not positive");

  BlowupFit out;
  out.t0 = t_last + offset;
  out.beta = lin.beta;
  out.A = std::exp(lin.log_a);
  out.rms_log_error = lin.rms;
  out.alpha = series.alpha;
  if (series.alpha && alpha_in_open_range(*series.alpha)) {
    out.beta_theory = blowup_exponents(*series.alpha).time;
    out.beta_discrepancy = out.beta - *out.beta_theory;
  }
  return out;
}

BlowupFit fit_blowup(const NormSeries& series) { return fit_blowup(series, 0, series.size()); }

IntervalSet::IntervalSet(std::vector<std::pair<double, double>> intervals, double span_start,
                         double tail_start)
    : span_start_(span_start), tail_start_(tail_start) {
  if (!(tail_start >= span_start)) throw DomainError("IntervalSet: tail_start < span_start");
  std::sort(intervals.begin(), intervals.end());
  for (auto [a, b] : intervals) {
    a = std::max(a, span_start);
    b = std::min(b, tail_start);
    if (!(b > a)) continue;
    if (!intervals_.empty() && a < intervals_.back().second) {
      intervals_.back().second = std::max(intervals_.back().second, b);
    } else {
      intervals_.emplace_back(a, b);
    }
  }
}

std::vector<std::pair<double, double>> IntervalSet::gaps() const {
  std::vector<std::pair<double, double>> out;
  double cursor = span_start_;
  for (const auto& [a, b] : intervals_) {
    if (a > cursor) out.emplace_back(cursor, a);
    cursor = std::max(cursor, b);
  }
  if (tail_start_ > cursor) out.emplace_back(cursor, tail_start_);
  return out;
}

std::vector<double> IntervalSet::candidate_singular_times() const {
  std::vector<double> out;
  for (const auto& iv : intervals_) {
    if (iv.second < tail_start_) out.push_back(iv.second);
  }
  return out;
}

IntervalSet decompose_regular_set(const NormSeries& series, double regular_threshold,
                                  std::optional<double> eventual_time) {
  if (!(regular_threshold > 0.0)) {
    throw DomainError("decompose_regular_set: threshold must be positive");
  }
  series.validate();
  if (series.size() == 0) return {};
  const std::size_t n = series.size();
  const double start = series.t.front();
  const double tail = eventual_time ? std::max(*eventual_time, start) : series.t.back();

  std::vector<std::pair<double, double>> runs;
  std::size_t j = 0;
  while (j < n) {
    if (series.y[j] > regular_threshold) {
      ++j;
      continue;
    }
    const std::size_t first = j;
    while (j < n && series.y[j] <= regular_threshold) ++j;
    const std::size_t last = j - 1;
    const double tau = first == 0 ? series.t.front() : series.t[first - 1];
    const double s = last == n - 1 ? series.t.back() : series.t[last + 1];
    runs.emplace_back(tau, s);
  }
  return IntervalSet(std::move(runs), start, tail);
}

double suggested_regular_threshold(double l2, double nu, double C1, double alpha) {
  if (!(alpha >= kAlphaLower - kAlphaTol && alpha < kAlphaUpper - kAlphaTol)) {
    throw DomainError("suggested_regular_threshold: alpha must lie in [5/6, 5/4)");
  }
  if (!(l2 > 0.0 && nu > 0.0 && C1 > 0.0)) {
    throw DomainError("suggested_regular_threshold: l2, nu and C1 must be positive");
  }
  const double e_l2 = (6.0 * alpha - 5.0) / (2.0 * alpha);
  const double e_ha = (5.0 - 4.0 * alpha) / (2.0 * alpha);
  return std::pow(nu / C1 / std::pow(l2, e_l2), 1.0 / e_ha);
}

double unit_ball_volume(double gamma) {
  return std::pow(std::numbers::pi, 0.5 * gamma) / std::tgamma(0.5 * gamma + 1.0);
}

CoverMeasure cover_sum(const IntervalSet& intervals, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("cover_sum: gamma must be positive");
  CoverMeasure out;
  out.gamma = gamma;
  for (const auto& [a, b] : intervals.gaps()) out.raw_sum += std::pow(b - a, gamma);
  out.normalized_sum = out.raw_sum * unit_ball_volume(gamma) * std::pow(2.0, -gamma);
  return out;
}

std::vector<std::pair<double, double>> dimension_curve(int n, std::span<const double> alphas) {
  std::vector<std::pair<double, double>> out;
  out.reserve(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    try {
      out.emplace_back(alphas[i], hausdorff_exponent(alphas[i], n));
    } catch (const DomainError& e) {
      throw DomainError("dimension_curve: entry " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

NormSeries synthetic_blowup_series(double alpha, double nu, double C, double t0,
                                   std::span<const double> times) {
  NormSeries s;
  s.alpha = alpha;
  s.nu = nu;
  for (double t : times) {
    s.t.push_back(t);
    s.y.push_back(blowup_envelope(t, t0, alpha, nu, C));
  }
  return s;
}

void write_intervals_csv(std::ostream& os, const IntervalSet& set) {
  os << "tau,s\n";
  for (const auto& [a, b] : set.intervals()) os << format_exact(a) << ',' << format_exact(b) << '\n';
  os << "# span_start=" << format_exact(set.span_start()) << '\n';
  os << "# tail_start=" << format_exact(set.tail_start()) << '\n';
}

IntervalSet read_intervals_csv(std::istream& is) {
  std::vector<std::pair<double, double>> rows;
  std::optional<double> span_start;
  std::optional<double> tail_start;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = line.substr(1, eq - 1);
      const std::string value = line.substr(eq + 1);
      if (key.find("span_start") != std::string::npos) span_start = to_double(value);
      if (key.find("tail_start") != std::string::npos) tail_start = to_double(value);
      continue;
    }
    if (!header_seen) {
      if (line != "tau,s") throw DomainError("intervals csv: header must be 'tau,s'");
      header_seen = true;
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 2) throw DomainError("intervals csv: expected 2 columns");
    const double a = to_double(f[0]);
    const double b = to_double(f[1]);
    if (!(b > a)) throw DomainError("intervals csv: need tau < s");
    rows.emplace_back(a, b);
  }
  if (!header_seen) throw DomainError("intervals csv: missing header");
  double lo = span_start.value_or(std::numeric_limits<double>::infinity());
  double hi = tail_start.value_or(-std::numeric_limits<double>::infinity());
  for (const auto& [a, b] : rows) {
    if (!span_start) lo = std::min(lo, a);
    if (!tail_start) hi = std::max(hi, b);
  }
  if (rows.empty() && (!span_start || !tail_start)) return {};
  return IntervalSet(std::move(rows), lo, hi);
}

NormSeries read_norm_series_csv(std::istream& is) {
  NormSeries out;
  std::string line;
  std::vector<std::string> header;
  int t_col = -1;
  int y_col = -1;
  bool from_halpha_sq = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto f = split_csv(line);
    if (header.empty()) {
      header = f;
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == "t") t_col = static_cast<int>(i);
        if (f[i] == "y") y_col = static_cast<int>(i);
      }
      if (y_col < 0) {
        for (std::size_t i = 0; i < f.size(); ++i) {
          if (f[i] == "halpha_sq") {
            y_col = static_cast<int>(i);
            from_halpha_sq = true;
          }
        }
      }
      if (t_col < 0 || y_col < 0) {
        throw DomainError("norm series csv: need columns 't' and 'y' (or 'halpha_sq')");
      }
      continue;
    }
    if (f.size() != header.size()) throw DomainError("norm series csv: ragged row");
    out.t.push_back(to_double(f[t_col]));
    const double y = to_double(f[y_col]);
    out.y.push_back(from_halpha_sq ? std::sqrt(y) : y);
  }
  out.validate();
  return out;
}

}  // namespace fracns
