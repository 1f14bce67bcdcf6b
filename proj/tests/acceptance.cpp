// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes. Tolerances are fixed here and not configurable.

#include "fracns/cli.hpp"
#include "fracns/constants.hpp"
#include "fracns/diagnostics.hpp"
#include "fracns/galerkin.hpp"
#include "fracns/initial_data.hpp"
#include "fracns/operators.hpp"
#include "fracns/singular_set.hpp"

#include "helpers.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace fracns;
using testing_util::l2;

namespace {

constexpr double kEnergyTol = 1e-6;
constexpr double kEnergyRuntimeSeconds = 60.0;
constexpr double kSkewTol = 1e-10;
constexpr double kGnTol = 1e-12;
constexpr double kScalingTol = 1e-12;
constexpr double kFitT0Tol = 1e-3;
constexpr double kFitBetaTol = 1e-2;
constexpr double kCoverTol = 1e-14;
constexpr double kConvergenceRatio = 4.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double x) {
  std::ostringstream ss;
  ss.precision(6);
  ss << x;
  return ss.str();
}

Outcome energy_identity() {
  double worst = 0.0;
  double slowest = 0.0;
  for (double alpha : {5.0 / 6.0, 1.0, 1.25}) {
    SolverConfig cfg{TorusGrid(2, 64)};
    cfg.alpha = alpha;
    cfg.nu = 0.01;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    const auto u0 = taylor_green(cfg.grid, 1.0);
    const double e0 = std::pow(l2(u0), 2);
    const auto start = std::chrono::steady_clock::now();
    const auto result = run(cfg, u0);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    slowest = std::max(slowest, secs);
    if (result.series.size() != 1001) return {false, "unexpected record count"};
    for (const auto& r : result.series.records()) worst = std::max(worst, std::abs(r.residual) / e0);
  }
  return {worst < kEnergyTol && slowest < kEnergyRuntimeSeconds,
          "max |residual|/|u0|^2 = " + num(worst) + ", slowest run " + num(slowest) + " s"};
}

Outcome skew_symmetry() {
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const bool three = i % 2 == 1;
    SolverConfig cfg{TorusGrid(three ? 3 : 2, three ? 12 : 32)};
    GalerkinSolver<double> solver(cfg);
    const double slope = -0.5 - 0.02 * (i % 50);
    const auto u = (1.0 + i % 7) * solver.restrict(random_divfree_field(cfg.grid, slope, 1000 + i));
    const double flux = std::abs(inner_product(solver.nonlinear_term(u), u));
    const double scale = std::pow(l2(u), 2) * sobolev_norm(u, 1.0);
    worst = std::max(worst, flux / scale);
  }
  return {worst <= kSkewTol, "max |<N(u),u>|/(|u|^2 |u|_H1) = " + num(worst)};
}

Outcome gn_interpolation() {
  const TorusGrid g(3, 8);
  double worst = 0.0;
  double shell_dev = 0.0;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> slope(-3.0, 0.5);
  std::uniform_real_distribution<double> band(1.0, 4.0);
  std::vector<SpectralFieldd> fields;
  for (int i = 0; i < 1000; ++i) {
    fields.push_back(testing_util::random_field(g, 7000 + i, band(rng), slope(rng)));
  }
  for (int j = 0; j < 9; ++j) {
    const double alpha = kAlphaLower + j * (kAlphaUpper - kAlphaLower) / 8.0;
    for (const auto& u : fields) worst = std::max(worst, gn_interpolation_check(u, alpha).ratio);
    for (int axis = 0; axis < 3; ++axis) {
      Wavevector k = Wavevector::Zero(3);
      k(axis) = 1;
      SpectralFieldd::ModeVector v(3);
      v << std::complex<double>(0.3, 1.0), std::complex<double>(-2.0, 0.1), 0.7;
      const auto shell = single_mode_field<double>(g, k, v);
      shell_dev = std::max(shell_dev, std::abs(gn_interpolation_check(shell, alpha).ratio - 1.0));
    }
  }
  return {worst <= 1.0 + kGnTol && shell_dev <= kGnTol,
          "max ratio = " + num(worst) + ", single-shell |ratio-1| = " + num(shell_dev)};
}

Outcome scaling_identities() {
  const TorusGrid g(3, 16);
  const auto u = testing_util::random_field(g, 77, 2.5);
  double worst = 0.0;
  for (int lambda : {2, 3}) {
    for (double alpha : {5.0 / 6.0, 0.9, 1.0, 1.1, 1.25}) {
      const auto v = scale_field(u, lambda, alpha);
      for (double s : {0.0, alpha, 2 * alpha}) {
        const double ratio = sobolev_norm(v, s) / sobolev_norm(u, s);
        const double expected = std::pow(static_cast<double>(lambda), 2 * alpha - 1 + s);
        worst = std::max(worst, std::abs(ratio / expected - 1.0));
      }
    }
  }
  const bool exact = scaling_exponent(1.25, 3) == 0.0 && hausdorff_exponent(5.0 / 6.0, 3) == 1.0 &&
                     hausdorff_exponent(1.0, 3) == 0.5 && hausdorff_exponent(1.25, 3) == 0.0;
  return {worst <= kScalingTol && exact,
          "max relative deviation = " + num(worst) + ", exponent values exact: " +
              (exact ? "yes" : "no")};
}

Outcome blowup_recovery() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> a_dist(kAlphaLower + 0.01, kAlphaUpper - 0.01);
  std::uniform_real_distribution<double> t0_dist(0.5, 3.0);
  std::uniform_real_distribution<double> log_dist(-2.0, 1.0);
  double worst_t0 = 0.0;
  double worst_beta = 0.0;
  int failures = 0;
  for (int c = 0; c < 100; ++c) {
    const double alpha = a_dist(rng);
    const double t0 = t0_dist(rng);
    const double nu = std::pow(10.0, log_dist(rng));
    const double amp = std::pow(10.0, log_dist(rng));
    std::vector<double> times;
    for (int i = 0; i < 40; ++i) times.push_back(0.95 * t0 * i / 39.0);
    const auto series = synthetic_blowup_series(alpha, nu, amp, t0, times);
    try {
      const auto fit = fit_blowup(series);
      worst_t0 = std::max(worst_t0, std::abs(fit.t0 - t0));
      worst_beta = std::max(worst_beta, std::abs(fit.beta - blowup_exponents(alpha).time));
    } catch (const std::exception&) {
      ++failures;
    }
  }
  const auto classical = blowup_exponents(1.0);
  const bool classical_ok = classical.time == 0.25 && classical.viscosity == 0.75;
  return {failures == 0 && worst_t0 < kFitT0Tol && worst_beta < kFitBetaTol && classical_ok,
          "max |t0 err| = " + num(worst_t0) + ", max |beta err| = " + num(worst_beta) +
              ", fit failures = " + std::to_string(failures) + ", alpha=1 exponents (1/4, 3/4): " +
              (classical_ok ? "yes" : "no")};
}

Outcome cover_oracle() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  bool gamma_one_exact = true;
  for (int trial = 0; trial < 500; ++trial) {
    const double lo = unit(rng);
    const double hi = lo + 0.1 + 5.0 * unit(rng);
    std::vector<std::pair<double, double>> iv;
    const int m = 1 + static_cast<int>(unit(rng) * 40);
    for (int j = 0; j < m; ++j) {
      const double a = lo - 0.2 + (hi - lo + 0.4) * unit(rng);
      iv.emplace_back(a, a + (hi - lo) * 0.1 * unit(rng));
    }
    const IntervalSet set(iv, lo, hi);
    for (double gamma : {0.1, 0.5, 0.75, 1.0, 1.5, 2.0}) {
      const double got = cover_sum(set, gamma).raw_sum;
      const long double ref = oracle::brute_force_cover_sum(iv, lo, hi, gamma);
      worst = std::max(worst, double(std::abs(got - ref) / std::max(ref, 1e-300L)));
    }
    const double lengths = oracle::brute_force_cover_sum<double>(iv, lo, hi, 1.0);
    gamma_one_exact = gamma_one_exact && cover_sum(set, 1.0).raw_sum == lengths;
  }
  return {worst <= kCoverTol && gamma_one_exact,
          "max relative difference = " + num(worst) + ", gamma=1 equals gap length: " +
              (gamma_one_exact ? "yes" : "no")};
}

Outcome monotone_decay() {
  SolverConfig cfg{TorusGrid(3, 16)};
  cfg.alpha = 0.9;
  cfg.nu = 0.1;
  cfg.dt = 0.01;
  cfg.t_end = 2.0;
  const auto u0 = 1e-3 * random_divfree_field(cfg.grid, -1.0, 12);
  const auto result = run(cfg, u0);
  const auto& s = result.series;
  double worst = 0.0;
  for (std::size_t j = 0; j + 1 < s.size(); ++j) {
    worst = std::max(worst, (s[j + 1].halpha_sq - s[j].halpha_sq) / s[j].halpha_sq);
  }
  const auto monitor = monotone_decay_monitor(s, 1.0, cfg.nu);
  return {worst <= kMonotoneSlack && monitor.smallness_holds && monitor.monotone_decay_verified,
          "max relative increase of |L^a u|^2 = " + num(worst) + ", sup Q C1/nu = " +
              num(monitor.q_threshold_ratio)};
}

Outcome local_horizon_formula() {
  const double t = local_horizon(1.0, 1.0, 1.0, 1.0);
  bool monotone = true;
  for (double alpha : {0.9, 1.0, 1.2}) {
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        const double a = 0.1 * std::pow(1.6, i);
        const double nu = 0.01 * std::pow(1.8, j);
        const double here = local_horizon(a, nu, alpha);
        if (i + 1 < 10) monotone = monotone && local_horizon(0.1 * std::pow(1.6, i + 1), nu, alpha) < here;
        if (j + 1 < 10) monotone = monotone && local_horizon(a, 0.01 * std::pow(1.8, j + 1), alpha) > here;
      }
    }
  }
  return {t == 0.5 && monotone,
          "T*(alpha=1,nu=1,A=1,C=1) = " + num(t) + ", monotone on 10x10 grid: " +
              (monotone ? "yes" : "no")};
}

// Analytic data with |c(k)| ~ exp(-sigma |k|); each wavevector draws its own
// random numbers so every resolution samples the same function.
SpectralFieldd smooth_field(const TorusGrid& g, double sigma) {
  SpectralFieldd::Coeffs c = SpectralFieldd::Coeffs::Zero(g.size(), 2);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (g.nyquist()(i)) continue;
    const Wavevector k = g.wavevector(i);
    if (k(0) < 0 || (k(0) == 0 && k(1) <= 0)) continue;
    std::mt19937_64 rng(static_cast<std::uint64_t>((k(0) + 1000) * 4096 + (k(1) + 1000)));
    std::normal_distribution<double> normal;
    const double amp = std::exp(-sigma * std::sqrt(g.wavenumber_sq()(i)));
    for (int a = 0; a < 2; ++a) {
      const std::complex<double> z(amp * normal(rng), amp * normal(rng));
      c(i, a) = z;
      c(*g.index_of(Wavevector(-k)), a) = std::conj(z);
    }
  }
  return leray_project(SpectralFieldd(g, std::move(c)));
}

Outcome spectral_convergence() {
  const TorusGrid fine(2, 64);
  std::vector<SpectralFieldd> finals;
  for (int n : {16, 32, 64}) {
    SolverConfig cfg{TorusGrid(2, n)};
    cfg.alpha = 1.0;
    cfg.nu = 0.05;
    cfg.dt = 2e-3;
    cfg.t_end = 0.5;
    GalerkinIntegrator<double> integ(cfg, smooth_field(cfg.grid, 0.5));
    integ.run_to_end();
    finals.push_back(regrid(integ.state(), fine));
  }
  const double coarse = l2(finals[0] - finals[1]);
  const double finer = l2(finals[1] - finals[2]);
  const double ratio = coarse / finer;
  return {ratio > kConvergenceRatio, "|u16-u32| / |u32-u64| = " + num(ratio) + " (" + num(coarse) +
                                         " / " + num(finer) + ")"};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "fracns_acceptance_determinism";
  fs::remove_all(root);
  const auto cfg = cli::parse_run_config(nlohmann::json::parse(
      R"({"dim": 3, "N": 12, "alpha": 1.1, "nu": 0.02, "dt": 0.01, "t_end": 0.3,
          "initial": {"type": "random", "slope": -1.0, "seed": 5, "amplitude": 1.0}})"));
  cli::execute_run(cfg, root / "a");
  cli::execute_run(cfg, root / "b");
  auto slurp = [](const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
  };
  const std::string a = slurp(root / "a" / "series.csv");
  const std::string b = slurp(root / "b" / "series.csv");
  fs::remove_all(root);
  return {!a.empty() && a == b, std::to_string(a.size()) + " bytes, identical: " +
                                    (a == b ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"energy_identity", energy_identity},
      {"nonlinear_skew_symmetry", skew_symmetry},
      {"interpolation_inequality", gn_interpolation},
      {"scaling_identities", scaling_identities},
      {"blowup_envelope_recovery", blowup_recovery},
      {"cover_sum_oracle", cover_oracle},
      {"monotone_decay_under_smallness", monotone_decay},
      {"local_horizon_formula", local_horizon_formula},
      {"spectral_convergence", spectral_convergence},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
