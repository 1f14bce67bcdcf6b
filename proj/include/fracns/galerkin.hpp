#pragma once

#include "fracns/diagnostics.hpp"
#include "fracns/errors.hpp"
#include "fracns/fourier_transform.hpp"
#include "fracns/operators.hpp"
#include "fracns/spectral_field.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fracns {

enum class Dealias { TwoThirds, None };

struct SolverConfig {
  explicit SolverConfig(TorusGrid g) : grid(std::move(g)) {}

  TorusGrid grid;
  double alpha = 1.0;
  double nu = 0.01;
  double dt = 1e-3;
  double t_end = 1.0;
  Dealias dealias = Dealias::TwoThirds;
  int record_every = 1;
  /// Spherical Galerkin cutoff |k| <= cutoff. Defaults to N/3 with the
  /// two-thirds rule and to the lattice radius otherwise.
  std::optional<double> cutoff;
  /// Keep an in-memory copy of the field every `snapshot_every` records (0: never).
  int snapshot_every = 0;
  /// Drop the advection term (linear fractional heat flow).
  bool nonlinear = true;

  double effective_cutoff() const {
    if (cutoff) return *cutoff;
    return dealias == Dealias::TwoThirds ? grid.resolution() / 3.0 : grid.lattice_radius();
  }

  /// Throws ConfigError naming the first offending field.
  void validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!(alpha >= 0.0 && alpha <= 1.25)) {
      throw ConfigError("alpha", "alpha must lie in [0, 5/4], got " + format_exact(alpha));
    }
    if (!positive(nu)) throw ConfigError("nu", "nu must be positive");
    if (!positive(dt)) throw ConfigError("dt", "dt must be positive");
    if (!positive(t_end)) throw ConfigError("t_end", "t_end must be positive");
    if (record_every < 1) throw ConfigError("record_every", "record_every must be >= 1");
    if (snapshot_every < 0) throw ConfigError("snapshot_every", "snapshot_every must be >= 0");
    if (cutoff && !(*cutoff >= 0.0)) throw ConfigError("cutoff", "cutoff must be >= 0");
  }
};

/// Sharp spherical truncation: coefficients with |k| > cutoff are zeroed.
template <typename Scalar>
SpectralField<Scalar> galerkin_truncate(const SpectralField<Scalar>& u, double cutoff) {
  if (cutoff > u.grid().lattice_radius()) return u;
  auto c = u.coeffs();
  const auto& ksq = u.grid().wavenumber_sq();
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    if (ksq(i) > cutoff * cutoff) c.row(i).setZero();
  }
  return SpectralField<Scalar>(u.grid(), std::move(c));
}

struct TrajectoryRecord {
  double t = 0.0;
  NormSet norms;  ///< exponents {0, alpha, 2 alpha}
  double nonlinear_flux = 0.0;
};

/// Pseudo-spectral discretisation of
///   du/dt = -ν Λ^{2α} u - P P_N (u.∇u),   div u = 0
/// on the retained set R = {|k| <= cutoff} ∩ {3|k_i| < N for all i} (the box
/// condition only with the two-thirds rule). Products of fields supported on
/// R are alias-free, so the discrete nonlinearity is the exact Galerkin
/// projection and <N(u), u> = 0 up to rounding.
template <typename Scalar = double>
class GalerkinSolver {
 public:
  using Field = SpectralField<Scalar>;
  using Complex = std::complex<Scalar>;
  using Coeffs = typename Field::Coeffs;
  using RealArray = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  explicit GalerkinSolver(SolverConfig cfg)
      : cfg_(std::move(cfg)), fft_(cfg_.grid), mask_(cfg_.grid.size()) {
    cfg_.validate();
    const auto& grid = cfg_.grid;
    const double cut = cfg_.effective_cutoff();
    const int n = grid.resolution();
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      bool keep = grid.wavenumber_sq()(i) <= cut * cut && !grid.nyquist()(i);
      if (cfg_.dealias == Dealias::TwoThirds) {
        keep = keep && (grid.wavenumbers().row(i).abs() * 3.0 < n).all();
      }
      mask_(i) = keep ? Scalar(1) : Scalar(0);
    }
    symbol_ = fractional_symbol<Scalar>(grid, static_cast<Scalar>(cfg_.alpha));
    max_rate_ = static_cast<double>((symbol_ * mask_).maxCoeff()) * cfg_.nu;
  }

  const SolverConfig& config() const noexcept { return cfg_; }
  const RealArray& retained_mask() const noexcept { return mask_; }
  /// ν max_{k in R} |k|^{2α}: stiffness of the linear part.
  double max_decay_rate() const noexcept { return max_rate_; }

  /// Restriction to the retained set followed by Leray projection; used on
  /// initial data (u^N(0) = P_N u(0)).
  Field restrict(const Field& u) const {
    check_grid(u);
    Coeffs c = u.coeffs().colwise() * mask_.template cast<Complex>();
    return Field(cfg_.grid, leray_project<Scalar>(cfg_.grid, std::move(c)));
  }

  /// P P_N (u.∇u) evaluated pseudo-spectrally in advective form.
  Field nonlinear_term(const Field& u) {
    check_grid(u);
    return Field(cfg_.grid, advection(u.coeffs()));
  }

  /// -ν Λ^{2α} u - P P_N (u.∇u)
  Field rhs(const Field& u) {
    check_grid(u);
    Coeffs linear = u.coeffs().colwise() * (-static_cast<Scalar>(cfg_.nu) * symbol_).template cast<Complex>();
    if (cfg_.nonlinear) linear -= advection(u.coeffs());
    return Field(cfg_.grid, std::move(linear));
  }

  /// One integrating-factor RK4 step (Lawson form): with v = e^{νΛ^{2α} t} u the
  /// stiff diagonal is integrated exactly and the classical four-stage rule
  /// is applied to the transformed nonlinear term.
  Field step(const Field& u, Scalar dt) {
    check_grid(u);
    const RealArray rate = -static_cast<Scalar>(cfg_.nu) * symbol_;
    const auto e_half = (rate * (dt / 2)).exp().template cast<Complex>().eval();
    const auto e_full = (rate * dt).exp().template cast<Complex>().eval();
    const Coeffs& u0 = u.coeffs();

    Coeffs result;
    if (!cfg_.nonlinear) {
      result = u0.colwise() * e_full;
    } else {
      const Complex h(dt);
      const Complex h2(dt / 2);
      const Coeffs k1 = -advection(u0);
      const Coeffs k2 = -advection(Coeffs((u0 + h2 * k1).colwise() * e_half));
      const Coeffs u0_half = u0.colwise() * e_half;
      const Coeffs k3 = -advection(Coeffs(u0_half + h2 * k2));
      const Coeffs u0_full = u0.colwise() * e_full;
      const Coeffs k4 = -advection(Coeffs(u0_full + h * (k3.colwise() * e_half)));
      result = u0_full + (h / Scalar(6)) * (k1.colwise() * e_full +
                                             Scalar(2) * ((k2 + k3).colwise() * e_half) + k4);
      result = leray_project<Scalar>(cfg_.grid, std::move(result));
    }
    return Field(cfg_.grid, std::move(result));
  }

  /// d/dt ||Λ^α u||^2 = 2 <Λ^{2α} u, du/dt> given the precomputed P P_N(u.∇u).
  double halpha_sq_rate(const Field& u, const Field& advection_term) const {
    const auto lap = (u.coeffs().colwise() * symbol_.template cast<Complex>()).eval();
    const Scalar h2a = lap.abs2().sum();
    const Scalar cross = (lap * advection_term.coeffs().conjugate()).real().sum();
    return static_cast<double>(-2 * static_cast<Scalar>(cfg_.nu) * h2a - 2 * cross);
  }

  /// Advective CFL number dt * max|u(x)| * max retained |k|.
  double cfl_number(const Field& u, double dt) {
    RealArray speed_sq = RealArray::Zero(cfg_.grid.size());
    for (int c = 0; c < cfg_.grid.dim(); ++c) speed_sq += fft_.to_physical(u.coeffs().col(c)).real().square();
    double kmax = 0.0;
    for (Eigen::Index i = 0; i < cfg_.grid.size(); ++i) {
      if (mask_(i) != Scalar(0)) kmax = std::max(kmax, std::sqrt(cfg_.grid.wavenumber_sq()(i)));
    }
    return dt * std::sqrt(static_cast<double>(speed_sq.maxCoeff())) * kmax;
  }

 private:
  void check_grid(const Field& u) const {
    if (!(u.grid() == cfg_.grid)) throw GridMismatchError("GalerkinSolver: field grid differs from config");
  }

  Coeffs advection(const Coeffs& u) {
    const auto& grid = cfg_.grid;
    const int dim = grid.dim();
    const auto& kk = grid.wavenumbers();
    std::array<RealArray, 3> velocity;
    for (int j = 0; j < dim; ++j) velocity[j] = fft_.to_physical(u.col(j)).real();

    Coeffs out(grid.size(), dim);
    for (int i = 0; i < dim; ++i) {
      RealArray acc = RealArray::Zero(grid.size());
      for (int j = 0; j < dim; ++j) {
        const auto ik = (kk.col(j).template cast<Scalar>()).template cast<Complex>() * Complex(0, 1);
        const RealArray grad = fft_.to_physical(u.col(i) * ik).real();
        acc += velocity[j] * grad;
      }
      out.col(i) = fft_.to_spectral(acc.template cast<Complex>());
    }
    out = out.colwise() * mask_.template cast<Complex>();
    // Hermitian symmetrisation happens in the Field constructor.
    Field symmetric(grid, std::move(out));
    return leray_project<Scalar>(grid, symmetric.coeffs());
  }

  SolverConfig cfg_;
  FourierTransform<Scalar> fft_;
  RealArray mask_;
  RealArray symbol_;
  double max_rate_ = 0.0;
};

// Free-function forms. Each builds a solver for the given configuration.

template <typename Scalar>
SpectralField<Scalar> nonlinear_term(const SpectralField<Scalar>& u, const SolverConfig& cfg) {
  return GalerkinSolver<Scalar>(cfg).nonlinear_term(u);
}

template <typename Scalar>
SpectralField<Scalar> rhs(const SpectralField<Scalar>& u, const SolverConfig& cfg) {
  return GalerkinSolver<Scalar>(cfg).rhs(u);
}

template <typename Scalar>
std::pair<SpectralField<Scalar>, double> step(const SpectralField<Scalar>& u, double t,
                                              const SolverConfig& cfg) {
  GalerkinSolver<Scalar> solver(cfg);
  return {solver.step(u, static_cast<Scalar>(cfg.dt)), t + cfg.dt};
}

template <typename Scalar>
struct RunResult {
  EnergySeries series;
  std::vector<TrajectoryRecord> trajectory;
  std::vector<std::pair<double, SpectralField<Scalar>>> snapshots;
  std::vector<std::string> warnings;
};

/// Stateful driver around GalerkinSolver: advances the state, appends a record
/// every `record_every` steps and at t_end. The integrator keeps everything
/// recorded so far if a step fails.
template <typename Scalar = double>
class GalerkinIntegrator {
 public:
  using Field = SpectralField<Scalar>;

  GalerkinIntegrator(SolverConfig cfg, const Field& u0, std::string config_digest = {})
      : solver_(std::move(cfg)), state_(solver_.restrict(u0)) {
    const auto& c = solver_.config();
    result_.series = EnergySeries(
        SeriesMetadata{c.grid.dim(), c.grid.resolution(), c.alpha, c.nu, std::move(config_digest)});
    total_steps_ = static_cast<std::int64_t>(std::ceil(c.t_end / c.dt - 1e-9));
    const double cfl = solver_.cfl_number(state_, c.dt);
    if (c.nonlinear && cfl > 1.0) {
      result_.warnings.push_back("advective CFL number " + format_exact(cfl) +
                                 " exceeds 1; consider a smaller dt");
    }
    record();
  }

  const Field& state() const noexcept { return state_; }
  double time() const noexcept { return t_; }
  bool finished() const noexcept { return steps_ >= total_steps_; }
  const RunResult<Scalar>& result() const noexcept { return result_; }
  RunResult<Scalar> take_result() { return std::move(result_); }
  GalerkinSolver<Scalar>& solver() noexcept { return solver_; }

  void advance() {
    const auto& c = solver_.config();
    const double t_next = steps_ + 1 == total_steps_ ? c.t_end : (steps_ + 1) * c.dt;
    Field next = solver_.step(state_, static_cast<Scalar>(t_next - t_));
    if (!next.coeffs().isFinite().all()) {
      throw StabilityError(t_, "non-finite coefficient after step to t = " + format_exact(t_next));
    }
    state_ = std::move(next);
    t_ = t_next;
    ++steps_;
    if (steps_ % c.record_every == 0 || finished()) record();
  }

  void run_to_end() {
    while (!finished()) advance();
  }

 private:
  void record() {
    const auto& c = solver_.config();
    const std::array<double, 2> exps{c.alpha, 2.0 * c.alpha};
    TrajectoryRecord rec;
    rec.t = t_;
    rec.norms = norm_set(state_, exps);
    const Field advection = c.nonlinear ? solver_.nonlinear_term(state_) : Field(c.grid);
    rec.nonlinear_flux = static_cast<double>(inner_product(advection, state_));
    const double ha = rec.norms.hs[0].second;
    const double h2a = rec.norms.hs[1].second;
    result_.series.append_state(t_, rec.norms.l2 * rec.norms.l2, ha * ha, h2a * h2a,
                                rec.nonlinear_flux, solver_.halpha_sq_rate(state_, advection));
    if (c.snapshot_every > 0 && (result_.trajectory.size() % c.snapshot_every) == 0) {
      result_.snapshots.emplace_back(t_, state_);
    }
    result_.trajectory.push_back(std::move(rec));
  }

  GalerkinSolver<Scalar> solver_;
  Field state_;
  double t_ = 0.0;
  std::int64_t steps_ = 0;
  std::int64_t total_steps_ = 0;
  RunResult<Scalar> result_;
};

/// Integrates u0 (after restriction to the retained set) to cfg.t_end.
template <typename Scalar = double>
RunResult<Scalar> run(const SolverConfig& cfg, const SpectralField<Scalar>& u0,
                      std::string config_digest = {}) {
  GalerkinIntegrator<Scalar> integrator(cfg, u0, std::move(config_digest));
  integrator.run_to_end();
  return integrator.take_result();
}

/// ||u(t_j) - v(t_j)||^2 at each common snapshot time.
template <typename Scalar>
DifferenceSeries difference_series(const RunResult<Scalar>& u, const RunResult<Scalar>& v) {
  if (u.snapshots.size() != v.snapshots.size()) {
    throw GridMismatchError("difference_series: snapshot counts differ");
  }
  DifferenceSeries out;
  for (std::size_t j = 0; j < u.snapshots.size(); ++j) {
    const auto& [tu, fu] = u.snapshots[j];
    const auto& [tv, fv] = v.snapshots[j];
    if (tu != tv) throw GridMismatchError("difference_series: snapshot times differ");
    const auto diff = fu - fv;
    const double n = static_cast<double>(sobolev_norm(diff, Scalar(0)));
    out.t.push_back(tu);
    out.w_l2_sq.push_back(n * n);
  }
  return out;
}

}  // namespace fracns
