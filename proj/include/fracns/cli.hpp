#pragma once

#include "fracns/diagnostics.hpp"
#include "fracns/galerkin.hpp"
#include "fracns/singular_set.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fracns::cli {

/// Process exit codes. The set is closed: every outcome maps to one of these.
enum ExitCode : int {
  kOk = 0,
  kUsageError = 2,      ///< bad flags, unreadable input, ConfigError
  kStabilityError = 3,  ///< integration produced non-finite values
  kDomainError = 4,     ///< DomainError, FitError and other math-domain failures
};

struct InitialCondition {
  std::string type = "taylor_green";  ///< taylor_green | random
  double slope = -1.0;
  std::uint64_t seed = 0;
  double amplitude = 1.0;
  std::optional<double> kmax;
};

struct RunConfig {
  int dim = 2;
  int resolution = 64;
  double alpha = 1.0;
  double nu = 0.01;
  double dt = 1e-3;
  double t_end = 1.0;
  Dealias dealias = Dealias::TwoThirds;
  int record_every = 1;
  std::optional<double> cutoff;
  int snapshot_every = 0;
  bool nonlinear = true;
  bool require_diagnostics = false;
  double constant_C = 1.0;
  double constant_C1 = 1.0;
  InitialCondition initial;
  std::string output_dir = "fracns_out";

  SolverConfig solver_config() const;
};

/// Parses and validates a run configuration; throws ConfigError naming the
/// offending key. Unknown keys are rejected.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
/// Canonical JSON of every field that influences the numerics (output_dir excluded).
nlohmann::json to_json(const RunConfig& cfg);
/// 16 hex digits of FNV-1a-64 over the canonical JSON dump.
std::string config_digest(const RunConfig& cfg);

SpectralFieldd make_initial_field(const RunConfig& cfg);

nlohmann::json to_json(const RegularityReport& report);
nlohmann::json to_json(const BlowupFit& fit);
nlohmann::json to_json(const CoverMeasure& cover);

struct RunOutcome {
  EnergySeries series;
  std::optional<RegularityReport> report;
  std::vector<std::string> warnings;
};

/// Integrates the configured run and writes series.csv, report.json and
/// snapshots/ under `out_dir`. On StabilityError the records gathered so far
/// are written before the exception propagates.
RunOutcome execute_run(const RunConfig& cfg, const std::filesystem::path& out_dir);

struct SweepSpec {
  nlohmann::json base;
  std::vector<double> alpha_list;
  std::string output_root = "fracns_sweep";
  int parallel_width = 1;
};

SweepSpec parse_sweep_spec(const nlohmann::json& j);

struct SweepRow {
  double alpha = 0.0;
  std::optional<double> d_alpha;
  std::optional<double> t_star;
  std::optional<double> eventual_time;
  std::optional<double> max_q_ratio;
  std::optional<double> final_energy;
  std::string status = "ok";
};

inline constexpr const char* kSweepCsvHeader =
    "alpha,d_alpha,t_star,eventual_time,max_Q_ratio,final_energy";

/// One run per alpha (in its own subdirectory), up to parallel_width at a time.
/// Rows follow alpha_list order; per-run failures are recorded in `status`.
std::vector<SweepRow> execute_sweep(const SweepSpec& spec, const std::filesystem::path& root);

/// Entry point used by the `fracns` executable.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Number formatted with 12 significant digits.
std::string fmt12(double x);

}  // namespace fracns::cli
