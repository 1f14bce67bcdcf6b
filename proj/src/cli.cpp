#include "fracns/cli.hpp"

#include "fracns/constants.hpp"
#include "fracns/errors.hpp"
#include "fracns/initial_data.hpp"
#include "fracns/snapshot.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace fracns::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& prefix) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || item.key() == a;
    if (!known) throw ConfigError(join(prefix, item.key()), "unknown key");
  }
}

double get_number(const json& j, const char* key, const std::string& prefix, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(join(prefix, key), "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(join(prefix, key), "expected a finite number");
  return x;
}

std::int64_t get_integer(const json& j, const char* key, const std::string& prefix,
                         std::int64_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(join(prefix, key), "expected an integer");
  return v.get<std::int64_t>();
}

bool get_bool(const json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& j, const char* key, const std::string& prefix,
                       std::string fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(join(prefix, key), "expected a string");
  return v.get<std::string>();
}

json optional_number(const std::optional<double>& x) {
  return x ? json(*x) : json(nullptr);
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

json parse_json_file(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", path.string() + ": " + e.what());
  }
}

bool diagnostics_in_range(double alpha) { return alpha_in_closed_range(alpha); }

std::optional<double> d_alpha_of(double alpha, int n) {
  const double lo = (n + 2) / 6.0;
  const double hi = (n + 2) / 4.0;
  if (alpha < lo - kAlphaTol || alpha > hi + kAlphaTol) return std::nullopt;
  return hausdorff_exponent(alpha, n);
}

fs::path resolve_output(const std::optional<std::string>& flag, const std::string& configured) {
  if (flag) return fs::path(*flag);
  const fs::path p(configured);
  if (const char* root = std::getenv("OUTPUT_ROOT"); root != nullptr && *root != '\0') {
    return p.is_absolute() ? p : fs::path(root) / p;
  }
  return p;
}

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snapshot_%06zu.bin", index);
  return buf;
}

json report_document(const RunConfig& cfg, const std::string& digest, const EnergySeries& series,
                     const std::optional<RegularityReport>& report,
                     const std::vector<std::string>& warnings, const std::string& status) {
  json doc;
  doc["data_source"] = "solver";
  doc["config_digest"] = digest;
  doc["config"] = to_json(cfg);
  doc["constants"] = {{"C", cfg.constant_C}, {"C1", cfg.constant_C1}};
  doc["status"] = status;
  doc["records"] = series.size();
  doc["final_time"] = series.empty() ? json(nullptr) : json(series.back().t);
  doc["diagnostics_available"] = report.has_value();
  if (report) doc["report"] = to_json(*report);
  doc["warnings"] = warnings;
  return doc;
}

void write_run_artifacts(const fs::path& out_dir, const RunConfig& cfg, const std::string& digest,
                         const EnergySeries& series,
                         const std::optional<RegularityReport>& report,
                         const std::vector<std::string>& warnings, const std::string& status) {
  std::ostringstream csv;
  write_series_csv(csv, series);
  write_text(out_dir / "series.csv", csv.str());
  write_text(out_dir / "report.json",
             report_document(cfg, digest, series, report, warnings, status).dump(2) + "\n");
}

std::optional<RegularityReport> maybe_report(const RunConfig& cfg, const EnergySeries& series) {
  if (series.empty() || !diagnostics_in_range(cfg.alpha)) return std::nullopt;
  return regularity_report(series, cfg.constant_C, cfg.constant_C1);
}

}  // namespace

SolverConfig RunConfig::solver_config() const {
  SolverConfig sc{TorusGrid(dim, resolution)};
  sc.alpha = alpha;
  sc.nu = nu;
  sc.dt = dt;
  sc.t_end = t_end;
  sc.dealias = dealias;
  sc.record_every = record_every;
  sc.cutoff = cutoff;
  sc.snapshot_every = snapshot_every;
  sc.nonlinear = nonlinear;
  return sc;
}

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "configuration must be a JSON object");
  reject_unknown(j,
                 {"dim", "N", "alpha", "nu", "dt", "t_end", "dealias", "record_every", "cutoff",
                  "snapshot_every", "nonlinear", "require_diagnostics", "constants", "initial",
                  "output_dir"},
                 "");
  RunConfig cfg;
  cfg.dim = static_cast<int>(get_integer(j, "dim", "", cfg.dim));
  if (cfg.dim != 2 && cfg.dim != 3) throw ConfigError("dim", "dim must be 2 or 3");
  const auto n = get_integer(j, "N", "", cfg.resolution);
  if (n < 4 || n % 2 != 0 || n > 4096) {
    throw ConfigError("N", "N must be an even integer in [4, 4096]");
  }
  cfg.resolution = static_cast<int>(n);
  cfg.alpha = get_number(j, "alpha", "", cfg.alpha);
  cfg.nu = get_number(j, "nu", "", cfg.nu);
  cfg.dt = get_number(j, "dt", "", cfg.dt);
  cfg.t_end = get_number(j, "t_end", "", cfg.t_end);

  const std::string dealias = get_string(j, "dealias", "", "two_thirds");
  if (dealias == "two_thirds") {
    cfg.dealias = Dealias::TwoThirds;
  } else if (dealias == "none") {
    cfg.dealias = Dealias::None;
  } else {
    throw ConfigError("dealias", "dealias must be \"two_thirds\" or \"none\"");
  }
  const auto rec = get_integer(j, "record_every", "", cfg.record_every);
  if (rec < 1 || rec > std::numeric_limits<int>::max()) {
    throw ConfigError("record_every", "record_every must be a positive integer");
  }
  cfg.record_every = static_cast<int>(rec);
  if (j.contains("cutoff") && !j.at("cutoff").is_null()) {
    cfg.cutoff = get_number(j, "cutoff", "", 0.0);
  }
  const auto snap = get_integer(j, "snapshot_every", "", cfg.snapshot_every);
  if (snap < 0 || snap > std::numeric_limits<int>::max()) {
    throw ConfigError("snapshot_every", "snapshot_every must be a non-negative integer");
  }
  cfg.snapshot_every = static_cast<int>(snap);
  cfg.nonlinear = get_bool(j, "nonlinear", cfg.nonlinear);
  cfg.require_diagnostics = get_bool(j, "require_diagnostics", cfg.require_diagnostics);

  if (j.contains("constants")) {
    const auto& c = j.at("constants");
    if (!c.is_object()) throw ConfigError("constants", "expected an object");
    reject_unknown(c, {"C", "C1"}, "constants");
    cfg.constant_C = get_number(c, "C", "constants", cfg.constant_C);
    cfg.constant_C1 = get_number(c, "C1", "constants", cfg.constant_C1);
  }
  if (!(cfg.constant_C > 0.0)) throw ConfigError("constants.C", "C must be positive");
  if (!(cfg.constant_C1 > 0.0)) throw ConfigError("constants.C1", "C1 must be positive");

  if (j.contains("initial")) {
    const auto& ic = j.at("initial");
    if (!ic.is_object()) throw ConfigError("initial", "expected an object");
    reject_unknown(ic, {"type", "slope", "seed", "amplitude", "kmax"}, "initial");
    cfg.initial.type = get_string(ic, "type", "initial", cfg.initial.type);
    cfg.initial.slope = get_number(ic, "slope", "initial", cfg.initial.slope);
    const auto seed = get_integer(ic, "seed", "initial", 0);
    if (seed < 0) throw ConfigError("initial.seed", "seed must be non-negative");
    cfg.initial.seed = static_cast<std::uint64_t>(seed);
    cfg.initial.amplitude = get_number(ic, "amplitude", "initial", cfg.initial.amplitude);
    if (ic.contains("kmax") && !ic.at("kmax").is_null()) {
      cfg.initial.kmax = get_number(ic, "kmax", "initial", 0.0);
      if (!(*cfg.initial.kmax > 0.0)) throw ConfigError("initial.kmax", "kmax must be positive");
    }
  }
  if (cfg.initial.type != "taylor_green" && cfg.initial.type != "random") {
    throw ConfigError("initial.type", "type must be \"taylor_green\" or \"random\"");
  }
  cfg.output_dir = get_string(j, "output_dir", "", cfg.output_dir);

  cfg.solver_config().validate();
  if (cfg.require_diagnostics && !diagnostics_in_range(cfg.alpha)) {
    throw ConfigError("alpha", "require_diagnostics needs alpha in [5/6, 5/4], got " +
                                   format_exact(cfg.alpha));
  }
  return cfg;
}

RunConfig load_run_config(const fs::path& path) { return parse_run_config(parse_json_file(path)); }

json to_json(const RunConfig& cfg) {
  json j;
  j["dim"] = cfg.dim;
  j["N"] = cfg.resolution;
  j["alpha"] = cfg.alpha;
  j["nu"] = cfg.nu;
  j["dt"] = cfg.dt;
  j["t_end"] = cfg.t_end;
  j["dealias"] = cfg.dealias == Dealias::TwoThirds ? "two_thirds" : "none";
  j["record_every"] = cfg.record_every;
  j["cutoff"] = optional_number(cfg.cutoff);
  j["snapshot_every"] = cfg.snapshot_every;
  j["nonlinear"] = cfg.nonlinear;
  j["require_diagnostics"] = cfg.require_diagnostics;
  j["constants"] = {{"C", cfg.constant_C}, {"C1", cfg.constant_C1}};
  j["initial"] = {{"type", cfg.initial.type},
                  {"slope", cfg.initial.slope},
                  {"seed", cfg.initial.seed},
                  {"amplitude", cfg.initial.amplitude},
                  {"kmax", optional_number(cfg.initial.kmax)}};
  return j;
}

std::string config_digest(const RunConfig& cfg) { return hex64(fnv1a(to_json(cfg).dump())); }

SpectralFieldd make_initial_field(const RunConfig& cfg) {
  const TorusGrid grid(cfg.dim, cfg.resolution);
  if (cfg.initial.type == "taylor_green") return taylor_green(grid, cfg.initial.amplitude);
  const double kmax = cfg.initial.kmax.value_or(std::numeric_limits<double>::infinity());
  return cfg.initial.amplitude *
         random_divfree_field(grid, cfg.initial.slope, cfg.initial.seed, kmax);
}

json to_json(const RegularityReport& r) {
  json j;
  j["alpha"] = r.alpha;
  j["nu"] = r.nu;
  j["C"] = r.C;
  j["C1"] = r.C1;
  j["q_threshold_ratio"] = r.q_threshold_ratio;
  j["smallness_holds"] = r.smallness_holds;
  j["t_star_local"] = optional_number(r.t_star_local);
  j["eventual_time"] = optional_number(r.eventual_time);
  j["monotone_decay_verified"] = r.monotone_decay_verified;
  j["c1_lower_bound"] = optional_number(r.c1_lower_bound);
  j["advisories"] = r.advisories;
  return j;
}

json to_json(const BlowupFit& f) {
  json j;
  j["t0"] = f.t0;
  j["beta"] = f.beta;
  j["A"] = f.A;
  j["rms_log_error"] = f.rms_log_error;
  j["alpha"] = optional_number(f.alpha);
  j["beta_theory"] = optional_number(f.beta_theory);
  j["beta_discrepancy"] = optional_number(f.beta_discrepancy);
  return j;
}

json to_json(const CoverMeasure& c) {
  return {{"gamma", c.gamma}, {"raw_sum", c.raw_sum}, {"normalized_sum", c.normalized_sum}};
}

RunOutcome execute_run(const RunConfig& cfg, const fs::path& out_dir) {
  const std::string digest = config_digest(cfg);
  fs::create_directories(out_dir);
  GalerkinIntegrator<double> integrator(cfg.solver_config(), make_initial_field(cfg), digest);
  try {
    integrator.run_to_end();
  } catch (const StabilityError&) {
    const auto& partial = integrator.result();
    auto warnings = partial.warnings;
    warnings.push_back("integration stopped at t = " + format_exact(integrator.time()) +
                       " after a non-finite step; records up to that time are kept");
    write_run_artifacts(out_dir, cfg, digest, partial.series, std::nullopt, warnings,
                        "stability_error");
    throw;
  }
  auto result = integrator.take_result();

  if (!result.snapshots.empty()) {
    const fs::path snap_dir = out_dir / "snapshots";
    fs::create_directories(snap_dir);
    for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
      const auto& [t, field] = result.snapshots[i];
      save_snapshot(snap_dir / snapshot_name(i), Snapshot{field, cfg.alpha, t});
    }
  }

  RunOutcome out{std::move(result.series), std::nullopt, std::move(result.warnings)};
  out.report = maybe_report(cfg, out.series);
  if (!out.report) {
    out.warnings.push_back("alpha " + format_exact(cfg.alpha) +
                           " is outside [5/6, 5/4]; regularity diagnostics omitted");
  }
  write_run_artifacts(out_dir, cfg, digest, out.series, out.report, out.warnings, "ok");
  return out;
}

SweepSpec parse_sweep_spec(const json& j) {
  if (!j.is_object()) throw ConfigError("", "sweep specification must be a JSON object");
  reject_unknown(j, {"base", "alpha_list", "output_root", "parallel_width"}, "");
  SweepSpec spec;
  if (!j.contains("base") || !j.at("base").is_object()) {
    throw ConfigError("base", "base must be a configuration object");
  }
  spec.base = j.at("base");
  if (!j.contains("alpha_list") || !j.at("alpha_list").is_array()) {
    throw ConfigError("alpha_list", "alpha_list must be an array of numbers");
  }
  const auto& list = j.at("alpha_list");
  if (list.empty()) throw ConfigError("alpha_list", "alpha_list must not be empty");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string field = "alpha_list[" + std::to_string(i) + "]";
    if (!list[i].is_number()) throw ConfigError(field, "expected a number");
    const double a = list[i].get<double>();
    if (!(a >= 0.0 && a <= kAlphaUpper)) {
      throw ConfigError(field, "alpha must lie in [0, 5/4], got " + format_exact(a));
    }
    spec.alpha_list.push_back(a);
  }
  spec.output_root = get_string(j, "output_root", "", spec.output_root);
  const auto width = get_integer(j, "parallel_width", "", 1);
  if (width < 1 || width > 256) {
    throw ConfigError("parallel_width", "parallel_width must be an integer in [1, 256]");
  }
  spec.parallel_width = static_cast<int>(width);
  // Base is validated once up front so schema errors fail the whole sweep.
  json probe = spec.base;
  probe["alpha"] = 1.0;
  parse_run_config(probe);
  return spec;
}

namespace {

std::string alpha_dir_name(double alpha) { return "alpha_" + format_exact(alpha); }

SweepRow sweep_member(const SweepSpec& spec, double alpha, const fs::path& root) {
  SweepRow row;
  row.alpha = alpha;
  try {
    json j = spec.base;
    j["alpha"] = alpha;
    const RunConfig cfg = parse_run_config(j);
    row.d_alpha = d_alpha_of(alpha, cfg.dim);
    const auto outcome = execute_run(cfg, root / alpha_dir_name(alpha));
    row.final_energy = outcome.series.back().l2_sq;
    if (outcome.report) {
      row.t_star = outcome.report->t_star_local;
      row.eventual_time = outcome.report->eventual_time;
      row.max_q_ratio = outcome.report->q_threshold_ratio;
    }
  } catch (const ConfigError& e) {
    row.status = "config_error: " + e.field() + ": " + e.what();
  } catch (const StabilityError& e) {
    row.status = "stability_error: last good t = " + format_exact(e.last_good_time());
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

std::string csv_cell(const std::optional<double>& x) { return x ? format_exact(*x) : ""; }

std::string sweep_digest(const SweepSpec& spec) {
  json j;
  j["base"] = spec.base;
  j["alpha_list"] = spec.alpha_list;
  return hex64(fnv1a(j.dump()));
}

}  // namespace

std::vector<SweepRow> execute_sweep(const SweepSpec& spec, const fs::path& root) {
  fs::create_directories(root);
  std::vector<SweepRow> rows(spec.alpha_list.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      rows[i] = sweep_member(spec, spec.alpha_list[i], root);
    }
  };
  const std::size_t width =
      std::min<std::size_t>(static_cast<std::size_t>(spec.parallel_width), rows.size());
  if (width <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < width; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  const std::string digest = sweep_digest(spec);
  std::ostringstream csv;
  csv << kSweepCsvHeader << '\n';
  json summary;
  summary["config_digest"] = digest;
  summary["rows"] = json::array();
  for (const auto& r : rows) {
    csv << format_exact(r.alpha) << ',' << csv_cell(r.d_alpha) << ',' << csv_cell(r.t_star) << ','
        << csv_cell(r.eventual_time) << ',' << csv_cell(r.max_q_ratio) << ','
        << csv_cell(r.final_energy) << '\n';
    summary["rows"].push_back({{"alpha", r.alpha},
                               {"d_alpha", optional_number(r.d_alpha)},
                               {"t_star", optional_number(r.t_star)},
                               {"eventual_time", optional_number(r.eventual_time)},
                               {"max_Q_ratio", optional_number(r.max_q_ratio)},
                               {"final_energy", optional_number(r.final_energy)},
                               {"status", r.status},
                               {"output_dir", alpha_dir_name(r.alpha)}});
  }
  csv << "# config_digest=" << digest << '\n';
  write_text(root / "summary.csv", csv.str());
  write_text(root / "summary.json", summary.dump(2) + "\n");
  return rows;
}

std::string fmt12(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

namespace {

constexpr const char* kHelpFooter = R"(Output files:
  run       <out>/series.csv   header: t,l2_sq,halpha_sq,h2alpha_sq,diss_integral,Q,residual,nonlin_flux
            <out>/report.json  regularity report, config digest and constants used
            <out>/snapshots/snapshot_NNNNNN.bin  when snapshot_every > 0
  sweep     <root>/summary.csv header: alpha,d_alpha,t_star,eventual_time,max_Q_ratio,final_energy
            <root>/summary.json, <root>/alpha_<value>/ per member run
  cover     interval input header: tau,s
  fit       input header: t,y  (or a series.csv, using y = sqrt(halpha_sq))
CSV files end with a '# config_digest=<hex>' comment line.

Environment:
  OUTPUT_ROOT  prefix for relative output_dir / output_root values (--output takes precedence)

Exit codes: 0 success, 2 usage/config/IO error, 3 numerical instability, 4 domain or fit error.)";

void emit(std::ostream& out, const std::string& key, double value) {
  out << key << " = " << fmt12(value) << '\n';
}

void emit(std::ostream& out, const std::string& key, const std::optional<double>& value) {
  out << key << " = " << (value ? fmt12(*value) : std::string("none")) << '\n';
}

void write_error(std::ostream& err, const char* kind, const std::string& message, int code,
                 const json& extra = json::object()) {
  json rec = extra;
  rec["error"] = kind;
  rec["message"] = message;
  rec["exit_code"] = code;
  err << rec.dump() << '\n';
}

std::string input_digest(const fs::path& path) { return hex64(fnv1a(read_file(path))); }

NormSeries load_norm_series(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_norm_series_csv(is);
}

void maybe_write_json(const std::optional<std::string>& path, const json& doc) {
  if (path) write_text(*path, doc.dump(2) + "\n");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudo-spectral fractional Navier-Stokes solver and regularity diagnostics",
               "fracns"};
  app.require_subcommand(1);
  app.footer(kHelpFooter);

  std::string config_path;
  std::string input_path;
  std::optional<std::string> output;
  std::optional<double> alpha;
  std::optional<double> constant_C;
  std::optional<double> constant_C1;
  std::optional<std::uint64_t> seed;
  int dim = 3;
  double gamma = 1.0;

  auto* run = app.add_subcommand("run", "integrate one configuration");
  run->add_option("--config", config_path, "run configuration (JSON)")->required();
  run->add_option("--output", output, "output directory");
  run->add_option("--alpha", alpha, "override alpha");
  run->add_option("--constant-C", constant_C, "override constant C");
  run->add_option("--constant-C1", constant_C1, "override constant C1");
  run->add_option("--seed", seed, "override initial.seed");

  auto* sweep = app.add_subcommand("sweep", "one run per alpha in alpha_list");
  sweep->add_option("--config", config_path, "sweep specification (JSON)")->required();
  sweep->add_option("--output", output, "output root directory");

  auto* fit = app.add_subcommand("fit", "fit y = A (t0 - t)^-beta to a norm series");
  fit->add_option("--input", input_path, "CSV with header t,y or a series.csv")->required();
  fit->add_option("--alpha", alpha, "alpha for the theoretical exponent");
  fit->add_option("--output", output, "write the fit as JSON");

  auto* cover = app.add_subcommand("cover", "cover sum over the gaps of an interval set");
  cover->add_option("--intervals,--input", input_path, "CSV with header tau,s")->required();
  cover->add_option("--gamma", gamma, "cover exponent (> 0)")->required();
  cover->add_option("--output", output, "write the measure as JSON");

  auto* exponent = app.add_subcommand("exponent", "Hausdorff and scaling exponents");
  exponent->add_option("--alpha", alpha, "dissipation index")->required();
  exponent->add_option("--dim", dim, "space dimension")->capture_default_str();
  exponent->add_option("--output", output, "write the exponents as JSON");

  auto* report = app.add_subcommand("report", "regularity report for an existing series.csv");
  report->add_option("--input", input_path, "series.csv written by run")->required();
  report->add_option("--config", config_path, "configuration the series was produced with")
      ->required();
  report->add_option("--constant-C", constant_C, "override constant C");
  report->add_option("--constant-C1", constant_C1, "override constant C1");
  report->add_option("--output", output, "write the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    write_error(err, "UsageError", e.what(), kUsageError);
    return kUsageError;
  }

  try {
    if (run->parsed()) {
      json j = parse_json_file(config_path);
      if (j.is_object()) {
        if (alpha) j["alpha"] = *alpha;
        if (constant_C) j["constants"]["C"] = *constant_C;
        if (constant_C1) j["constants"]["C1"] = *constant_C1;
        if (seed) j["initial"]["seed"] = *seed;
      }
      const RunConfig cfg = parse_run_config(j);
      const fs::path dir = resolve_output(output, cfg.output_dir);
      const auto outcome = execute_run(cfg, dir);
      for (const auto& w : outcome.warnings) err << "warning: " << w << '\n';
      out << "output_dir = " << dir.string() << '\n';
      out << "config_digest = " << config_digest(cfg) << '\n';
      out << "records = " << outcome.series.size() << '\n';
      emit(out, "final_time", outcome.series.back().t);
      emit(out, "final_l2_sq", outcome.series.back().l2_sq);
      double max_res = 0.0;
      for (const auto& r : outcome.series.records()) max_res = std::max(max_res, std::abs(r.residual));
      emit(out, "max_abs_residual", max_res);
      if (outcome.report) {
        emit(out, "q_threshold_ratio", outcome.report->q_threshold_ratio);
        emit(out, "t_star_local", outcome.report->t_star_local);
        emit(out, "eventual_time", outcome.report->eventual_time);
      }
      return kOk;
    }
    if (sweep->parsed()) {
      const SweepSpec spec = parse_sweep_spec(parse_json_file(config_path));
      const fs::path root = resolve_output(output, spec.output_root);
      const auto rows = execute_sweep(spec, root);
      out << "output_root = " << root.string() << '\n';
      out << kSweepCsvHeader << ",status\n";
      for (const auto& r : rows) {
        auto cell = [](const std::optional<double>& x) { return x ? fmt12(*x) : std::string(); };
        out << fmt12(r.alpha) << ',' << cell(r.d_alpha) << ',' << cell(r.t_star) << ','
            << cell(r.eventual_time) << ',' << cell(r.max_q_ratio) << ',' << cell(r.final_energy)
            << ',' << r.status << '\n';
      }
      return kOk;
    }
    if (fit->parsed()) {
      NormSeries series = load_norm_series(input_path);
      if (alpha) series.alpha = *alpha;
      const BlowupFit f = fit_blowup(series);
      emit(out, "t0", f.t0);
      emit(out, "beta", f.beta);
      emit(out, "A", f.A);
      emit(out, "rms_log_error", f.rms_log_error);
      emit(out, "beta_theory", f.beta_theory);
      emit(out, "beta_discrepancy", f.beta_discrepancy);
      json doc = to_json(f);
      doc["data_source"] = fs::path(input_path).filename().string();
      doc["input_digest"] = input_digest(input_path);
      maybe_write_json(output, doc);
      return kOk;
    }
    if (cover->parsed()) {
      std::ifstream is(input_path);
      if (!is) throw std::runtime_error("cannot open " + input_path);
      const IntervalSet set = read_intervals_csv(is);
      const CoverMeasure m = cover_sum(set, gamma);
      emit(out, "gamma", m.gamma);
      emit(out, "raw_sum", m.raw_sum);
      emit(out, "normalized_sum", m.normalized_sum);
      out << "gaps = " << set.gaps().size() << '\n';
      json doc = to_json(m);
      doc["gaps"] = set.gaps().size();
      doc["input_digest"] = input_digest(input_path);
      maybe_write_json(output, doc);
      return kOk;
    }
    if (exponent->parsed()) {
      if (dim < 1) throw DomainError("dim must be positive");
      const double h = hausdorff_exponent(*alpha, dim);
      const double s = scaling_exponent(*alpha, dim);
      out << fmt12(h) << '\n';
      emit(out, "hausdorff_exponent", h);
      emit(out, "scaling_exponent", s);
      maybe_write_json(output, {{"alpha", *alpha},
                                {"dim", dim},
                                {"hausdorff_exponent", h},
                                {"scaling_exponent", s}});
      return kOk;
    }
    if (report->parsed()) {
      RunConfig cfg = load_run_config(config_path);
      if (constant_C) cfg.constant_C = *constant_C;
      if (constant_C1) cfg.constant_C1 = *constant_C1;
      if (!(cfg.constant_C > 0.0)) throw ConfigError("constants.C", "C must be positive");
      if (!(cfg.constant_C1 > 0.0)) throw ConfigError("constants.C1", "C1 must be positive");
      if (!diagnostics_in_range(cfg.alpha)) {
        throw DomainError("regularity diagnostics need alpha in [5/6, 5/4], got " +
                          format_exact(cfg.alpha));
      }
      std::ifstream is(input_path);
      if (!is) throw std::runtime_error("cannot open " + input_path);
      const EnergySeries series = read_series_csv(
          is, SeriesMetadata{cfg.dim, cfg.resolution, cfg.alpha, cfg.nu, config_digest(cfg)});
      const RegularityReport r = regularity_report(series, cfg.constant_C, cfg.constant_C1);
      emit(out, "q_threshold_ratio", r.q_threshold_ratio);
      out << "smallness_holds = " << (r.smallness_holds ? "true" : "false") << '\n';
      emit(out, "t_star_local", r.t_star_local);
      emit(out, "eventual_time", r.eventual_time);
      out << "monotone_decay_verified = " << (r.monotone_decay_verified ? "true" : "false")
          << '\n';
      emit(out, "c1_lower_bound", r.c1_lower_bound);
      json doc = report_document(cfg, config_digest(cfg), series, r, {}, "ok");
      doc["data_source"] = fs::path(input_path).filename().string();
      doc["input_digest"] = input_digest(input_path);
      maybe_write_json(output, doc);
      return kOk;
    }
  } catch (const ConfigError& e) {
    write_error(err, "ConfigError", e.what(), kUsageError, {{"field", e.field()}});
    return kUsageError;
  } catch (const StabilityError& e) {
    write_error(err, "StabilityError", e.what(), kStabilityError,
                {{"last_good_time", e.last_good_time()}});
    return kStabilityError;
  } catch (const FitError& e) {
    write_error(err, "FitError", e.what(), kDomainError);
    return kDomainError;
  } catch (const DomainError& e) {
    write_error(err, "DomainError", e.what(), kDomainError);
    return kDomainError;
  } catch (const OverflowError& e) {
    write_error(err, "OverflowError", e.what(), kDomainError);
    return kDomainError;
  } catch (const IndexError& e) {
    write_error(err, "IndexError", e.what(), kDomainError);
    return kDomainError;
  } catch (const GridMismatchError& e) {
    write_error(err, "GridMismatchError", e.what(), kDomainError);
    return kDomainError;
  } catch (const std::exception& e) {
    write_error(err, "IOError", e.what(), kUsageError);
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace fracns::cli
