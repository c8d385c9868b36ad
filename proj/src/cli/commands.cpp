#include "idec/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "idec/cli/sweep.hpp"
#include "idec/io.hpp"
#include "idec/observables.hpp"
#include "idec/propagator.hpp"
#include "idec/random_instances.hpp"
#include "idec/scenarios.hpp"
#include "params.hpp"

namespace idec::cli {

using nlohmann::json;
using io::csv_row;
using io::format_double;

namespace {

constexpr double kKernelTail = 1e-7;
constexpr double kStateTol = 1e-9;
constexpr double kMonteCarloStateTol = 1e-6;

std::string dump(const json& j) { return j.dump(2) + "\n"; }

bool json_format(const RunConfig& cfg) {
  if (cfg.format == "json") return true;
  if (cfg.format == "csv") return false;
  throw InvalidInput("--format must be csv or json");
}

std::vector<double> default_times(const RunConfig& cfg, double stop, int count) {
  if (!cfg.times.empty()) return cfg.absolute_times();
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) t[static_cast<std::size_t>(i)] = stop * i / (count - 1);
  return t;
}

double single_time(const RunConfig& cfg, const char* what) {
  const auto t = cfg.absolute_times();
  if (t.size() != 1) throw InvalidInput(std::string(what) + " needs exactly one time (--t)");
  return t.front();
}

json kernel_json(const KernelParams& k) {
  return {{"tau1", k.tau1()}, {"tau2", k.tau2()}, {"advisory", k.advisory()}};
}

/// Rows of a table as a JSON document under --format json.
json table_json(const std::vector<std::string>& columns,
                const std::vector<std::vector<double>>& rows) {
  json r = json::array();
  for (const auto& row : rows) r.push_back(row);
  return {{"columns", columns}, {"rows", r}};
}

std::string table_csv(const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
  std::string out = csv_row(columns);
  for (const auto& row : rows) {
    std::vector<std::string> fields;
    fields.reserve(row.size());
    for (double v : row) fields.push_back(format_double(v));
    out += csv_row(fields);
  }
  return out;
}

CommandOutput finish_table(const RunConfig& cfg, const std::vector<std::string>& columns,
                           const std::vector<std::vector<double>>& rows, const json& summary) {
  CommandOutput out;
  if (json_format(cfg)) {
    json doc = table_json(columns, rows);
    if (!summary.is_null()) doc["summary"] = summary;
    out.data = dump(doc);
  } else {
    out.data = table_csv(columns, rows);
    if (!summary.is_null()) out.summary = dump(summary);
  }
  return out;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input:
    case ErrorKind::degenerate_input:
      return kExitInvalid;
    case ErrorKind::numeric_failure:
    case ErrorKind::invariant_violation:
      return kExitInvariant;
    case ErrorKind::model_mismatch:
      return kExitMismatch;
  }
  return kExitInvariant;
}

// ---------------------------------------------------------------------------

CommandOutput run_kernel(const RunConfig& cfg) {
  const KernelParams k = cfg.kernel();
  const double t = single_time(cfg, "kernel");
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidInput("kernel: t must be positive");
  if (cfg.points < 2) throw InvalidInput("kernel: --points must be at least 2");
  const double shape = k.shape(t);
  const double x_hi = boost::math::gamma_q_inv(shape, kKernelTail);
  const double hi = x_hi * k.tau1();
  const auto n = static_cast<std::size_t>(cfg.points);

  std::vector<std::vector<double>> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double tp = hi * static_cast<double>(i) / static_cast<double>(n - 1);
    rows[i] = {tp, gamma_pdf(k, t, tp)};
  }
  const KernelMoments m = kernel_moments(k, t);
  json summary = {{"t", t},
                  {"shape", shape},
                  {"kernel", kernel_json(k)},
                  {"mean", m.mean},
                  {"sigma", m.sigma},
                  {"relative_dispersion", m.relative_dispersion},
                  {"grid_upper", hi},
                  {"covered_mass", boost::math::gamma_p(shape, x_hi)}};
  return finish_table(cfg, {"t_prime", "pdf"}, rows, summary);
}

// ---------------------------------------------------------------------------

CommandOutput run_evolve(const RunConfig& cfg) {
  const EnergySpectrum spectrum = detail::load_spectrum(cfg);
  const DensityMatrix rho0 = detail::load_state(cfg, spectrum.dim());
  const KernelParams k = cfg.kernel();
  const EvolutionMethod method = cfg.evolution_method();
  const auto times = cfg.absolute_times();
  if (times.empty()) throw InvalidInput("evolve: --t or --times is required");
  check_times(times);
  const double tol = method.kind == Method::monte_carlo ? kMonteCarloStateTol : kStateTol;
  const int d = spectrum.dim();

  std::vector<std::string> columns{"t"};
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      const std::string idx = std::to_string(n) + "_" + std::to_string(m);
      columns.push_back("re_" + idx);
      columns.push_back("im_" + idx);
    }
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(times.size());
  json states = json::array();
  std::string failures;
  for (double t : times) {
    const DensityMatrix rho = evolve(rho0, spectrum, k, t, method);
    std::vector<double> row{t};
    for (int n = 0; n < d; ++n) {
      for (int m = 0; m < d; ++m) {
        row.push_back(rho(n, m).real());
        row.push_back(rho(n, m).imag());
      }
    }
    rows.push_back(std::move(row));
    const ValidationReport report = validate_density(rho, tol);
    if (!report.ok()) failures += "t = " + format_double(t) + ": " + report.describe() + "\n";
  }
  json summary = {{"method", to_string(method.kind)},
                  {"kernel", kernel_json(k)},
                  {"dim", d},
                  {"validation_tol", tol}};
  if (method.kind == Method::monte_carlo) {
    summary["seed"] = method.seed;
    summary["samples"] = method.samples;
  }
  CommandOutput out = finish_table(cfg, columns, rows, summary);
  if (!failures.empty()) {
    out.exit_code = kExitInvariant;
    out.diagnostic = "evolve: state validation failed\n" + failures;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

CommandOutput scenario_osc(const RunConfig& cfg) {
  const auto p = detail::osc_params(cfg);
  const auto times = default_times(cfg, 20.0 * p.kernel.tau2(), 201);
  const Trajectory tr = scenarios::oscillator_amplitude(p, times);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto a = tr.values[i];
    rows.push_back({times[i], a.real(), a.imag(), std::abs(a)});
  }
  const RatePair r = rate_pair(p.omega, p.kernel);
  json frozen = json::array();
  for (double w : milburn_frozen_frequencies(p.kernel, 3)) {
    const RatePair fr = rate_pair(w, p.kernel);
    frozen.push_back({{"omega", w}, {"gamma", fr.gamma}, {"nu", fr.nu}});
  }
  json summary = {{"scenario", "osc"},
                  {"kernel", kernel_json(p.kernel)},
                  {"omega", p.omega},
                  {"gamma", r.gamma},
                  {"nu", r.nu},
                  {"t_decoherence", 1.0 / r.gamma},
                  {"frozen", frozen}};
  return finish_table(cfg, {"t", "re_a", "im_a", "modulus"}, rows, summary);
}

CommandOutput scenario_cat(const RunConfig& cfg) {
  const auto p = detail::cat_params(cfg);
  const auto x = detail::cat_grid(cfg, p);
  const auto times = default_times(cfg, 4.0 * p.kernel.tau2(), 5);
  check_times(times);
  const double omega_if = scenarios::interference_frequency(p);
  const RatePair r = rate_pair(omega_if, p.kernel);

  json blocks = json::array();
  std::string csv;
  std::string warnings;
  for (double t : times) {
    const auto rec = scenarios::cat_interference_at(p, omega_if, t, x);
    csv += csv_row({"t", format_double(t)});
    csv += csv_row({"x", "p_bar"});
    for (std::size_t i = 0; i < x.size(); ++i) {
      csv += csv_row({format_double(x[i]), format_double(rec.p_bar[i])});
    }
    csv += csv_row({"visibility", "t_decoherence"});
    csv += csv_row({format_double(rec.visibility), format_double(rec.t_decoherence)});
    csv += "\n";
    json block = {{"t", t},
                  {"x", x},
                  {"p_bar", rec.p_bar},
                  {"visibility", rec.visibility},
                  {"t_decoherence", rec.t_decoherence},
                  {"mass", rec.mass},
                  {"spread", scenarios::free_particle_spread(p, t)}};
    if (rec.warning) {
      block["warning"] = *rec.warning;
      warnings += "t = " + format_double(t) + ": " + *rec.warning + "\n";
    }
    blocks.push_back(std::move(block));
  }
  json summary = {{"scenario", "cat"},
                  {"kernel", kernel_json(p.kernel)},
                  {"mass", p.mass},
                  {"sigma_x", p.sigma_x},
                  {"sigma_v", p.sigma_v},
                  {"separation_d", p.separation_d},
                  {"hbar", p.hbar},
                  {"uncertainty_advisory", p.uncertainty_advisory()},
                  {"omega_if", omega_if},
                  {"gamma", r.gamma},
                  {"nu", r.nu},
                  {"t_decoherence", 1.0 / r.gamma}};
  CommandOutput out;
  if (json_format(cfg)) {
    json trimmed = json::array();
    for (const auto& b : blocks) trimmed.push_back(b);
    out.data = dump({{"blocks", trimmed}, {"summary", summary}});
  } else {
    out.data = csv;
    out.summary = dump(summary);
  }
  out.diagnostic = warnings;
  return out;
}

CommandOutput scenario_rabi(const RunConfig& cfg) {
  const auto p = detail::rabi_params(cfg);
  const RatePair r = rate_pair(p.rabi_frequency(), p.kernel);
  const double stop = r.gamma > 0.0 ? std::min(5.0 / r.gamma, 1e4 * p.kernel.tau2())
                                    : 20.0 * p.kernel.tau2();
  const auto times = default_times(cfg, stop, 1001);
  const auto tr = scenarios::rabi_population(p, times);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < times.size(); ++i) {
    rows.push_back({times[i], tr.d_bar[i], tr.envelope[i]});
  }
  json summary = {{"scenario", "rabi"},
                  {"kernel", kernel_json(p.kernel)},
                  {"g", p.g},
                  {"n_photons", p.n_photons},
                  {"rabi_frequency", p.rabi_frequency()},
                  {"gamma", tr.gamma},
                  {"nu", tr.nu},
                  {"t_decoherence", 1.0 / tr.gamma}};
  try {
    summary["fitted_gamma"] = scenarios::fitted_rabi_gamma(p);
  } catch (const DegenerateInput& e) {
    summary["fitted_gamma"] = nullptr;
    summary["fit_note"] = e.what();
  }
  return finish_table(cfg, {"t", "d_bar", "envelope"}, rows, summary);
}

CommandOutput scenario_epr(const RunConfig& cfg) {
  const auto p = detail::epr_params(cfg);
  const auto times = default_times(cfg, 2.0 * p.flight_time(), 201);
  check_times(times);
  constexpr std::array<double, 3> ex{1.0, 0.0, 0.0};
  constexpr std::array<double, 3> ey{0.0, 1.0, 0.0};
  constexpr std::array<double, 3> ez{0.0, 0.0, 1.0};
  std::vector<std::vector<double>> rows;
  for (double t : times) {
    const DensityMatrix rho = scenarios::epr_state(p, t);
    rows.push_back({t, scenarios::epr_correlation(rho, ex, ex),
                    scenarios::epr_correlation(rho, ey, ey),
                    scenarios::epr_correlation(rho, ez, ez), scenarios::singlet_fidelity(rho)});
  }
  const RatePair r = rate_pair(p.omega0, p.kernel);
  const double tf = p.flight_time();
  json summary = {{"scenario", "epr"},
                  {"kernel", kernel_json(p.kernel)},
                  {"omega0", p.omega0},
                  {"flight_time", tf},
                  {"gamma", r.gamma},
                  {"nu", r.nu},
                  {"t_decoherence", 1.0 / r.gamma},
                  {"gamma_flight_time", r.gamma * tf},
                  {"fidelity_at_flight_time",
                   scenarios::singlet_fidelity(scenarios::epr_state(p, tf))}};
  return finish_table(cfg, {"t", "E_xx", "E_yy", "E_zz", "singlet_fidelity"}, rows, summary);
}

}  // namespace

CommandOutput run_scenario(const RunConfig& cfg) {
  if (cfg.scenario.empty()) throw InvalidInput("scenario: name required (osc, cat, rabi, epr)");
  detail::require_known_params(cfg, cfg.scenario);
  if (cfg.scenario == "osc") return scenario_osc(cfg);
  if (cfg.scenario == "cat") return scenario_cat(cfg);
  if (cfg.scenario == "rabi") return scenario_rabi(cfg);
  return scenario_epr(cfg);
}

// ---------------------------------------------------------------------------

namespace {

struct CheckTally {
  double trace_drift = 0.0;
  double hermiticity = 0.0;
  double min_eigenvalue = std::numeric_limits<double>::infinity();
  double semigroup = 0.0;
  double finite_difference = 0.0;
  double ehrenfest = 0.0;
  double ehrenfest_scaled = 0.0;
  int tm_violations = 0;
  int tm_degenerate = 0;
};

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

CommandOutput run_check(const RunConfig& cfg) {
  if (cfg.instances < 1) throw InvalidInput("check: --instances must be positive");
  json failures = json::array();
  auto fail = [&](const std::string& what) { failures.push_back(what); };

  // Kernel normalization and Poisson mass.
  double norm_err = 0.0;
  double poisson_err = 0.0;
  for (double tau1 : {0.1, 1.0, 3.0}) {
    for (double k : {0.3, 1.0, 7.5, 40.0}) {
      const KernelParams p(tau1, 1.0);
      const auto one = coarse_grain(p, k, [](double) { return std::complex<double>(1.0); });
      norm_err = std::max(norm_err, std::abs(one - 1.0));
      double sum = 0.0;
      const auto n_max = static_cast<unsigned>(k + 40.0 * std::sqrt(k) + 40.0);
      for (unsigned n = n_max + 1; n-- > 0;) sum += poisson_pmf(p, k, n);
      poisson_err = std::max(poisson_err, std::abs(sum - 1.0));
    }
  }
  if (norm_err > 1e-10) fail("kernel normalization error " + format_double(norm_err));
  if (poisson_err > 1e-12) fail("poisson mass error " + format_double(poisson_err));

  // Random instances.
  std::mt19937_64 rng(cfg.seed);
  CheckTally tally;
  const KernelParams base = cfg.kernel();
  for (int i = 0; i < cfg.instances; ++i) {
    const int dim = 2 + i % 5;
    const double tau1 = base.tau1() * (0.25 + 0.25 * (i % 6));
    const KernelParams p(tau1, base.tau2());
    const auto spectrum = random_spectrum(dim, rng, 2.0);
    const auto rho0 = (i % 2 == 0) ? random_density(dim, rng) : random_pure_density(dim, rng);
    const auto a = random_observable(dim, rng);
    const double t1 = base.tau2() * (1 + i % 7);
    const double t2 = base.tau2() * (1 + i % 3);

    const auto rho1 = evolve(rho0, spectrum, p, t1, EvolutionMethod::of(Method::closed_form));
    tally.trace_drift =
        std::max(tally.trace_drift, std::abs(rho1.entries().trace() - rho0.entries().trace()));
    tally.hermiticity = std::max(tally.hermiticity, max_hermiticity_deviation(rho1.entries()));
    const CMatrix herm = 0.5 * (rho1.entries() + rho1.entries().adjoint());
    tally.min_eigenvalue = std::min(tally.min_eigenvalue, min_eigenvalue(herm));

    const auto rho12 = evolve(rho1, spectrum, p, t2, EvolutionMethod::of(Method::closed_form));
    const auto direct =
        evolve(rho0, spectrum, p, t1 + t2, EvolutionMethod::of(Method::closed_form));
    tally.semigroup =
        std::max(tally.semigroup, max_abs(rho12.entries() - direct.entries()));

    const auto fd = evolve(rho0, spectrum, p, t1, EvolutionMethod::of(Method::finite_difference));
    tally.finite_difference =
        std::max(tally.finite_difference, max_abs(fd.entries() - rho1.entries()));

    const double scale =
        a.spectral_norm() * Observable(spectrum.hamiltonian()).spectral_norm() / spectrum.hbar();
    const double res = ehrenfest_fd_residual(rho0, a, spectrum, p, t1);
    tally.ehrenfest = std::max(tally.ehrenfest, res);
    tally.ehrenfest_scaled = std::max(tally.ehrenfest_scaled, res / std::max(scale, 1e-300));

    try {
      if (!tm_report(rho0, a, spectrum, p, t1).holds) ++tally.tm_violations;
    } catch (const DegenerateInput&) {
      ++tally.tm_degenerate;
    }
  }
  if (tally.trace_drift != 0.0) fail("trace drift " + format_double(tally.trace_drift));
  if (tally.hermiticity > 1e-12) fail("hermiticity deviation " + format_double(tally.hermiticity));
  if (tally.min_eigenvalue < -1e-10) fail("negative eigenvalue " + format_double(tally.min_eigenvalue));
  if (tally.semigroup > 1e-12) fail("semigroup error " + format_double(tally.semigroup));
  if (tally.finite_difference > 1e-12) {
    fail("finite-difference error " + format_double(tally.finite_difference));
  }
  if (tally.ehrenfest_scaled > 1e-10) {
    fail("ehrenfest residual " + format_double(tally.ehrenfest_scaled) + " (scaled)");
  }
  if (tally.tm_violations > 0) fail(std::to_string(tally.tm_violations) + " TM violations");

  json report = {{"instances", cfg.instances},
                 {"seed", cfg.seed},
                 {"kernel", kernel_json(base)},
                 {"kernel_normalization_max_error", norm_err},
                 {"poisson_mass_max_error", poisson_err},
                 {"trace_max_drift", tally.trace_drift},
                 {"hermiticity_max_deviation", tally.hermiticity},
                 {"min_eigenvalue", tally.min_eigenvalue},
                 {"semigroup_max_error", tally.semigroup},
                 {"finite_difference_max_error", tally.finite_difference},
                 {"ehrenfest_max_residual", tally.ehrenfest},
                 {"ehrenfest_max_scaled_residual", tally.ehrenfest_scaled},
                 {"tm_violations", tally.tm_violations},
                 {"tm_degenerate_skipped", tally.tm_degenerate}};

  // Fixture evolution, when files are given.
  if (cfg.spectrum || cfg.rho0) {
    const EnergySpectrum spectrum = detail::load_spectrum(cfg);
    const DensityMatrix rho0 = detail::load_state(cfg, spectrum.dim());
    const EvolutionMethod method = cfg.evolution_method();
    const double tol = method.kind == Method::monte_carlo ? kMonteCarloStateTol : kStateTol;
    std::vector<double> times = cfg.absolute_times();
    if (times.empty()) {
      for (int j = 0; j <= 10; ++j) times.push_back(base.tau2() * j);
    }
    check_times(times);
    int bad = 0;
    const auto input_report = validate_density(rho0, tol);
    if (!input_report.ok()) fail("fixture state: " + input_report.describe());
    for (double t : times) {
      const auto report_t = validate_density(evolve(rho0, spectrum, base, t, method), tol);
      if (!report_t.ok()) {
        ++bad;
        fail("fixture at t = " + format_double(t) + ": " + report_t.describe());
      }
    }
    report["fixture"] = {{"method", to_string(method.kind)},
                         {"times", times.size()},
                         {"state_violations", bad},
                         {"input_valid", input_report.ok()}};
  }
  report["violations"] = failures.size();
  report["failures"] = failures;

  CommandOutput out;
  out.data = dump(report);
  if (!failures.empty()) {
    out.exit_code = kExitInvariant;
    out.diagnostic = "check: invariant failures\n";
    for (const auto& f : failures) out.diagnostic += "  " + f.get<std::string>() + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

CommandOutput run_sweep(const RunConfig& cfg) {
  const SweepSpec spec = parse_sweep(cfg.sweep);
  const double cells = cell_count(spec);
  if (cells > kMaxSweepCells && !cfg.allow_large) {
    throw InvalidInput("sweep has " + format_double(cells) + " cells, above the bound of " +
                       format_double(kMaxSweepCells) + "; pass --allow-large to run it");
  }
  if (cfg.workers < 1) throw InvalidInput("--workers must be positive");
  CommandOutput out;
  const std::string csv = sweep_csv(cfg, spec);
  if (json_format(cfg)) {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::stringstream header(line);
    for (std::string c; std::getline(header, c, ',');) columns.push_back(c);
    while (std::getline(in, line)) {
      std::vector<double> row;
      std::stringstream ls(line);
      for (std::string c; std::getline(ls, c, ',');) row.push_back(std::stod(c));
      rows.push_back(std::move(row));
    }
    json doc = table_json(columns, rows);
    doc["target"] = spec.target;
    doc["reduction"] = spec.reduction;
    out.data = dump(doc);
  } else {
    out.data = csv;
  }
  return out;
}

// ---------------------------------------------------------------------------

CommandOutput run(const RunConfig& cfg) {
  try {
    if (cfg.command == "kernel") return run_kernel(cfg);
    if (cfg.command == "evolve") return run_evolve(cfg);
    if (cfg.command == "scenario") return run_scenario(cfg);
    if (cfg.command == "check") return run_check(cfg);
    if (cfg.command == "sweep") return run_sweep(cfg);
    throw InvalidInput("unknown command '" + cfg.command + "'");
  } catch (const Error& e) {
    CommandOutput out;
    out.exit_code = exit_code_for(e.kind());
    out.diagnostic = std::string(to_string(e.kind())) + ": " + e.what() + "\n";
    return out;
  } catch (const json::exception& e) {
    CommandOutput out;
    out.exit_code = kExitInvalid;
    out.diagnostic = std::string(to_string(ErrorKind::invalid_input)) + ": " + e.what() + "\n";
    return out;
  }
}

// ---------------------------------------------------------------------------

namespace {

struct Flags {
  std::string config;
  double tau1 = 0, tau2 = 0, t = 0;
  std::string times, method, spectrum, rho0, out, summary, format, scenario;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double tol = 0;
  int workers = 0, points = 0, instances = 0;
  bool grid_units = false, allow_large = false;
  std::vector<std::string> params;
};

struct Options {
  CLI::Option* config;
  CLI::Option* tau1;
  CLI::Option* tau2;
  CLI::Option* t;
  CLI::Option* times;
  CLI::Option* method;
  CLI::Option* spectrum;
  CLI::Option* rho0;
  CLI::Option* seed;
  CLI::Option* samples;
  CLI::Option* tol;
  CLI::Option* out;
  CLI::Option* summary;
  CLI::Option* format;
  CLI::Option* grid_units;
  CLI::Option* workers;
  CLI::Option* points = nullptr;
  CLI::Option* instances = nullptr;
  CLI::Option* allow_large = nullptr;
  CLI::Option* scenario = nullptr;
  CLI::Option* params = nullptr;
};

Options add_common(CLI::App& app, Flags& f) {
  Options o{};
  o.config = app.add_option("--config", f.config, "JSON config file; flags override its keys");
  o.tau1 = app.add_option("--tau1", f.tau1, "event width tau1");
  o.tau2 = app.add_option("--tau2", f.tau2, "mean event spacing tau2");
  o.t = app.add_option("--t", f.t, "single time");
  o.times = app.add_option("--times", f.times, "times: a,b,c or start:stop:count");
  o.method = app.add_option("--method", f.method,
                            "unitary, closed_form, finite_difference, second_order, milburn, "
                            "quadrature or monte_carlo");
  o.spectrum = app.add_option("--spectrum", f.spectrum, "spectrum JSON file");
  o.rho0 = app.add_option("--rho0", f.rho0, "initial state JSON file");
  o.seed = app.add_option("--seed", f.seed, "random seed");
  o.samples = app.add_option("--samples", f.samples, "Monte-Carlo sample count");
  o.tol = app.add_option("--tol", f.tol, "quadrature tolerance");
  o.out = app.add_option("--out", f.out, "output path (default stdout)");
  o.summary = app.add_option("--summary", f.summary, "JSON summary path");
  o.format = app.add_option("--format", f.format, "csv or json");
  o.grid_units = app.add_flag("--grid-units", f.grid_units, "times are in units of tau2");
  o.workers = app.add_option("--workers", f.workers, "worker threads");
  return o;
}

void apply_flags(RunConfig& cfg, const Options& o, const Flags& f) {
  if (o.tau1->count()) cfg.tau1 = f.tau1;
  if (o.tau2->count()) cfg.tau2 = f.tau2;
  if (o.t->count() && o.times->count()) throw InvalidInput("give either --t or --times");
  if (o.t->count()) cfg.times = {f.t};
  if (o.times->count()) cfg.times = parse_times(f.times);
  if (o.method->count()) cfg.method = f.method;
  if (o.spectrum->count()) cfg.spectrum = f.spectrum;
  if (o.rho0->count()) cfg.rho0 = f.rho0;
  if (o.seed->count()) cfg.seed = f.seed;
  if (o.samples->count()) cfg.samples = f.samples;
  if (o.tol->count()) cfg.tol = f.tol;
  if (o.out->count()) cfg.out = f.out;
  if (o.summary->count()) cfg.summary = f.summary;
  if (o.format->count()) cfg.format = f.format;
  if (o.grid_units->count()) cfg.grid_units = true;
  if (o.workers->count()) cfg.workers = f.workers;
  if (o.points && o.points->count()) cfg.points = f.points;
  if (o.instances && o.instances->count()) cfg.instances = f.instances;
  if (o.allow_large && o.allow_large->count()) cfg.allow_large = true;
  if (o.scenario && o.scenario->count()) cfg.scenario = f.scenario;
  if (o.params) {
    for (const auto& text : f.params) {
      const auto [key, value] = parse_param(text);
      cfg.params[key] = value;
    }
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InvalidInput("cannot write " + path.string());
  file << text;
  if (!file) throw InvalidInput("write failed for " + path.string());
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coarse-grained intrinsic decoherence toolkit", "idec"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::vector<std::pair<CLI::App*, Options>> subs;
  Flags f;
  auto* kernel = app.add_subcommand("kernel", "time-kernel density and moments");
  subs.emplace_back(kernel, add_common(*kernel, f));
  subs.back().second.points = kernel->add_option("--points", f.points, "grid points");
  auto* evolve_cmd = app.add_subcommand("evolve", "density-matrix trajectory");
  subs.emplace_back(evolve_cmd, add_common(*evolve_cmd, f));
  auto* scenario = app.add_subcommand("scenario", "osc, cat, rabi or epr");
  subs.emplace_back(scenario, add_common(*scenario, f));
  subs.back().second.scenario = scenario->add_option("name", f.scenario, "scenario name");
  subs.back().second.params =
      scenario->add_option("--param", f.params, "scenario parameter key=value (repeatable)");
  auto* check = app.add_subcommand("check", "invariant suites");
  subs.emplace_back(check, add_common(*check, f));
  subs.back().second.instances = check->add_option("--instances", f.instances, "random instances");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep");
  subs.emplace_back(sweep, add_common(*sweep, f));
  subs.back().second.allow_large =
      sweep->add_flag("--allow-large", f.allow_large, "lift the cell-count bound");
  subs.back().second.params =
      sweep->add_option("--param", f.params, "base parameter key=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << to_string(ErrorKind::invalid_input) << ": " << e.what() << "\n";
    return kExitInvalid;
  }

  RunConfig cfg;
  CommandOutput result;
  try {
    for (const auto& [sub, opts] : subs) {
      if (!sub->parsed()) continue;
      cfg.command = sub->get_name();
      if (opts.config->count()) {
        apply_json(cfg, io::read_json_file(f.config),
                   std::filesystem::path(f.config).parent_path());
      }
      apply_flags(cfg, opts, f);
    }
    result = run(cfg);
    if (result.exit_code == kExitOk || !result.data.empty()) {
      if (cfg.out) {
        write_file(*cfg.out, result.data);
      } else {
        out << result.data;
      }
      if (!result.summary.empty()) {
        if (cfg.summary) {
          write_file(*cfg.summary, result.summary);
        } else if (cfg.out) {
          auto path = *cfg.out;
          path.replace_extension(".summary.json");
          write_file(path, result.summary);
        }
      }
    }
  } catch (const Error& e) {
    err << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << to_string(ErrorKind::invalid_input) << ": " << e.what() << "\n";
    return kExitInvalid;
  }
  err << result.diagnostic;
  return result.exit_code;
}

}  // namespace idec::cli
