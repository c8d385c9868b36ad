#include "idec/cli/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>

#include <omp.h>

#include "idec/error.hpp"
#include "idec/io.hpp"
#include "idec/propagator.hpp"
#include "idec/scenarios.hpp"
#include "params.hpp"

namespace idec::cli {

using nlohmann::json;

namespace {

const std::map<std::string, std::vector<std::string>>& reductions() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"osc", {"gamma", "modulus", "milburn_modulus"}},
      {"cat", {"visibility", "t_decoherence", "omega_if", "decoherence_rate"}},
      {"rabi", {"gamma", "fitted_gamma", "d_bar"}},
      {"epr", {"gamma", "singlet_fidelity", "E_xx"}},
      {"kernel", {"mean", "sigma", "relative_dispersion"}},
      {"evolve", {"purity", "coherence"}},
  };
  return table;
}

bool is_kernel_axis(const std::string& name) {
  return name == "tau1" || name == "tau2" || name == "t";
}

double cell_time(const RunConfig& cfg) {
  const auto t = cfg.absolute_times();
  if (t.size() != 1) throw InvalidInput("sweep: this reduction needs exactly one time (--t or a t axis)");
  return t.front();
}

constexpr std::array<double, 3> kEx{1.0, 0.0, 0.0};

}  // namespace

std::vector<std::string> sweep_reductions(const std::string& target) {
  const auto it = reductions().find(target);
  if (it == reductions().end()) {
    throw InvalidInput("sweep: unknown target '" + target +
                       "' (expected osc, cat, rabi, epr, kernel or evolve)");
  }
  return it->second;
}

SweepSpec parse_sweep(const json& j) {
  if (!j.is_object() || j.empty()) throw InvalidInput("sweep: a 'sweep' object is required in the config");
  SweepSpec spec;
  try {
    spec.target = j.at("target").get<std::string>();
    spec.reduction = j.at("reduction").get<std::string>();
    const auto allowed = sweep_reductions(spec.target);
    if (std::find(allowed.begin(), allowed.end(), spec.reduction) == allowed.end()) {
      throw InvalidInput("sweep: reduction '" + spec.reduction + "' is not defined for target '" +
                         spec.target + "'");
    }
    const auto& axes = j.at("axes");
    if (!axes.is_array() || axes.empty()) throw InvalidInput("sweep: 'axes' must be a non-empty array");
    for (const auto& a : axes) {
      SweepAxis axis;
      axis.name = a.at("name").get<std::string>();
      if (a.contains("values")) {
        axis.values = a.at("values").get<std::vector<double>>();
      } else {
        const double start = a.at("start").get<double>();
        const double stop = a.at("stop").get<double>();
        const double count = a.at("count").get<double>();
        if (!(count >= 1.0) || count != std::floor(count)) {
          throw InvalidInput("sweep: axis '" + axis.name + "' count must be a positive integer");
        }
        axis.start = start;
        axis.stop = stop;
        axis.count = count;
      }
      if (!(axis.size() >= 1.0)) throw InvalidInput("sweep: axis '" + axis.name + "' has no values");
      for (const auto& other : spec.axes) {
        if (other.name == axis.name) throw InvalidInput("sweep: duplicate axis '" + axis.name + "'");
      }
      if (!is_kernel_axis(axis.name)) {
        if (spec.target == "kernel" || spec.target == "evolve") {
          throw InvalidInput("sweep: axis '" + axis.name + "' must be tau1, tau2 or t for target " +
                             spec.target);
        }
        const auto& keys = detail::scenario_keys(spec.target);
        if (std::find(keys.begin(), keys.end(), axis.name) == keys.end()) {
          throw InvalidInput("sweep: axis '" + axis.name + "' is not a parameter of " + spec.target);
        }
      }
      spec.axes.push_back(std::move(axis));
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("sweep: ") + e.what());
  }
  return spec;
}

double SweepAxis::at(std::size_t i) const {
  if (!values.empty()) return values[i];
  if (count == 1.0) return start;
  return start + (stop - start) * static_cast<double>(i) / (count - 1.0);
}

double cell_count(const SweepSpec& spec) {
  double n = 1.0;
  for (const auto& a : spec.axes) n *= a.size();
  return n;
}

double evaluate_cell(const RunConfig& base, const SweepSpec& spec,
                     const std::vector<double>& assignment) {
  RunConfig cfg = base;
  for (std::size_t i = 0; i < spec.axes.size(); ++i) {
    const auto& name = spec.axes[i].name;
    const double v = assignment[i];
    if (name == "tau1") cfg.tau1 = v;
    else if (name == "tau2") cfg.tau2 = v;
    else if (name == "t") cfg.times = {v};
    else cfg.params[name] = v;
  }
  const auto& r = spec.reduction;
  if (spec.target == "kernel") {
    const auto m = kernel_moments(cfg.kernel(), cell_time(cfg));
    return r == "mean" ? m.mean : r == "sigma" ? m.sigma : m.relative_dispersion;
  }
  if (spec.target == "evolve") {
    const auto spectrum = detail::load_spectrum(cfg);
    const auto rho0 = detail::load_state(cfg, spectrum.dim());
    const auto rho = evolve(rho0, spectrum, cfg.kernel(), cell_time(cfg), cfg.evolution_method());
    const CMatrix& e = rho.entries();
    if (r == "purity") return (e * e).trace().real();
    return e.cwiseAbs().sum() - e.diagonal().cwiseAbs().sum();
  }
  detail::require_known_params(cfg, spec.target);
  if (spec.target == "osc") {
    const auto p = detail::osc_params(cfg);
    if (r == "gamma") return rate_pair(p.omega, p.kernel).gamma;
    const std::vector<double> t{cell_time(cfg)};
    const auto tr = r == "modulus" ? scenarios::oscillator_amplitude(p, t)
                                   : scenarios::oscillator_amplitude_milburn(p, t);
    return std::abs(tr.values.front());
  }
  if (spec.target == "cat") {
    const auto p = detail::cat_params(cfg);
    const double w = scenarios::interference_frequency(p);
    const RatePair rp = rate_pair(w, p.kernel);
    if (r == "omega_if") return w;
    if (r == "decoherence_rate") return rp.gamma;
    if (r == "t_decoherence") return 1.0 / rp.gamma;
    const auto rec = scenarios::cat_interference_at(p, w, cell_time(cfg), {0.0});
    return rec.visibility;
  }
  if (spec.target == "rabi") {
    const auto p = detail::rabi_params(cfg);
    if (r == "gamma") return rate_pair(p.rabi_frequency(), p.kernel).gamma;
    if (r == "fitted_gamma") return scenarios::fitted_rabi_gamma(p);
    return scenarios::rabi_population(p, {cell_time(cfg)}).d_bar.front();
  }
  const auto p = detail::epr_params(cfg);
  if (r == "gamma") return rate_pair(p.omega0, p.kernel).gamma;
  const auto rho = scenarios::epr_state(p, cell_time(cfg));
  if (r == "singlet_fidelity") return scenarios::singlet_fidelity(rho);
  return scenarios::epr_correlation(rho, kEx, kEx);
}

std::string sweep_csv(const RunConfig& cfg, const SweepSpec& spec) {
  const auto n = static_cast<std::size_t>(cell_count(spec));
  const std::size_t n_axes = spec.axes.size();

  std::vector<double> values(n);
  std::exception_ptr failure;
  const auto cells = static_cast<long long>(n);
#pragma omp parallel for num_threads(cfg.workers) schedule(dynamic) if (cfg.workers > 1)
  for (long long c = 0; c < cells; ++c) {
    try {
      std::vector<double> assignment(n_axes);
      auto rem = static_cast<std::size_t>(c);
      for (std::size_t k = n_axes; k-- > 0;) {
        const auto len = static_cast<std::size_t>(spec.axes[k].size());
        assignment[k] = spec.axes[k].at(rem % len);
        rem /= len;
      }
      values[static_cast<std::size_t>(c)] = evaluate_cell(cfg, spec, assignment);
    } catch (...) {
#pragma omp critical(idec_sweep_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<std::string> header;
  for (const auto& a : spec.axes) header.push_back(a.name);
  header.push_back(spec.reduction);
  std::string out = io::csv_row(header);
  std::vector<std::string> fields(n_axes + 1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t rem = c;
    for (std::size_t k = n_axes; k-- > 0;) {
      const auto len = static_cast<std::size_t>(spec.axes[k].size());
      fields[k] = io::format_double(spec.axes[k].at(rem % len));
      rem /= len;
    }
    fields[n_axes] = io::format_double(values[c]);
    out += io::csv_row(fields);
  }
  return out;
}

}  // namespace idec::cli
