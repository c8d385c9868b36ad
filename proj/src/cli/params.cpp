#include "params.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "idec/error.hpp"
#include "idec/io.hpp"

namespace idec::cli::detail {

namespace {

// Packet overlap exp(-D^2 / 8 sigma_x^2) is below 1e-7 for the default grid.
constexpr double kCliSeparation = 12.0;

double number(const RunConfig& cfg, const char* key, double fallback) {
  if (!cfg.params.contains(key)) return fallback;
  const auto& v = cfg.params.at(key);
  if (!v.is_number()) throw InvalidInput(std::string("parameter '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

const std::vector<std::string>& scenario_keys(const std::string& scenario) {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"osc", {"omega", "a0_re", "a0_im"}},
      {"cat",
       {"mass", "sigma_x", "sigma_v", "separation_d", "energy", "hbar", "x_min", "x_max",
        "x_points"}},
      {"rabi", {"g", "n_photons"}},
      {"epr", {"omega0", "flight_length", "speed"}},
  };
  const auto it = keys.find(scenario);
  if (it == keys.end()) {
    throw InvalidInput("unknown scenario '" + scenario + "' (expected osc, cat, rabi or epr)");
  }
  return it->second;
}

void require_known_params(const RunConfig& cfg, const std::string& scenario) {
  const auto& keys = scenario_keys(scenario);
  for (const auto& [key, value] : cfg.params.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw InvalidInput("parameter '" + key + "' is not used by scenario '" + scenario + "'");
    }
  }
}

scenarios::OscillatorParams osc_params(const RunConfig& cfg) {
  scenarios::OscillatorParams p{number(cfg, "omega", 1.0),
                                {number(cfg, "a0_re", 1.0), number(cfg, "a0_im", 0.0)},
                                cfg.kernel()};
  scenarios::validate(p);
  return p;
}

scenarios::CatParams cat_params(const RunConfig& cfg) {
  scenarios::CatParams p;
  p.mass = number(cfg, "mass", p.mass);
  p.sigma_x = number(cfg, "sigma_x", p.sigma_x);
  p.hbar = number(cfg, "hbar", p.hbar);
  p.separation_d = number(cfg, "separation_d", kCliSeparation);
  p.energy = number(cfg, "energy", p.energy);
  p.kernel = cfg.kernel();
  if (!(p.mass > 0.0) || !(p.sigma_x > 0.0) || !(p.hbar > 0.0)) {
    throw InvalidInput("cat: mass, sigma_x and hbar must be positive");
  }
  p.sigma_v = number(cfg, "sigma_v", p.min_uncertainty_sigma_v());
  scenarios::validate(p);
  return p;
}

scenarios::RabiParams rabi_params(const RunConfig& cfg) {
  const double n = number(cfg, "n_photons", 0.0);
  if (!(n >= 0.0) || n != std::floor(n) || n > 1e9) {
    throw InvalidInput("rabi: n_photons must be a non-negative integer");
  }
  scenarios::RabiParams p{number(cfg, "g", 1.0), static_cast<unsigned>(n), cfg.kernel()};
  scenarios::validate(p);
  return p;
}

scenarios::EprParams epr_params(const RunConfig& cfg) {
  scenarios::EprParams p{number(cfg, "omega0", 1.0), number(cfg, "flight_length", 1.0),
                         number(cfg, "speed", 1.0), cfg.kernel()};
  scenarios::validate(p);
  return p;
}

std::vector<double> cat_grid(const RunConfig& cfg, const scenarios::CatParams& p) {
  const double half = 0.5 * p.separation_d + 8.0 * p.sigma_x;
  const double lo = number(cfg, "x_min", -half);
  const double hi = number(cfg, "x_max", half);
  const double n = number(cfg, "x_points", 2001.0);
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidInput("cat: x_max must exceed x_min");
  }
  if (!(n >= 2.0) || n != std::floor(n) || n > 1e7) {
    throw InvalidInput("cat: x_points must be an integer >= 2");
  }
  const auto count = static_cast<std::size_t>(n);
  std::vector<double> x(count);
  for (std::size_t i = 0; i < count; ++i) {
    x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return x;
}

EnergySpectrum load_spectrum(const RunConfig& cfg) {
  if (!cfg.spectrum) throw InvalidInput("--spectrum is required");
  return io::spectrum_from_json(io::read_json_file(*cfg.spectrum));
}

DensityMatrix load_state(const RunConfig& cfg, int dim) {
  if (!cfg.rho0) throw InvalidInput("--rho0 is required");
  DensityMatrix rho = io::state_from_json(io::read_json_file(*cfg.rho0));
  if (rho.dim() != dim) {
    throw InvalidInput("state dimension " + std::to_string(rho.dim()) +
                       " does not match spectrum dimension " + std::to_string(dim));
  }
  return rho;
}

}  // namespace idec::cli::detail
