#pragma once

#include <string>
#include <vector>

#include "idec/cli/config.hpp"
#include "idec/core_state.hpp"
#include "idec/scenarios.hpp"

namespace idec::cli::detail {

/// Keys accepted in cfg.params for a scenario.
const std::vector<std::string>& scenario_keys(const std::string& scenario);

void require_known_params(const RunConfig& cfg, const std::string& scenario);

scenarios::OscillatorParams osc_params(const RunConfig& cfg);
scenarios::CatParams cat_params(const RunConfig& cfg);
scenarios::RabiParams rabi_params(const RunConfig& cfg);
scenarios::EprParams epr_params(const RunConfig& cfg);

/// Position grid for cat output: x_min..x_max with x_points samples.
std::vector<double> cat_grid(const RunConfig& cfg, const scenarios::CatParams& p);

EnergySpectrum load_spectrum(const RunConfig& cfg);
DensityMatrix load_state(const RunConfig& cfg, int dim);

}  // namespace idec::cli::detail
