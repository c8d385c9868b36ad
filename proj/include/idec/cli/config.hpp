#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "idec/kernel.hpp"
#include "idec/propagator.hpp"

namespace idec::cli {

/// Everything a run depends on. Built from an optional JSON config file with
/// command-line flags applied on top; no environment variables or clocks.
struct RunConfig {
  std::string command;
  double tau1 = 1.0;
  double tau2 = 1.0;
  std::vector<double> times;
  std::string method = "closed_form";
  std::optional<std::filesystem::path> spectrum;
  std::optional<std::filesystem::path> rho0;
  std::uint64_t seed = 0;
  std::size_t samples = 100000;
  double tol = 1e-10;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> summary;
  std::string format = "csv";
  bool grid_units = false;
  int workers = 1;

  std::string scenario;                        // scenario command
  nlohmann::json params = nlohmann::json::object();  // scenario / sweep base parameters
  nlohmann::json sweep = nlohmann::json::object();   // sweep command
  bool allow_large = false;
  int points = 201;                            // kernel grid size
  int instances = 100;                         // check command

  KernelParams kernel() const { return KernelParams(tau1, tau2); }
  EvolutionMethod evolution_method() const;

  /// Times in absolute units (multiplied by tau2 under --grid-units).
  std::vector<double> absolute_times() const;
};

/// Applies the keys of a config JSON object onto `cfg`. Unknown keys are an
/// error so that typos do not silently fall back to defaults. Relative file
/// paths are resolved against `base_dir` (the config file's directory).
void apply_json(RunConfig& cfg, const nlohmann::json& j,
                const std::filesystem::path& base_dir = {});

/// "0.5", "0,1,2.5" or "start:stop:count" (inclusive linspace).
std::vector<double> parse_times(const std::string& text);

/// "key=value" with a numeric value.
std::pair<std::string, double> parse_param(const std::string& text);

}  // namespace idec::cli
