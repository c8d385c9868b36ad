#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "idec/cli/config.hpp"

namespace idec::cli {

inline constexpr double kMaxSweepCells = 1e6;

/// Either an explicit value list or an inclusive linspace, evaluated lazily
/// so that oversized sweeps can be measured without being materialized.
struct SweepAxis {
  std::string name;
  std::vector<double> values;  // explicit list; empty for a linspace
  double start = 0.0;
  double stop = 0.0;
  double count = 0.0;          // linspace length

  double size() const { return values.empty() ? count : static_cast<double>(values.size()); }
  double at(std::size_t i) const;
};

/// Cartesian sweep over named parameters. The first axis varies slowest.
struct SweepSpec {
  std::string target;     // osc, cat, rabi, epr, kernel, evolve
  std::string reduction;  // see sweep_reductions(target)
  std::vector<SweepAxis> axes;
};

/// {"target": ..., "reduction": ..., "axes": [{"name": ..., "values": [...]}
///  or {"name": ..., "start": a, "stop": b, "count": n}]}
SweepSpec parse_sweep(const nlohmann::json& j);

std::vector<std::string> sweep_reductions(const std::string& target);

/// Product of axis lengths, computed in floating point so that huge sweeps
/// are measured without overflow.
double cell_count(const SweepSpec& spec);

/// One reduction value for one parameter assignment.
double evaluate_cell(const RunConfig& base, const SweepSpec& spec,
                     const std::vector<double>& assignment);

/// Long-format CSV: one column per axis, then the reduction. Rows follow
/// lexicographic cell order whatever the worker count.
std::string sweep_csv(const RunConfig& cfg, const SweepSpec& spec);

}  // namespace idec::cli
