#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "idec/core_state.hpp"

namespace idec::io {

/// {"hbar": <real>, "energies": [<real>...]}; hbar defaults to 1.
EnergySpectrum spectrum_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EnergySpectrum& s);

/// {"dim": <int>, "re": [[...]...], "im": [[...]...]}, row-major.
DensityMatrix state_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DensityMatrix& rho);

nlohmann::json read_json_file(const std::filesystem::path& path);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// One CSV line from already formatted fields.
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace idec::io
