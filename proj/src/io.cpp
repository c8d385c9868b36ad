#include "idec/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "idec/error.hpp"

namespace idec::io {

using nlohmann::json;

EnergySpectrum spectrum_from_json(const json& j) {
  if (!j.is_object() || !j.contains("energies") || !j["energies"].is_array()) {
    throw InvalidInput("spectrum JSON: expected object with an \"energies\" array");
  }
  std::vector<double> energies;
  for (const auto& v : j["energies"]) {
    if (!v.is_number()) throw InvalidInput("spectrum JSON: energies must be numbers");
    energies.push_back(v.get<double>());
  }
  double hbar = 1.0;
  if (j.contains("hbar")) {
    if (!j["hbar"].is_number()) throw InvalidInput("spectrum JSON: hbar must be a number");
    hbar = j["hbar"].get<double>();
  }
  return EnergySpectrum(std::move(energies), hbar);
}

json to_json(const EnergySpectrum& s) {
  return json{{"hbar", s.hbar()}, {"energies", s.energies()}};
}

DensityMatrix state_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer() ||
      !j.contains("re") || !j.contains("im")) {
    throw InvalidInput("state JSON: expected {\"dim\", \"re\", \"im\"}");
  }
  const int dim = j["dim"].get<int>();
  if (dim <= 0) throw InvalidInput("state JSON: dim must be positive");
  auto read = [dim](const json& rows, const char* name) {
    Eigen::MatrixXd m(dim, dim);
    if (!rows.is_array() || static_cast<int>(rows.size()) != dim) {
      throw InvalidInput(std::string("state JSON: \"") + name + "\" must have dim rows");
    }
    for (int r = 0; r < dim; ++r) {
      const json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != dim) {
        throw InvalidInput(std::string("state JSON: \"") + name + "\" rows must have dim entries");
      }
      for (int c = 0; c < dim; ++c) {
        const json& v = row[static_cast<std::size_t>(c)];
        if (!v.is_number()) throw InvalidInput("state JSON: entries must be numbers");
        m(r, c) = v.get<double>();
      }
    }
    return m;
  };
  const Eigen::MatrixXd re = read(j["re"], "re");
  const Eigen::MatrixXd im = read(j["im"], "im");
  CMatrix rho(dim, dim);
  rho.real() = re;
  rho.imag() = im;
  return DensityMatrix(std::move(rho));
}

json to_json(const DensityMatrix& rho) {
  const int d = rho.dim();
  json re = json::array(), im = json::array();
  for (int r = 0; r < d; ++r) {
    json rr = json::array(), ii = json::array();
    for (int c = 0; c < d; ++c) {
      rr.push_back(rho(r, c).real());
      ii.push_back(rho(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return json{{"dim", d}, {"re", std::move(re)}, {"im", std::move(im)}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("malformed JSON in " + path.string() + ": " + e.what());
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  line += '\n';
  return line;
}

}  // namespace idec::io
