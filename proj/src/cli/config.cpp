#include "idec/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "idec/error.hpp"

namespace idec::cli {

using nlohmann::json;

EvolutionMethod RunConfig::evolution_method() const {
  EvolutionMethod m;
  m.kind = parse_method(method);
  m.seed = seed;
  m.samples = samples;
  m.tol = tol;
  if (m.kind == Method::monte_carlo && samples == 0) {
    throw InvalidInput("--samples must be positive");
  }
  if (!(tol > 0.0)) throw InvalidInput("--tol must be positive");
  return m;
}

std::vector<double> RunConfig::absolute_times() const {
  std::vector<double> out = times;
  if (grid_units) {
    for (double& t : out) t *= tau2;
  }
  return out;
}

namespace {

double parse_number(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && last[-1] == ' ') --last;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw InvalidInput("not a number: '" + s + "'");
  }
  return v;
}

template <typename T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

std::vector<double> parse_times(const std::string& text) {
  if (text.empty()) throw InvalidInput("empty time list");
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw InvalidInput("time range must be start:stop:count");
    const double a = parse_number(parts[0]);
    const double b = parse_number(parts[1]);
    const double n = parse_number(parts[2]);
    if (n < 1 || n != std::floor(n) || n > 1e7) throw InvalidInput("time range count must be a positive integer");
    const auto count = static_cast<int>(n);
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      out[static_cast<std::size_t>(i)] = count == 1 ? a : a + (b - a) * i / (count - 1);
    }
    return out;
  }
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_number(item));
  return out;
}

std::pair<std::string, double> parse_param(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw InvalidInput("--param expects key=value");
  return {text.substr(0, eq), parse_number(text.substr(eq + 1))};
}

void apply_json(RunConfig& cfg, const json& j, const std::filesystem::path& base_dir) {
  auto path = [&](const char* key) {
    const std::filesystem::path p = get<std::string>(j, key);
    return p.is_relative() ? base_dir / p : p;
  };
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "tau1") cfg.tau1 = get<double>(j, "tau1");
    else if (key == "tau2") cfg.tau2 = get<double>(j, "tau2");
    else if (key == "t") cfg.times = {get<double>(j, "t")};
    else if (key == "times") {
      if (value.is_string()) cfg.times = parse_times(value.get<std::string>());
      else cfg.times = get<std::vector<double>>(j, "times");
    }
    else if (key == "method") cfg.method = get<std::string>(j, "method");
    else if (key == "spectrum") cfg.spectrum = path("spectrum");
    else if (key == "rho0") cfg.rho0 = path("rho0");
    else if (key == "seed") cfg.seed = get<std::uint64_t>(j, "seed");
    else if (key == "samples") cfg.samples = get<std::size_t>(j, "samples");
    else if (key == "tol") cfg.tol = get<double>(j, "tol");
    else if (key == "out") cfg.out = path("out");
    else if (key == "summary") cfg.summary = path("summary");
    else if (key == "format") cfg.format = get<std::string>(j, "format");
    else if (key == "grid_units") cfg.grid_units = get<bool>(j, "grid_units");
    else if (key == "workers") cfg.workers = get<int>(j, "workers");
    else if (key == "scenario") cfg.scenario = get<std::string>(j, "scenario");
    else if (key == "params") {
      if (!value.is_object()) throw InvalidInput("config key 'params' must be an object");
      for (const auto& [k, v] : value.items()) cfg.params[k] = v;
    }
    else if (key == "sweep") {
      if (!value.is_object()) throw InvalidInput("config key 'sweep' must be an object");
      cfg.sweep = value;
    }
    else if (key == "allow_large") cfg.allow_large = get<bool>(j, "allow_large");
    else if (key == "points") cfg.points = get<int>(j, "points");
    else if (key == "instances") cfg.instances = get<int>(j, "instances");
    else throw InvalidInput("unknown config key '" + key + "'");
  }
}

}  // namespace idec::cli
