#include <cmath>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "idec/cli/commands.hpp"
#include "idec/cli/config.hpp"
#include "idec/cli/sweep.hpp"
#include "idec/io.hpp"
#include "idec/propagator.hpp"
#include "support.hpp"
#include "tool_runner.hpp"

using namespace idec;
using namespace idec::cli;
using nlohmann::json;

namespace {

const std::string kData = IDEC_DATA_DIR;

std::vector<std::vector<double>> parse_csv(const std::string& text, std::vector<std::string>* header = nullptr) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) {
    std::stringstream hs(line);
    for (std::string c; std::getline(hs, c, ',');) header->push_back(c);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) row.push_back(std::stod(c));
    rows.push_back(std::move(row));
  }
  return rows;
}

RunConfig fixture_config(const std::string& command) {
  RunConfig cfg;
  cfg.command = command;
  cfg.spectrum = kData + "/spectrum.json";
  cfg.rho0 = kData + "/rho0.json";
  cfg.tau1 = 0.5;
  return cfg;
}

std::string write_scratch(const std::string& name, const std::string& text) {
  const auto path = test::scratch_dir() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("time lists") {
  CHECK(parse_times("0.5") == std::vector<double>{0.5});
  CHECK(parse_times("0,1,2.5") == std::vector<double>{0.0, 1.0, 2.5});
  CHECK(parse_times("0:2:5") == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
  CHECK(parse_times("3:9:1") == std::vector<double>{3.0});
  CHECK_THROWS_AS(parse_times(""), InvalidInput);
  CHECK_THROWS_AS(parse_times("1,x"), InvalidInput);
  CHECK_THROWS_AS(parse_times("0:1"), InvalidInput);
  CHECK_THROWS_AS(parse_times("0:1:2.5"), InvalidInput);

  RunConfig cfg;
  cfg.tau2 = 0.25;
  cfg.times = {1.0, 4.0};
  CHECK(cfg.absolute_times() == std::vector<double>{1.0, 4.0});
  cfg.grid_units = true;
  CHECK(cfg.absolute_times() == std::vector<double>{0.25, 1.0});
}

TEST_CASE("config keys") {
  RunConfig cfg;
  apply_json(cfg, json{{"tau1", 0.3}, {"times", "0:1:3"}, {"spectrum", "s.json"}}, "/base");
  CHECK(cfg.tau1 == 0.3);
  CHECK(cfg.times.size() == 3);
  CHECK(*cfg.spectrum == std::filesystem::path("/base/s.json"));
  apply_json(cfg, json{{"rho0", "/abs/r.json"}}, "/base");
  CHECK(*cfg.rho0 == std::filesystem::path("/abs/r.json"));
  CHECK_THROWS_AS(apply_json(cfg, json{{"tua1", 1.0}}), InvalidInput);
  CHECK_THROWS_AS(apply_json(cfg, json{{"tau1", "one"}}), InvalidInput);
  CHECK_THROWS_AS(apply_json(cfg, json::array()), InvalidInput);
  CHECK(parse_param("g=2.5") == std::pair<std::string, double>{"g", 2.5});
  CHECK_THROWS_AS(parse_param("g"), InvalidInput);
}

TEST_CASE("flags override the config file") {
  const std::string path = write_scratch("override.json", R"({"tau1": 3.0, "t": 2.0, "points": 3})");
  const std::vector<const char*> argv{"idec", "kernel", "--config", path.c_str(), "--tau1", "1",
                                      "--summary", "/dev/null"};
  std::ostringstream out, err;
  REQUIRE(main_entry(static_cast<int>(argv.size()), argv.data(), out, err) == 0);
  const auto rows = parse_csv(out.str());
  REQUIRE(rows.size() == 3);
  // Shape 2, scale 1: pdf = t' e^-t'.
  for (const auto& r : rows) CHECK(r[1] == doctest::Approx(r[0] * std::exp(-r[0])).epsilon(1e-13));
}

TEST_CASE("kernel command") {
  RunConfig cfg;
  cfg.command = "kernel";
  cfg.times = {1.0};
  const auto out = run(cfg);
  REQUIRE(out.exit_code == 0);
  const auto rows = parse_csv(out.data);
  REQUIRE(rows.size() == 201);
  for (const auto& r : rows) CHECK(r[1] == doctest::Approx(std::exp(-r[0])).epsilon(1e-14));
  const json s = json::parse(out.summary);
  CHECK(s.at("covered_mass").get<double>() >= 1.0 - 1e-6);
  CHECK(s.contains("mean"));
  CHECK(s.contains("sigma"));
  CHECK(s.contains("relative_dispersion"));

  cfg.tau1 = 2.0;
  cfg.times = {5.0};
  const json m = json::parse(run(cfg).summary);
  CHECK(m.at("mean").get<double>() == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(m.at("sigma").get<double>() == doctest::Approx(2.0 * std::sqrt(5.0)).epsilon(1e-15));

  cfg.times = {0.0};
  CHECK(run(cfg).exit_code == 2);
  cfg.times = {1.0, 2.0};
  CHECK(run(cfg).exit_code == 2);
}

TEST_CASE("malformed config exits 2 with a diagnostic") {
  const std::string path = write_scratch("bad.json", "{bad");
  const auto r = test::run_tool("kernel --config '" + path + "'");
  CHECK(r.exit_code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("malformed JSON") != std::string::npos);
  CHECK(test::run_tool("kernel --tau1").exit_code == 2);
  CHECK(test::run_tool("").exit_code == 2);
  CHECK(test::run_tool("kernel --t 1 --format xml").exit_code == 2);
}

TEST_CASE("evolve command") {
  SUBCASE("header and row layout") {
    auto cfg = fixture_config("evolve");
    cfg.times = {0.0, 1.0};
    const auto out = run(cfg);
    REQUIRE(out.exit_code == 0);
    std::vector<std::string> header;
    const auto rows = parse_csv(out.data, &header);
    REQUIRE(header.size() == 19);
    CHECK(header[0] == "t");
    CHECK(header[1] == "re_0_0");
    CHECK(header[2] == "im_0_0");
    CHECK(header[3] == "re_0_1");
    CHECK(header[18] == "im_2_2");
    REQUIRE(rows.size() == 2);
    const auto rho0 = io::state_from_json(io::read_json_file(*cfg.rho0));
    CHECK(rows[0][3] == rho0(0, 1).real());
    CHECK(rows[0][4] == rho0(0, 1).imag());
  }
  SUBCASE("unitary evolution of a diagonal state is constant") {
    auto cfg = fixture_config("evolve");
    cfg.rho0 = write_scratch("diag.json", R"({"dim":3,"re":[[0.5,0,0],[0,0.3,0],[0,0,0.2]],"im":[[0,0,0],[0,0,0],[0,0,0]]})");
    cfg.method = "unitary";
    cfg.times = parse_times("0:7:8");
    const auto rows = parse_csv(run(cfg).data);
    for (const auto& r : rows) {
      for (std::size_t c = 1; c < r.size(); ++c) CHECK(r[c] == rows[0][c]);
    }
  }
  SUBCASE("closed form matches quadrature on the demo") {
    auto cfg = fixture_config("evolve");
    cfg.times = parse_times("0.25:6:9");
    const auto closed = parse_csv(run(cfg).data);
    cfg.method = "quadrature";
    const auto quad = parse_csv(run(cfg).data);
    REQUIRE(closed.size() == quad.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < closed.size(); ++i) {
      for (std::size_t c = 1; c < closed[i].size(); ++c) {
        worst = std::max(worst, std::abs(closed[i][c] - quad[i][c]));
      }
    }
    CHECK(worst <= 1e-7);
  }
  SUBCASE("finite difference off the tau2 grid exits 2") {
    auto cfg = fixture_config("evolve");
    cfg.method = "finite_difference";
    cfg.times = {0.5};
    CHECK(run(cfg).exit_code == 2);
    cfg.times = {3.0};
    CHECK(run(cfg).exit_code == 0);
  }
  SUBCASE("invalid output state exits 3 with the report") {
    auto cfg = fixture_config("evolve");
    cfg.rho0 = write_scratch("trace2.json", R"({"dim":3,"re":[[1,0,0],[0,0.6,0],[0,0,0.4]],"im":[[0,0,0],[0,0,0],[0,0,0]]})");
    cfg.times = {1.0};
    const auto out = run(cfg);
    CHECK(out.exit_code == 3);
    CHECK(out.diagnostic.find("trace") != std::string::npos);
  }
  SUBCASE("input errors") {
    auto cfg = fixture_config("evolve");
    cfg.times = {1.0};
    cfg.method = "euler";
    CHECK(run(cfg).exit_code == 2);
    cfg.method = "closed_form";
    cfg.rho0 = write_scratch("dim2.json", R"({"dim":2,"re":[[1,0],[0,0]],"im":[[0,0],[0,0]]})");
    CHECK(run(cfg).exit_code == 2);
    cfg.rho0.reset();
    CHECK(run(cfg).exit_code == 2);
    cfg = fixture_config("evolve");
    cfg.times = {-1.0};
    CHECK(run(cfg).exit_code == 2);
  }
  SUBCASE("json format") {
    auto cfg = fixture_config("evolve");
    cfg.times = {1.0};
    cfg.format = "json";
    const json doc = json::parse(run(cfg).data);
    CHECK(doc.at("columns").size() == 19);
    CHECK(doc.at("rows").size() == 1);
    CHECK(doc.at("summary").at("method") == "closed_form");
  }
}

TEST_CASE("scenario command") {
  RunConfig cfg;
  cfg.command = "scenario";
  SUBCASE("rabi summary rate") {
    cfg.scenario = "rabi";
    cfg.tau1 = cfg.tau2 = 0.05;
    const auto out = run(cfg);
    REQUIRE(out.exit_code == 0);
    const json s = json::parse(out.summary);
    CHECK(s.at("gamma").get<double>() == doctest::Approx(10.0 * std::log(1.0025)).epsilon(1e-13));
    CHECK(s.at("fitted_gamma").get<double>() ==
          doctest::Approx(s.at("gamma").get<double>()).epsilon(0.02));
    std::vector<std::string> header;
    parse_csv(out.data, &header);
    CHECK(header == std::vector<std::string>{"t", "d_bar", "envelope"});
  }
  SUBCASE("epr starts anticorrelated") {
    cfg.scenario = "epr";
    cfg.times = {0.0, 2.0};
    std::vector<std::string> header;
    const auto rows = parse_csv(run(cfg).data, &header);
    CHECK(header == std::vector<std::string>{"t", "E_xx", "E_yy", "E_zz", "singlet_fidelity"});
    CHECK(rows[0][3] == -1.0);
    CHECK(rows[1][3] == -1.0);
    CHECK(rows[0][4] == 1.0);
  }
  SUBCASE("osc summary lists the frozen frequency") {
    cfg.scenario = "osc";
    cfg.tau1 = 0.5;
    const json s = json::parse(run(cfg).summary);
    const auto& first = s.at("frozen").at(0);
    CHECK(first.at("omega").get<double>() == doctest::Approx(2.0 * M_PI / 0.5).epsilon(1e-15));
    CHECK(first.at("gamma").get<double>() ==
          rate_pair(2.0 * M_PI / 0.5, KernelParams(0.5, 1.0)).gamma);
  }
  SUBCASE("cat blocks") {
    cfg.scenario = "cat";
    cfg.times = {0.0, 1.0};
    const auto out = run(cfg);
    REQUIRE(out.exit_code == 0);
    CHECK(out.data.rfind("t,0\nx,p_bar\n", 0) == 0);
    CHECK(out.data.find("visibility,t_decoherence\n1,") != std::string::npos);
    CHECK(out.diagnostic.empty());
    const json s = json::parse(out.summary);
    CHECK(s.at("t_decoherence").get<double>() == 1.0 / s.at("gamma").get<double>());
  }
  SUBCASE("cat model mismatch exits 4 with both values") {
    cfg.scenario = "cat";
    cfg.params = {{"sigma_v", 5.0}};
    const auto out = run(cfg);
    CHECK(out.exit_code == 4);
    CHECK(out.diagnostic.find("formula 30") != std::string::npos);
    CHECK(out.diagnostic.find("oracle") != std::string::npos);
  }
  SUBCASE("parameter errors") {
    cfg.scenario = "rabi";
    cfg.params = {{"n_photons", 1.5}};
    CHECK(run(cfg).exit_code == 2);
    cfg.params = {{"omega", 1.0}};
    CHECK(run(cfg).exit_code == 2);
    cfg.scenario = "qubit";
    cfg.params = json::object();
    CHECK(run(cfg).exit_code == 2);
  }
}

TEST_CASE("check command") {
  auto cfg = fixture_config("check");
  cfg.tau1 = 1.0;
  const auto out = run(cfg);
  CHECK(out.exit_code == 0);
  const json r = json::parse(out.data);
  CHECK(r.at("violations") == 0);
  CHECK(r.at("tm_violations") == 0);
  CHECK(r.at("instances") == 100);
  CHECK(r.at("fixture").at("state_violations") == 0);
  CHECK(r.at("ehrenfest_max_scaled_residual").get<double>() <= 1e-10);

  cfg.rho0 = write_scratch("trace2c.json", R"({"dim":3,"re":[[1,0,0],[0,0.6,0],[0,0,0.4]],"im":[[0,0,0],[0,0,0],[0,0,0]]})");
  const auto bad = run(cfg);
  CHECK(bad.exit_code == 3);
  CHECK(json::parse(bad.data).at("violations").get<int>() > 0);
}

TEST_CASE("sweep command") {
  RunConfig cfg;
  cfg.command = "sweep";
  cfg.tau1 = cfg.tau2 = 0.05;
  cfg.sweep = {{"target", "rabi"},
               {"reduction", "fitted_gamma"},
               {"axes", json::array({{{"name", "n_photons"}, {"start", 0}, {"stop", 5}, {"count", 6}}})}};
  SUBCASE("fitted Rabi rate grows with the photon number") {
    const auto out = run(cfg);
    REQUIRE(out.exit_code == 0);
    std::vector<std::string> header;
    const auto rows = parse_csv(out.data, &header);
    CHECK(header == std::vector<std::string>{"n_photons", "fitted_gamma"});
    REQUIRE(rows.size() == 6);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][1] > rows[i - 1][1]);
  }
  SUBCASE("lexicographic order independent of workers") {
    cfg.sweep = {{"target", "epr"},
                 {"reduction", "singlet_fidelity"},
                 {"axes", json::array({{{"name", "tau1"}, {"values", {0.01, 0.1, 1.0}}},
                                       {{"name", "omega0"}, {"start", 1}, {"stop", 3}, {"count", 5}}})}};
    cfg.times = {2.0};
    const auto one = run(cfg);
    cfg.workers = 3;
    const auto three = run(cfg);
    REQUIRE(one.exit_code == 0);
    CHECK(one.data == three.data);
    const auto rows = parse_csv(one.data);
    REQUIRE(rows.size() == 15);
    CHECK(rows[0][0] == 0.01);
    CHECK(rows[1][0] == 0.01);
    CHECK(rows[1][1] == 1.5);
    CHECK(rows[5][0] == 0.1);
  }
  SUBCASE("cell bound") {
    cfg.sweep["axes"] = json::array({{{"name", "g"}, {"start", 1}, {"stop", 2}, {"count", 10000}},
                                     {{"name", "n_photons"}, {"start", 0}, {"stop", 999}, {"count", 1000}}});
    const auto out = run(cfg);
    CHECK(out.exit_code == 2);
    CHECK(out.diagnostic.find("--allow-large") != std::string::npos);
    CHECK(cell_count(parse_sweep(cfg.sweep)) == 1e7);
  }
  SUBCASE("spec errors") {
    cfg.sweep["reduction"] = "visibility";
    CHECK(run(cfg).exit_code == 2);
    cfg.sweep["reduction"] = "gamma";
    cfg.sweep["axes"] = json::array({{{"name", "omega"}, {"values", {1.0}}}});
    CHECK(run(cfg).exit_code == 2);
    cfg.sweep = json::object();
    CHECK(run(cfg).exit_code == 2);
  }
}

TEST_CASE("repeated runs are byte-identical") {
  const std::string mc = "evolve --config evolve.json --method monte_carlo --seed 7 --samples 20000";
  const auto a = test::run_tool(mc);
  const auto b = test::run_tool(mc);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  const auto c = test::run_tool("evolve --config evolve.json --method monte_carlo --seed 8 --samples 20000");
  CHECK(c.out != a.out);

  const auto s1 = test::run_tool("sweep --config sweep_rabi.json --workers 2");
  const auto s2 = test::run_tool("sweep --config sweep_rabi.json");
  REQUIRE(s1.exit_code == 0);
  CHECK(s1.out == s2.out);
}

TEST_CASE("output files") {
  const auto dir = test::scratch_dir();
  const auto csv = dir / "rabi.csv";
  const auto r = test::run_tool("scenario rabi --times 0:1:3 --out '" + csv.string() + "'");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.empty());
  CHECK(test::slurp(csv).rfind("t,d_bar,envelope\n", 0) == 0);
  const json s = json::parse(test::slurp(dir / "rabi.summary.json"));
  CHECK(s.at("scenario") == "rabi");
}

TEST_CASE("exit code mapping") {
  CHECK(exit_code_for(ErrorKind::invalid_input) == 2);
  CHECK(exit_code_for(ErrorKind::degenerate_input) == 2);
  CHECK(exit_code_for(ErrorKind::invariant_violation) == 3);
  CHECK(exit_code_for(ErrorKind::numeric_failure) == 3);
  CHECK(exit_code_for(ErrorKind::model_mismatch) == 4);
}
