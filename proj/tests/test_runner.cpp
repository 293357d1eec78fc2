#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <qnls/json_writer.hpp>
#include <qnls/presets.hpp>
#include <qnls/runner.hpp>

namespace fs = std::filesystem;
using qnls::JsonValue;
using qnls::Scenario;

namespace {

Scenario tiny_scenario(const std::string& id) {
  Scenario sc;
  sc.id = id;
  sc.h = qnls::ScalarFamily::parse("power:1*s^1");
  sc.f1 = qnls::ScalarFamily::parse("power:1*s^1");
  sc.coupling = 1.0;
  sc.sign = qnls::CriticalSign::Defocusing;
  sc.grid.r_max = 12.0;
  // The momentum-identity row needs the dilation quadratures resolved; at
  // 256 nodes its O(dr^2) spatial defect exceeds the 1e-3 row tolerance.
  sc.grid.nodes = 1024;
  sc.initial.amplitude = 0.5;
  sc.solver.dt = 1e-3;
  sc.solver.t_end = 0.05;
  sc.solver.output_stride = 5;
  sc.analyses.virial = true;
  sc.analyses.criteria = true;
  return sc;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("json writer formats, orders and escapes") {
  JsonValue obj = JsonValue::object();
  obj.add("zeta", JsonValue::number(1.5));
  obj.add("alpha", JsonValue::string("line\nbreak \"quoted\""));
  obj.add("gap", JsonValue::number(std::numeric_limits<double>::quiet_NaN()));
  JsonValue arr = JsonValue::array();
  arr.push(JsonValue::boolean(true));
  arr.push(JsonValue::integer(-7));
  obj.add("items", arr);
  const std::string text = obj.dump();
  // Insertion order, not alphabetical.
  CHECK(text.find("zeta") < text.find("alpha"));
  CHECK(text.find("\"gap\": null") != std::string::npos);
  CHECK(text.find("\\n") != std::string::npos);
  CHECK(text.find("\\\"quoted\\\"") != std::string::npos);
  CHECK_THROWS_AS(arr.add("key", JsonValue::null()), std::logic_error);
  CHECK_THROWS_AS(obj.push(JsonValue::null()), std::logic_error);
}

TEST_CASE("check_scenario evaluates criteria without touching disk") {
  Scenario sc = *qnls::find_preset("ex31A");
  qnls::CriteriaReport report = qnls::check_scenario(sc);
  CHECK(report.existence.case_b.holds);
  const std::string json = qnls::criteria_to_json(report).dump();
  CHECK(json.find("\"existence\"") != std::string::npos);
  CHECK(json.find("\"classification\"") != std::string::npos);
  CHECK(json.find("\"blowup\"") == std::string::npos);

  Scenario fb = *qnls::find_preset("ex31B");
  const std::string focusing_json = qnls::criteria_to_json(qnls::check_scenario(fb)).dump();
  CHECK(focusing_json.find("\"blowup\"") != std::string::npos);
  CHECK(focusing_json.find("\"existence\"") == std::string::npos);
}

TEST_CASE("run_scenario writes the series and summary") {
  const fs::path dir = fs::temp_directory_path() / "qnls_runner_test";
  fs::remove_all(dir);
  Scenario sc = tiny_scenario("tiny");
  qnls::RunReport report = qnls::run_scenario(sc, dir.string());
  CHECK(report.status == qnls::RunStatus::Completed);
  CHECK(report.exit_ok);
  REQUIRE(report.outcome.has_value());
  CHECK(report.outcome->series.size() > 3);

  const std::string csv = slurp(dir / "tiny.series.csv");
  CHECK(csv.rfind("t,mass,energy,J,y,grad_u_sq,grad_h_sq,g1_int,g2_int,hcrit_int,psi_int,theta,P,residual\n",
                  0) == 0);

  const std::string summary = slurp(dir / "tiny.summary.json");
  CHECK(summary.find("\"scenario_id\": \"tiny\"") != std::string::npos);
  CHECK(summary.find("\"status\": \"Completed\"") != std::string::npos);
  CHECK(summary.find("\"bounds\"") != std::string::npos);
  CHECK(summary.find("\"virial_identity\"") != std::string::npos);
  CHECK(summary.find("\"drift\"") != std::string::npos);
  CHECK(summary.find("\"timings\"") != std::string::npos);

  bool found_virial = false;
  for (const qnls::BoundRow& row : report.bounds) {
    if (row.name == "virial_identity") {
      found_virial = true;
      CHECK(row.satisfied);
    }
  }
  CHECK(found_virial);
  fs::remove_all(dir);
}

TEST_CASE("sweep runs every config and writes one index") {
  const fs::path dir = fs::temp_directory_path() / "qnls_sweep_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream a(dir / "a.cfg");
    a << tiny_scenario("sweep_a").to_config_text();
    std::ofstream b(dir / "b.cfg");
    b << tiny_scenario("sweep_b").to_config_text();
  }
  CHECK(qnls::sweep_directory(dir.string(), 2) == 0);
  CHECK(fs::exists(dir / "sweep_a.summary.json"));
  CHECK(fs::exists(dir / "sweep_b.summary.json"));
  const std::string index = slurp(dir / "index.json");
  CHECK(index.find("\"total\": 2") != std::string::npos);
  CHECK(index.find("\"failed\": 0") != std::string::npos);

  // A duplicate id across configs fails the sweep up front.
  {
    std::ofstream c(dir / "c.cfg");
    c << tiny_scenario("sweep_a").to_config_text();
  }
  CHECK(qnls::sweep_directory(dir.string(), 2) == 1);
  const std::string dup_index = slurp(dir / "index.json");
  CHECK(dup_index.find("duplicate scenario id") != std::string::npos);
  fs::remove_all(dir);
}
