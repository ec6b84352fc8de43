// Copyright 2026 The FLDP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "fldp/cli.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = fldp::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fldp_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& body) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(body);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

const std::vector<std::string> kAccountBase = {
    "account", "--method", "fedavg", "--schedule", "constant",
    "--mu", "0.1", "--L", "1", "--V", "10",
    "--K", "5", "--T", "100", "--m", "20", "--sigma", "1"};

}  // namespace

TEST_CASE("account: T = 1 equality and JSON shape") {
  auto res = run_cli({"account", "--method", "fedavg", "--schedule",
                      "constant", "--mu", "0.1", "--L", "1", "--V", "10",
                      "--K", "5", "--T", "1", "--m", "20", "--sigma", "1"});
  REQUIRE(res.code == 0);
  const json j = json::parse(res.out);
  CHECK(j.at("schema") == "fldp.account.v1");
  const double expected = 2.0 * 0.1 * 10.0 * 5.0 / std::sqrt(20.0);
  CHECK(j.at("gdp_mu").get<double>() ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(j.at("closed_form_mu").get<double>() ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(j.at("eps_delta").size() == 5);
  CHECK(j.at("rdp").size() == 5);
  CHECK(j.at("eps_delta")[0].at("epsilon") == 0.5);
  CHECK(j.at("rdp")[4].at("order") == 32.0);
}

TEST_CASE("account: identical invocations produce identical bytes") {
  const auto a = run_cli(kAccountBase);
  const auto b = run_cli(kAccountBase);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("help is available and exits cleanly") {
  const auto top = run_cli({"--help"});
  CHECK(top.code == 0);
  CHECK(top.out.find("account") != std::string::npos);
  CHECK(top.out.find("simulate") != std::string::npos);
}

TEST_CASE("account: exact coefficient mode is reachable from flags") {
  const auto res = run_cli({"account", "--method", "fedavg", "--schedule",
                            "cyclic", "--mode", "exact", "--mu", "0.1", "--L",
                            "1", "--V", "10", "--K", "5", "--T", "50", "--m",
                            "20", "--sigma", "1"});
  REQUIRE(res.code == 0);
  const json j = json::parse(res.out);
  CHECK(j.at("bound_kind") == "upper-bound");
  CHECK(j.at("gdp_mu").get<double>() <=
        j.at("closed_form_mu").get<double>());
}

TEST_CASE("account: usage errors exit 2") {
  CHECK(run_cli({"account", "--method", "fedprox", "--mu", "0.1", "--L", "1",
                 "--V", "10", "--K", "5", "--T", "10", "--m", "20", "--sigma",
                 "1"})
            .code == 2);  // fedprox without --alpha
  CHECK(run_cli({"account", "--method", "fedavg", "--alpha", "2", "--mu",
                 "0.1", "--L", "1", "--V", "10", "--K", "5", "--T", "10",
                 "--m", "20", "--sigma", "1"})
            .code == 2);  // alpha without fedprox
  CHECK(run_cli({"account", "--method", "sgd"}).code == 2);
  CHECK(run_cli({"account"}).code == 2);
  CHECK(run_cli({"bogus"}).code == 2);
}

TEST_CASE("account: numeric overflow exits 3") {
  const auto res =
      run_cli({"account", "--method", "fedavg", "--schedule", "constant",
               "--mu", "0.1", "--L", "1", "--V", "1e200", "--K", "5", "--T",
               "10", "--m", "1", "--sigma", "1e-150"});
  CHECK(res.code == 3);
}

TEST_CASE("account: config file with flag overrides") {
  const fs::path dir = fresh_dir("config");
  const fs::path cfg = dir / "config.json";
  std::ofstream(cfg) << R"({"method":"fedavg","schedule":"constant",
    "mu":0.1,"L":1,"V":10,"K":5,"T":1,"m":20,"sigma":1})";
  const auto from_file = run_cli({"account", "--config", cfg.string()});
  REQUIRE(from_file.code == 0);
  const auto overridden =
      run_cli({"account", "--config", cfg.string(), "--m", "80"});
  REQUIRE(overridden.code == 0);
  const double mu_file = json::parse(from_file.out).at("gdp_mu");
  const double mu_override = json::parse(overridden.out).at("gdp_mu");
  CHECK(mu_override == doctest::Approx(mu_file / 2.0).epsilon(1e-12));
}

TEST_CASE("calibrate: fixed point, scaling, and round trip") {
  const auto at_unit = run_cli(kAccountBase);
  const double bound = json::parse(at_unit.out).at("gdp_mu");

  const auto fixed = run_cli({"calibrate", "--method", "fedavg", "--schedule",
                              "constant", "--mu", "0.1", "--L", "1", "--V",
                              "10", "--K", "5", "--T", "100", "--m", "20",
                              "--target-mu", std::to_string(bound)});
  REQUIRE(fixed.code == 0);
  CHECK(json::parse(fixed.out).at("sigma").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-6));

  const auto halved = run_cli({"calibrate", "--method", "fedavg",
                               "--schedule", "constant", "--mu", "0.1", "--L",
                               "1", "--V", "10", "--K", "5", "--T", "100",
                               "--m", "20", "--target-mu",
                               std::to_string(bound / 2.0)});
  CHECK(json::parse(halved.out).at("sigma").get<double>() ==
        doctest::Approx(2.0).epsilon(1e-6));

  // account -> calibrate -> account closes
  const auto cal = run_cli({"calibrate", "--method", "fedavg", "--schedule",
                            "constant", "--mu", "0.1", "--L", "1", "--V",
                            "10", "--K", "5", "--T", "100", "--m", "20",
                            "--epsilon", "1", "--delta", "0.1269367375066439"});
  REQUIRE(cal.code == 0);
  const json cal_json = json::parse(cal.out);
  CHECK(cal_json.at("achieved_mu").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(cal_json.at("achieved_delta_at_epsilon").get<double>() <=
        0.1269367375066439 + 1e-6);

  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", cal_json.at("sigma").get<double>());
  const auto re = run_cli({"account", "--method", "fedavg", "--schedule",
                           "constant", "--mu", "0.1", "--L", "1", "--V", "10",
                           "--K", "5", "--T", "100", "--m", "20", "--sigma",
                           buf});
  REQUIRE(re.code == 0);
  CHECK(json::parse(re.out).at("gdp_mu").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("calibrate: error contract") {
  CHECK(run_cli({"calibrate", "--method", "fedavg", "--schedule", "constant",
                 "--mu", "0.1", "--L", "1", "--V", "10", "--K", "5", "--T",
                 "10", "--m", "20", "--target-mu", "0"})
            .code == 4);
  CHECK(run_cli({"calibrate", "--method", "fedavg", "--schedule", "constant",
                 "--mu", "0.1", "--L", "1", "--V", "10", "--K", "5", "--T",
                 "10", "--m", "20"})
            .code == 2);  // no target at all
  CHECK(run_cli({"calibrate", "--method", "fedavg", "--schedule", "constant",
                 "--mu", "0.1", "--L", "1", "--V", "10", "--K", "5", "--T",
                 "10", "--m", "20", "--target-mu", "1", "--epsilon", "1",
                 "--delta", "0.1"})
            .code == 2);  // both targets
}

TEST_CASE("sweep: grid columns and scaling") {
  const auto res = run_cli({"sweep", "--method", "fedavg", "--schedule",
                            "constant", "--mu", "0.1", "--L", "1", "--V",
                            "10", "--K", "5", "--T", "1,10,100,1000,10000",
                            "--m", "20", "--sigma", "1"});
  REQUIRE(res.code == 0);
  CHECK(res.out.rfind("# schema: fldp.sweep.v1\n", 0) == 0);
  const auto rows = parse_csv(res.out);
  REQUIRE(rows.size() == 6);  // header + 5 grid points
  CHECK(rows[0][0] == "T");
  CHECK(rows[0][5] == "gdp_mu");

  double prev_mu = 0.0;
  double prev_baseline = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double mu = std::stod(rows[i][5]);
    const double baseline = std::stod(rows[i][7]);
    CHECK(mu >= prev_mu * (1.0 - 1e-9));
    if (i > 1) {
      CHECK(baseline / prev_baseline ==
            doctest::Approx(std::sqrt(10.0)).epsilon(1e-9));
    }
    CHECK(rows[i][4].empty());  // no alpha column content for fedavg
    prev_mu = mu;
    prev_baseline = baseline;
  }

  CHECK(run_cli({"sweep", "--method", "fedavg", "--schedule", "constant",
                 "--mu", "0.1", "--L", "1", "--V", "10", "--K", "5", "--T",
                 "", "--m", "20", "--sigma", "1"})
            .code == 2);  // empty grid
}

TEST_CASE("sweep: deterministic file output") {
  const fs::path dir = fresh_dir("sweep");
  const std::vector<std::string> args = {
      "sweep", "--method", "fedprox", "--alpha", "2,4", "--schedule",
      "constant", "--mu", "0.1", "--L", "1", "--V", "10", "--K", "5",
      "--T", "10,100", "--m", "20", "--sigma", "1", "--out",
      (dir / "sweep.csv").string()};
  REQUIRE(run_cli(args).code == 0);
  const std::string first = slurp(dir / "sweep.csv");
  REQUIRE(run_cli(args).code == 0);
  CHECK(first == slurp(dir / "sweep.csv"));
  const auto rows = parse_csv(first);
  CHECK(rows.size() == 5);  // header + 2x2 grid
}

TEST_CASE("tradeoff: diagonal at mu = 0 and reference value at mu = 1") {
  const auto diag = run_cli({"tradeoff", "--mu", "0", "--points", "11"});
  REQUIRE(diag.code == 0);
  for (const auto& row : parse_csv(diag.out)) {
    if (row[0] == "alpha") continue;
    CHECK(std::stod(row[1]) ==
          doctest::Approx(1.0 - std::stod(row[0])).epsilon(1e-12));
  }

  const auto curve = run_cli({"tradeoff", "--mu", "1", "--points", "101"});
  REQUIRE(curve.code == 0);
  const auto rows = parse_csv(curve.out);
  bool found_midpoint = false;
  for (const auto& row : rows) {
    if (row[0] == "alpha") continue;
    if (std::abs(std::stod(row[0]) - 0.5) < 1e-12) {
      CHECK(std::stod(row[1]) ==
            doctest::Approx(0.15865525393145705).epsilon(1e-9));
      found_midpoint = true;
    }
  }
  CHECK(found_midpoint);

  const auto mc = run_cli({"tradeoff", "--mu", "1", "--points", "5",
                           "--mc-samples", "20000", "--seed", "3"});
  REQUIRE(mc.code == 0);
  const auto mc_rows = parse_csv(mc.out);
  CHECK(mc_rows[0].size() == 4);
  CHECK(mc_rows[0][2] == "mc_alpha");
}

TEST_CASE("simulate: deterministic outputs and control run") {
  const fs::path dir1 = fresh_dir("sim1");
  const fs::path dir2 = fresh_dir("sim2");
  setenv("FLDP_TIMESTAMP", "2026-01-01T00:00:00Z", 1);
  const std::vector<std::string> base = {
      "simulate", "--method", "fedavg", "--schedule", "constant",
      "--mu", "0.02", "--V", "10", "--K", "3", "--T", "15",
      "--m", "6", "--sigma", "0.1", "--seed", "7",
      "--n-per-client", "12", "--dim", "5"};

  auto with_dir = base;
  with_dir.insert(with_dir.end(), {"--out-dir", dir1.string()});
  REQUIRE(run_cli(with_dir).code == 0);
  auto with_dir2 = base;
  with_dir2.insert(with_dir2.end(), {"--out-dir", dir2.string()});
  REQUIRE(run_cli(with_dir2).code == 0);

  CHECK(slurp(dir1 / "trace.csv") == slurp(dir2 / "trace.csv"));
  CHECK(slurp(dir1 / "summary.json") == slurp(dir2 / "summary.json"));
  // manifests differ only in the command line (out-dir path), so compare
  // after pinning the timestamp and dropping the command
  json m1 = json::parse(slurp(dir1 / "manifest.json"));
  json m2 = json::parse(slurp(dir2 / "manifest.json"));
  CHECK(m1.at("schema") == "fldp.manifest.v1");
  CHECK(m1.at("timestamp") == "2026-01-01T00:00:00Z");
  CHECK(m1.at("seed") == 7);
  m1.erase("command");
  m2.erase("command");
  CHECK(m1 == m2);

  const json summary = json::parse(slurp(dir1 / "summary.json"));
  CHECK(summary.at("schema") == "fldp.simulate.v1");
  CHECK(summary.at("envelope_violations") == 0);
  CHECK(summary.at("recursion_violations") == 0);

  SUBCASE("identical pair zeroes the sensitivity column") {
    const fs::path dir3 = fresh_dir("sim3");
    auto control = base;
    control.insert(control.end(),
                   {"--identical-pair", "--out-dir", dir3.string()});
    REQUIRE(run_cli(control).code == 0);
    for (const auto& row : parse_csv(slurp(dir3 / "trace.csv"))) {
      if (row[0] == "t") continue;
      CHECK(std::stod(row[1]) == 0.0);
    }
  }

  SUBCASE("FLDP_OUT_DIR supplies the default output directory") {
    const fs::path dir4 = fresh_dir("sim4");
    setenv("FLDP_OUT_DIR", dir4.c_str(), 1);
    REQUIRE(run_cli(base).code == 0);
    unsetenv("FLDP_OUT_DIR");
    CHECK(fs::exists(dir4 / "trace.csv"));
    CHECK(slurp(dir4 / "trace.csv") == slurp(dir1 / "trace.csv"));
  }

  SUBCASE("missing output directory exits 2") {
    unsetenv("FLDP_OUT_DIR");
    CHECK(run_cli(base).code == 2);
  }
}

TEST_CASE("simulate: divergence exits 5 with the round index") {
  const fs::path dir = fresh_dir("sim_div");
  const auto res = run_cli({"simulate", "--method", "fedprox", "--alpha",
                            "100", "--schedule", "constant", "--mu", "1e15",
                            "--V", "10", "--K", "20", "--T", "10", "--m", "4",
                            "--sigma", "0.1", "--seed", "1", "--n-per-client",
                            "8", "--dim", "4", "--out-dir", dir.string()});
  CHECK(res.code == 5);
  CHECK(res.err.find("round") != std::string::npos);
}
