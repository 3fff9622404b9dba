// Copyright 2026 The qcoh developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qcoh/cli.hpp"
#include "test_support.hpp"

using namespace qcoh;
using namespace qcoh::cli;

namespace {

struct Csv {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Csv parse_csv(const std::string& text) {
  Csv out;
  std::stringstream ss(text);
  std::string line;
  REQUIRE(std::getline(ss, line));
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) out.columns.push_back(cell);
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    REQUIRE(row.size() == out.columns.size());
    out.rows.push_back(std::move(row));
  }
  return out;
}

int column(const Csv& csv, const std::string& name) {
  for (size_t i = 0; i < csv.columns.size(); ++i)
    if (csv.columns[i] == name) return static_cast<int>(i);
  FAIL("missing column ", name);
  return -1;
}

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = std::string("/tmp/qcoh_test_") + name;
  std::ofstream out(path);
  out << body;
  return path;
}

const char* kPlusJson = R"({"dim": 2,
  "matrix": [[[0.5, 0.0], [0.5, 0.0]], [[0.5, 0.0], [0.5, 0.0]]]})";

int run_binary(const std::string& args) {
  const std::string cmd =
      std::string(QCOH_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("measure list parsing") {
  auto ms = parse_measures("cr,cmin");
  REQUIRE(ms.size() == 2);
  CHECK(ms[0] == Measure::Cr);
  CHECK(ms[1] == Measure::Cmin);
  CHECK_THROWS_AS(parse_measures("cr,bogus"), ValidationError);
  CHECK_THROWS_AS(parse_measures(""), ValidationError);
}

TEST_CASE("state JSON parsing") {
  auto rho = parse_state_json(kPlusJson);
  CHECK(rho.dim() == 2);
  CHECK(std::abs(rho.matrix().at(0, 1) - Complex(0.5)) < 1e-15);

  CHECK_THROWS_AS(parse_state_json("not json"), ParseError);
  CHECK_THROWS_AS(parse_state_json(R"({"dim": 2})"), ParseError);
  CHECK_THROWS_AS(
      parse_state_json(R"({"dim": 2, "matrix": [[[1,0],[0,0]]]})"),
      ParseError);
  CHECK_THROWS_AS(
      parse_state_json(
          R"({"dim": 1, "matrix": [[[1, 0, 3]]]})"),
      ParseError);

  // Hermiticity failure carries the offending coordinates
  try {
    parse_state_json(R"({"dim": 2,
      "matrix": [[[0.5, 0.0], [0.1, 0.0]], [[0.3, 0.0], [0.5, 0.0]]]})");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("(0,1)") != std::string::npos);
  }
}

TEST_CASE("family state builders") {
  CHECK(max_abs_diff(plus_mix_state(0.0).matrix(),
                     DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
  CHECK(std::abs(plus3_mix_state(1.0).matrix().at(0, 7) - Complex(0.125)) <
        1e-15);
  CHECK(plus3_mix_state(0.4).dim() == 8);
  // three coherent qubits carry three bits of distillable coherence
  CHECK(relative_entropy_coherence(plus3_mix_state(1.0)) ==
        doctest::Approx(3.0).epsilon(1e-9));

  // beta = 0 is |0><0|; beta = 0.5, gamma = 1 is |+><+|
  CHECK(std::abs(bloch_state(0.0, 0.7).matrix().at(0, 0) - Complex(1.0)) <
        1e-12);
  CHECK(max_abs_diff(bloch_state(0.5, 1.0).matrix(),
                     qcoh::testing::plus_state().matrix()) < 1e-12);
}

TEST_CASE("sweep CSV: endpoints, ordering, determinism, round trip") {
  SweepSpec spec;
  spec.nu_steps = 5;
  const std::string text = run_sweep_csv(spec);
  CHECK(text.substr(0, text.find('\n')) == "nu,c_max,c_r,c_min,c_g");

  const Csv csv = parse_csv(text);
  REQUIRE(csv.rows.size() == 5);
  const int c_max = column(csv, "c_max"), c_r = column(csv, "c_r"),
            c_min = column(csv, "c_min"), c_g = column(csv, "c_g");
  for (const auto& row : csv.rows) {
    for (double v : row) REQUIRE(std::isfinite(v));
    REQUIRE(row[c_g] <= row[c_min] + 1e-7);
    REQUIRE(row[c_min] <= row[c_r] + 1e-7);
    REQUIRE(row[c_r] <= row[c_max] + 1e-7);
  }
  CHECK(csv.rows.front()[c_max] == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(csv.rows.back()[c_max] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(csv.rows.back()[c_g] == doctest::Approx(0.5).epsilon(1e-6));

  // byte-identical on repeated invocation
  CHECK(run_sweep_csv(spec) == text);

  // midpoint row against independently derived values (diagonal-grid
  // fidelity oracle for c_min/c_g, eigenvalue closed forms for the rest)
  const auto& mid = csv.rows[2];  // nu = 0.5
  CHECK(mid[c_max] == doctest::Approx(0.584962500721).epsilon(1e-7));
  CHECK(mid[c_r] == doctest::Approx(0.188721875541).epsilon(1e-7));
  CHECK(mid[c_min] == doctest::Approx(0.100031373047).epsilon(1e-5));
  CHECK(mid[c_g] == doctest::Approx(0.066987298108).epsilon(1e-5));

  // qubit sweeps may carry exact convex-roof columns without the flag
  SweepSpec with_roof;
  with_roof.nu_steps = 3;
  with_roof.measures = parse_measures("cr,cf,c0");
  const Csv roof_csv = parse_csv(run_sweep_csv(with_roof));
  CHECK(roof_csv.columns[1] == "c_r");
  CHECK(roof_csv.columns[2] == "c_f");
  CHECK(roof_csv.columns[3] == "c_0");
  REQUIRE(roof_csv.rows[2][2] == doctest::Approx(1.0).epsilon(1e-9));

  SweepSpec rejected;
  rejected.family = SweepSpec::Family::Plus3Mix;
  rejected.measures = parse_measures("cf");
  CHECK_THROWS_AS(run_sweep_csv(rejected), ValidationError);
  rejected.allow_heuristic = true;
  rejected.nu_steps = 2;  // now accepted, columns get the _ub suffix
  const Csv ub_csv = parse_csv(run_sweep_csv(rejected));
  CHECK(ub_csv.columns[1] == "c_f_ub");

  SweepSpec bad;
  bad.nu_steps = 1;
  CHECK_THROWS_AS(run_sweep_csv(bad), ValidationError);
}

TEST_CASE("bloch CSV") {
  BlochSpec spec;
  spec.beta_steps = 3;
  spec.gamma_steps = 3;
  const Csv csv = parse_csv(run_bloch_csv(spec));
  REQUIRE(csv.rows.size() == 9);
  CHECK(csv.columns[0] == "beta");
  CHECK(csv.columns[1] == "gamma");
  const int c_r = column(csv, "c_r"), c_max = column(csv, "c_max");
  for (const auto& row : csv.rows) {
    // poles and the gamma = 0 axis are incoherent
    if (row[0] == 0.0 || row[0] == 1.0 || row[1] == 0.0) {
      REQUIRE(std::abs(row[c_r]) < 1e-7);
      REQUIRE(std::abs(row[c_max]) < 1e-7);
    }
  }
  // beta = 0.5, gamma = 1 is |+>
  for (const auto& row : csv.rows)
    if (row[0] == 0.5 && row[1] == 1.0)
      REQUIRE(row[c_r] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("compute output") {
  const std::string path = write_temp("plus.json", kPlusJson);
  ComputeSpec spec;
  spec.state_path = path;
  spec.measures = parse_measures("cr,cmin,cf");
  const std::string table = run_compute(spec);
  CHECK(table.find("c_r") != std::string::npos);
  CHECK(table.find("exact") != std::string::npos);

  spec.json_output = true;
  const std::string js = run_compute(spec);
  CHECK(js.find("\"c_min\"") != std::string::npos);
  CHECK(js.find("\"duality_gap\"") != std::string::npos);

  // heuristic gate for d > 2
  const std::string path3 = write_temp("d3.json", R"({"dim": 3, "matrix": [
    [[0.4, 0.0], [0.1, 0.0], [0.0, 0.0]],
    [[0.1, 0.0], [0.3, 0.0], [0.0, 0.0]],
    [[0.0, 0.0], [0.0, 0.0], [0.3, 0.0]]]})");
  ComputeSpec gated;
  gated.state_path = path3;
  gated.measures = parse_measures("cf");
  CHECK_THROWS_AS(run_compute(gated), ValidationError);
  gated.allow_heuristic = true;
  CHECK(run_compute(gated).find("c_f_ub") != std::string::npos);
}

TEST_CASE("binary exit codes") {
  const std::string good = write_temp("bin_good.json", kPlusJson);
  CHECK(run_binary("compute --state " + good + " --measures cr") == 0);

  CHECK(run_binary("compute --state /nonexistent.json") == 2);

  const std::string broken = write_temp("bin_broken.json", "{oops");
  CHECK(run_binary("compute --state " + broken) == 2);

  const std::string nonherm = write_temp("bin_nonherm.json", R"({"dim": 2,
    "matrix": [[[0.5, 0.0], [0.1, 0.0]], [[0.3, 0.0], [0.5, 0.0]]]})");
  CHECK(run_binary("compute --state " + nonherm) == 3);

  CHECK(run_binary("bogus-subcommand") == 2);
  CHECK(run_binary("--help") == 0);

  // unreachable tolerance surfaces as a solver failure
  CHECK(run_binary("compute --state " + good + " --tol 1e-30") == 4);

  CHECK(run_binary("sweep --family plus-mix --nu-steps 3 --out "
                   "/tmp/qcoh_test_sweep_out.csv") == 0);
  std::ifstream check("/tmp/qcoh_test_sweep_out.csv");
  CHECK(check.good());
}
