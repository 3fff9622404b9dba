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

#ifndef QCOH_CLI_HPP
#define QCOH_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "qcoh/coherence.hpp"

// Command-line front end. The JSON state-file format stores every complex
// entry as an explicit [re, im] pair:
//
//   { "dim": 2,
//     "matrix": [ [[0.5, 0.0], [0.5, 0.0]],
//                 [[0.5, 0.0], [0.5, 0.0]] ] }
//
// Exit codes: 0 success, 2 parse failure, 3 state/argument validation
// failure, 4 solver failure.

namespace qcoh::cli {

enum class Measure { Cr, Cg, Cmin, Cmax, Cf, C0 };

// Comma-separated subset of cr,cg,cmin,cmax,cf,c0; throws ValidationError.
std::vector<Measure> parse_measures(const std::string& list);

DensityMatrix parse_state_json(const std::string& text);
DensityMatrix load_state_file(const std::string& path);

struct ComputeSpec {
  std::string state_path;
  std::vector<Measure> measures{Measure::Cr, Measure::Cg, Measure::Cmin,
                                Measure::Cmax};
  bool json_output = false;
  bool allow_heuristic = false;
  double tol = 1e-8;
  uint64_t seed = 1;
};

std::string run_compute(const ComputeSpec& spec);

struct SweepSpec {
  enum class Family { PlusMix, Plus3Mix };
  Family family = Family::PlusMix;
  int nu_steps = 101;  // smooth curves by default
  std::vector<Measure> measures{Measure::Cmax, Measure::Cr, Measure::Cmin,
                                Measure::Cg};
  bool allow_heuristic = false;
  double tol = 1e-8;
  uint64_t seed = 1;

  void validate() const;  // throws ValidationError
};

// Deterministic CSV: header nu,<measure columns>; one row per step; rows are
// computed concurrently and assembled in index order; values are printed
// with 9 significant digits so identical invocations are byte-identical.
std::string run_sweep_csv(const SweepSpec& spec);

struct BlochSpec {
  int beta_steps = 51;
  int gamma_steps = 51;
  double tol = 1e-8;

  void validate() const;
};

// Latitude/radius scan of all qubit states at longitude zero:
// n = (gamma sin(beta pi), 0, cos(beta pi)). CSV header
// beta,gamma,c_max,c_r,c_min,c_g.
std::string run_bloch_csv(const BlochSpec& spec);

DensityMatrix plus_mix_state(double nu);
DensityMatrix plus3_mix_state(double nu);
DensityMatrix bloch_state(double beta, double gamma);

// Full argument parsing + dispatch; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace qcoh::cli

#endif  // QCOH_CLI_HPP
