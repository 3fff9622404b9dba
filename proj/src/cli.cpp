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

#include "qcoh/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

namespace qcoh::cli {

namespace {

using nlohmann::json;

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

const char* status_name(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "Optimal";
    case SdpStatus::MaxIterations: return "MaxIterations";
    default: return "NumericalFailure";
  }
}

const char* measure_name(Measure m) {
  switch (m) {
    case Measure::Cr: return "c_r";
    case Measure::Cg: return "c_g";
    case Measure::Cmin: return "c_min";
    case Measure::Cmax: return "c_max";
    case Measure::Cf: return "c_f";
    default: return "c_0";
  }
}

// canonical column order used by the sweep CSVs
int measure_rank(Measure m) {
  switch (m) {
    case Measure::Cmax: return 0;
    case Measure::Cr: return 1;
    case Measure::Cmin: return 2;
    case Measure::Cg: return 3;
    case Measure::Cf: return 4;
    default: return 5;
  }
}

bool wants(const std::vector<Measure>& ms, Measure m) {
  return std::find(ms.begin(), ms.end(), m) != ms.end();
}

// simple deterministic index-strided worker pool
void parallel_rows(int count, const std::function<void(int)>& body) {
  const int workers =
      std::max(1, std::min<int>(std::thread::hardware_concurrency(), count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < count; i += workers) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

std::vector<Measure> parse_measures(const std::string& list) {
  std::vector<Measure> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "cr") out.push_back(Measure::Cr);
    else if (tok == "cg") out.push_back(Measure::Cg);
    else if (tok == "cmin") out.push_back(Measure::Cmin);
    else if (tok == "cmax") out.push_back(Measure::Cmax);
    else if (tok == "cf") out.push_back(Measure::Cf);
    else if (tok == "c0") out.push_back(Measure::C0);
    else throw ValidationError("unknown measure '" + tok +
                               "' (expected cr,cg,cmin,cmax,cf,c0)");
  }
  if (out.empty()) throw ValidationError("empty measure list");
  std::sort(out.begin(), out.end(),
            [](Measure a, Measure b) { return measure_rank(a) < measure_rank(b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

DensityMatrix parse_state_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("state file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j.contains("matrix"))
    throw ParseError("state file: expected an object with dim and matrix");
  if (!j["dim"].is_number_integer() || j["dim"].get<int>() <= 0)
    throw ParseError("state file: dim must be a positive integer");
  const int d = j["dim"].get<int>();
  const auto& rows = j["matrix"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != d)
    throw ParseError("state file: matrix must have dim rows");
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != d) {
      std::ostringstream os;
      os << "state file: row " << i << " must have dim entries";
      throw ParseError(os.str());
    }
    for (int k = 0; k < d; ++k) {
      const auto& cell = rows[i][k];
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
          !cell[1].is_number()) {
        std::ostringstream os;
        os << "state file: entry (" << i << "," << k
           << ") must be a [re, im] number pair";
        throw ParseError(os.str());
      }
      m.at(i, k) = Complex(cell[0].get<double>(), cell[1].get<double>());
    }
  }
  return DensityMatrix::from_matrix(std::move(m));  // ValidationError on bad states
}

DensityMatrix load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open state file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_state_json(buf.str());
}

DensityMatrix plus_mix_state(double nu) {
  ComplexMatrix m(2, 2);
  m.at(0, 0) = 0.5;
  m.at(1, 1) = 0.5;
  m.at(0, 1) = 0.5 * nu;
  m.at(1, 0) = 0.5 * nu;
  return DensityMatrix::from_matrix(std::move(m));
}

DensityMatrix plus3_mix_state(double nu) {
  ComplexMatrix plus(2, 2);
  plus.at(0, 0) = 0.5;
  plus.at(0, 1) = 0.5;
  plus.at(1, 0) = 0.5;
  plus.at(1, 1) = 0.5;
  ComplexMatrix p3 = kron(kron(plus, plus), plus);
  ComplexMatrix m(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      m.at(i, j) = nu * p3.at(i, j);
      if (i == j) m.at(i, j) += (1.0 - nu) / 8.0;
    }
  return DensityMatrix::from_matrix(std::move(m));
}

DensityMatrix bloch_state(double beta, double gamma) {
  const double nx = gamma * std::sin(beta * M_PI);
  const double nz = std::cos(beta * M_PI);
  ComplexMatrix m(2, 2);
  m.at(0, 0) = 0.5 * (1.0 + nz);
  m.at(1, 1) = 0.5 * (1.0 - nz);
  m.at(0, 1) = 0.5 * nx;
  m.at(1, 0) = 0.5 * nx;
  return DensityMatrix::from_matrix(std::move(m));
}

void SweepSpec::validate() const {
  if (nu_steps < 2) throw ValidationError("sweep: nu-steps must be at least 2");
  if (measures.empty()) throw ValidationError("sweep: no measures selected");
  const bool heuristic_family = family == Family::Plus3Mix;
  if (heuristic_family && !allow_heuristic &&
      (wants(measures, Measure::Cf) || wants(measures, Measure::C0)))
    throw ValidationError(
        "sweep: cf/c0 are heuristic upper bounds above dimension 2; pass "
        "--allow-heuristic to accept them");
}

void BlochSpec::validate() const {
  if (beta_steps < 2 || gamma_steps < 2)
    throw ValidationError("bloch: step counts must be at least 2");
}

namespace {

struct RowValues {
  double values[6];
  bool exact[6];
};

RowValues compute_row(const DensityMatrix& rho,
                      const std::vector<Measure>& measures, double tol,
                      uint64_t seed) {
  RowValues row{};
  ReportOptions opts;
  opts.measure.sdp.tol = tol;
  opts.roof.seed = seed;
  opts.with_formation = wants(measures, Measure::Cf);
  opts.with_zero = wants(measures, Measure::C0);
  const CoherenceReport rep = compute_report(rho, opts);
  for (Measure m : measures) {
    const int slot = measure_rank(m);
    row.exact[slot] = true;
    switch (m) {
      case Measure::Cr: row.values[slot] = rep.c_r; break;
      case Measure::Cg: row.values[slot] = rep.c_g; break;
      case Measure::Cmin: row.values[slot] = rep.c_min; break;
      case Measure::Cmax: row.values[slot] = rep.c_max; break;
      case Measure::Cf:
        row.values[slot] = rep.c_f->value;
        row.exact[slot] = rep.c_f->exact;
        break;
      case Measure::C0:
        row.values[slot] = rep.c_0->value;
        row.exact[slot] = rep.c_0->exact;
        break;
    }
  }
  return row;
}

std::string csv_header(const std::vector<std::string>& lead,
                       const std::vector<Measure>& measures, bool ub_suffix) {
  std::string head;
  for (const auto& c : lead) {
    if (!head.empty()) head += ',';
    head += c;
  }
  for (Measure m : measures) {
    head += ',';
    head += measure_name(m);
    if (ub_suffix && (m == Measure::Cf || m == Measure::C0)) head += "_ub";
  }
  head += '\n';
  return head;
}

}  // namespace

std::string run_sweep_csv(const SweepSpec& spec) {
  spec.validate();
  const bool ub = spec.family == SweepSpec::Family::Plus3Mix;
  std::string csv = csv_header({"nu"}, spec.measures, ub);

  std::vector<std::string> rows(spec.nu_steps);
  parallel_rows(spec.nu_steps, [&](int i) {
    const double nu = static_cast<double>(i) / (spec.nu_steps - 1);
    const DensityMatrix rho = spec.family == SweepSpec::Family::PlusMix
                                  ? plus_mix_state(nu)
                                  : plus3_mix_state(nu);
    const RowValues row =
        compute_row(rho, spec.measures, spec.tol, spec.seed + i);
    std::string line = fmt9(nu);
    for (Measure m : spec.measures) {
      line += ',';
      line += fmt9(row.values[measure_rank(m)]);
    }
    line += '\n';
    rows[i] = std::move(line);
  });
  for (const auto& r : rows) csv += r;
  return csv;
}

std::string run_bloch_csv(const BlochSpec& spec) {
  spec.validate();
  const std::vector<Measure> measures{Measure::Cmax, Measure::Cr,
                                      Measure::Cmin, Measure::Cg};
  std::string csv = csv_header({"beta", "gamma"}, measures, false);
  const int total = spec.beta_steps * spec.gamma_steps;
  std::vector<std::string> rows(total);
  parallel_rows(total, [&](int idx) {
    const int bi = idx / spec.gamma_steps;
    const int gi = idx % spec.gamma_steps;
    const double beta = static_cast<double>(bi) / (spec.beta_steps - 1);
    const double gamma = static_cast<double>(gi) / (spec.gamma_steps - 1);
    const RowValues row =
        compute_row(bloch_state(beta, gamma), measures, spec.tol, 1);
    std::string line = fmt9(beta);
    line += ',';
    line += fmt9(gamma);
    for (Measure m : measures) {
      line += ',';
      line += fmt9(row.values[measure_rank(m)]);
    }
    line += '\n';
    rows[idx] = std::move(line);
  });
  for (const auto& r : rows) csv += r;
  return csv;
}

std::string run_compute(const ComputeSpec& spec) {
  const DensityMatrix rho = load_state_file(spec.state_path);
  const bool heuristic_needed =
      rho.dim() > 2 &&
      (wants(spec.measures, Measure::Cf) || wants(spec.measures, Measure::C0));
  if (heuristic_needed && !spec.allow_heuristic)
    throw ValidationError(
        "cf/c0 are heuristic upper bounds above dimension 2; pass "
        "--allow-heuristic to accept them");

  ReportOptions opts;
  opts.measure.sdp.tol = spec.tol;
  opts.roof.seed = spec.seed;
  opts.with_formation = wants(spec.measures, Measure::Cf);
  opts.with_zero = wants(spec.measures, Measure::C0);
  const CoherenceReport rep = compute_report(rho, opts);

  if (spec.json_output) {
    json out;
    out["dim"] = rho.dim();
    json vals;
    for (Measure m : spec.measures) {
      switch (m) {
        case Measure::Cr: vals["c_r"] = rep.c_r; break;
        case Measure::Cg: vals["c_g"] = rep.c_g; break;
        case Measure::Cmin: vals["c_min"] = rep.c_min; break;
        case Measure::Cmax: vals["c_max"] = rep.c_max; break;
        case Measure::Cf:
          vals[rep.c_f->exact ? "c_f" : "c_f_ub"] = rep.c_f->value;
          break;
        case Measure::C0:
          vals[rep.c_0->exact ? "c_0" : "c_0_ub"] = rep.c_0->value;
          break;
      }
    }
    out["measures"] = vals;
    out["route_disagreement"] = rep.route_disagreement;
    out["flagged"] = rep.flagged;
    json diag;
    auto solver_info = [](const SdpSolution& s) {
      json d;
      d["status"] = status_name(s.status);
      d["iterations"] = s.iterations;
      d["duality_gap"] = s.duality_gap;
      return d;
    };
    diag["c_min"] = {{"direct", rep.min_entropy.direct_route},
                     {"conditional", rep.min_entropy.conditional_route},
                     {"direct_solver", solver_info(rep.min_entropy.direct_solution)},
                     {"conditional_solver",
                      solver_info(rep.min_entropy.conditional_solution)}};
    diag["c_max"] = {{"direct", rep.max_entropy.direct_route},
                     {"conditional", rep.max_entropy.conditional_route},
                     {"direct_solver", solver_info(rep.max_entropy.direct_solution)},
                     {"conditional_solver",
                      solver_info(rep.max_entropy.conditional_solution)}};
    out["diagnostics"] = diag;
    return out.dump(2) + "\n";
  }

  std::ostringstream os;
  os << "measure      value          note\n";
  for (Measure m : spec.measures) {
    std::string name = measure_name(m);
    std::string note;
    double value = 0.0;
    switch (m) {
      case Measure::Cr: value = rep.c_r; break;
      case Measure::Cg: value = rep.c_g; break;
      case Measure::Cmin:
        value = rep.c_min;
        note = "routes " + fmt9(rep.min_entropy.direct_route) + " | " +
               fmt9(rep.min_entropy.conditional_route);
        break;
      case Measure::Cmax:
        value = rep.c_max;
        note = "routes " + fmt9(rep.max_entropy.direct_route) + " | " +
               fmt9(rep.max_entropy.conditional_route);
        break;
      case Measure::Cf:
        value = rep.c_f->value;
        note = rep.c_f->exact ? "exact" : "upper bound";
        if (!rep.c_f->exact) name += "_ub";
        break;
      case Measure::C0:
        value = rep.c_0->value;
        note = rep.c_0->exact ? "exact" : "upper bound";
        if (!rep.c_0->exact) name += "_ub";
        break;
    }
    os << name << std::string(13 - name.size(), ' ') << fmt9(value);
    if (!note.empty()) os << "   " << note;
    os << "\n";
  }
  if (rep.flagged)
    os << "warning: route disagreement " << fmt9(rep.route_disagreement)
       << " above 1e-5\n";
  return os.str();
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file: " + path);
  out << content;
  if (!out.good()) throw ValidationError("failed writing output file: " + path);
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"coherence measures of finite-dimensional quantum states"};
  app.require_subcommand(1);

  std::string state_path, out_path, measures_arg, family_arg = "plus-mix",
                                                  format_arg = "table";
  double tol = 1e-8;
  uint64_t seed = 1;
  bool allow_heuristic = false;
  int nu_steps = 101, beta_steps = 51, gamma_steps = 51;

  auto* compute = app.add_subcommand("compute", "measures of one state file");
  compute->add_option("--state", state_path, "JSON state file")->required();
  compute->add_option("--measures", measures_arg,
                      "comma list of cr,cg,cmin,cmax,cf,c0");
  compute->add_option("--format", format_arg, "table or json")
      ->check(CLI::IsMember({"table", "json"}));
  compute->add_flag("--allow-heuristic", allow_heuristic,
                    "accept upper-bound cf/c0 above dimension 2");
  compute->add_option("--tol", tol, "SDP duality-gap tolerance");
  compute->add_option("--seed", seed, "seed for heuristic searches");

  auto* sweep = app.add_subcommand("sweep", "one-parameter family scan");
  sweep->add_option("--family", family_arg, "plus-mix or plus3-mix")
      ->check(CLI::IsMember({"plus-mix", "plus3-mix"}));
  sweep->add_option("--nu-steps", nu_steps, "grid points in [0,1]");
  sweep->add_option("--out", out_path, "output CSV path")->required();
  sweep->add_option("--measures", measures_arg,
                    "comma list of cr,cg,cmin,cmax,cf,c0");
  sweep->add_flag("--allow-heuristic", allow_heuristic,
                  "accept upper-bound cf/c0 above dimension 2");
  sweep->add_option("--tol", tol, "SDP duality-gap tolerance");
  sweep->add_option("--seed", seed, "seed for heuristic searches");

  auto* bloch = app.add_subcommand("bloch", "latitude/radius qubit scan");
  bloch->add_option("--beta-steps", beta_steps, "latitude grid points");
  bloch->add_option("--gamma-steps", gamma_steps, "radius grid points");
  bloch->add_option("--out", out_path, "output CSV path")->required();
  bloch->add_option("--tol", tol, "SDP duality-gap tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (compute->parsed()) {
      ComputeSpec spec;
      spec.state_path = state_path;
      if (!measures_arg.empty()) spec.measures = parse_measures(measures_arg);
      spec.json_output = format_arg == "json";
      spec.allow_heuristic = allow_heuristic;
      spec.tol = tol;
      spec.seed = seed;
      std::fputs(run_compute(spec).c_str(), stdout);
    } else if (sweep->parsed()) {
      SweepSpec spec;
      spec.family = family_arg == "plus-mix" ? SweepSpec::Family::PlusMix
                                             : SweepSpec::Family::Plus3Mix;
      spec.nu_steps = nu_steps;
      if (!measures_arg.empty()) spec.measures = parse_measures(measures_arg);
      spec.allow_heuristic = allow_heuristic;
      spec.tol = tol;
      spec.seed = seed;
      write_file(out_path, run_sweep_csv(spec));
    } else if (bloch->parsed()) {
      BlochSpec spec;
      spec.beta_steps = beta_steps;
      spec.gamma_steps = gamma_steps;
      spec.tol = tol;
      write_file(out_path, run_bloch_csv(spec));
    }
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const DimensionMismatchError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const NonHermitianError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const NotPsdError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace qcoh::cli
