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

// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qcoh/cli.hpp"
#include "qcoh/coherence.hpp"
#include "test_support.hpp"

using namespace qcoh;
using namespace qcoh::testing;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, bool pass,
               const std::string& detail) {
  std::printf("%s  criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", number,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void run_parallel(int count, const std::function<void(int)>& body) {
  const int workers =
      std::max(1u, std::min(std::thread::hardware_concurrency(), 4u));
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex m;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < count; i += workers) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> g(m);
        if (!err) err = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

struct Csv {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Csv parse_csv(const std::string& text) {
  Csv out;
  std::stringstream ss(text);
  std::string line, cell;
  std::getline(ss, line);
  std::stringstream hs(line);
  while (std::getline(hs, cell, ',')) out.columns.push_back(cell);
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// --------------------------------------------------------------------------
// criterion 1+2 helpers

void check_figure_endpoints() {
  const double t0 = now();
  cli::SweepSpec spec;
  spec.nu_steps = 2;
  const Csv csv = parse_csv(cli::run_sweep_csv(spec));
  const double elapsed = now() - t0;
  const auto& zero = csv.rows.front();
  const auto& one = csv.rows.back();
  // columns: nu, c_max, c_r, c_min, c_g
  bool pass = elapsed < 5.0;
  double worst = 0.0;
  for (int c = 1; c <= 4; ++c) {
    worst = std::max(worst, std::abs(zero[c]));
    pass = pass && std::abs(zero[c]) <= 1e-7;
  }
  for (int c = 1; c <= 3; ++c) {
    worst = std::max(worst, std::abs(one[c] - 1.0));
    pass = pass && std::abs(one[c] - 1.0) <= 1e-6;
  }
  worst = std::max(worst, std::abs(one[4] - 0.5));
  pass = pass && std::abs(one[4] - 0.5) <= 1e-6;
  criterion(1, "single-qubit family endpoints", pass,
            "max endpoint error " + fmt(worst) + ", " + fmt(elapsed) + " s");
}

void check_figure_shapes() {
  bool pass = true;
  std::string detail;
  double fig2_elapsed = 0.0;
  for (auto family :
       {cli::SweepSpec::Family::PlusMix, cli::SweepSpec::Family::Plus3Mix}) {
    cli::SweepSpec spec;
    spec.family = family;
    spec.nu_steps = 101;
    const double t0 = now();
    const Csv csv = parse_csv(cli::run_sweep_csv(spec));
    const double elapsed = now() - t0;
    if (family == cli::SweepSpec::Family::Plus3Mix) fig2_elapsed = elapsed;

    for (size_t r = 0; r < csv.rows.size(); ++r) {
      const auto& row = csv.rows[r];
      for (double v : row) pass = pass && std::isfinite(v);
      // ordering c_g <= c_min <= c_r <= c_max
      pass = pass && row[4] <= row[3] + 1e-7 && row[3] <= row[2] + 1e-7 &&
             row[2] <= row[1] + 1e-7;
      if (r > 0)
        for (int c = 1; c <= 4; ++c)
          pass = pass && csv.rows[r][c] >= csv.rows[r - 1][c] - 1e-7;
    }
  }
  pass = pass && fig2_elapsed < 600.0;
  criterion(2, "sweep monotonicity and ordering", pass,
            "three-qubit family in " + fmt(fig2_elapsed) + " s");
}

void check_route_equivalence() {
  Rng rng(21);
  std::vector<DensityMatrix> states;
  for (int t = 0; t < 200; ++t)
    states.push_back(random_density(rng, 2 + t % 3));
  std::mutex m;
  double worst = 0.0;
  run_parallel(static_cast<int>(states.size()), [&](int i) {
    const auto mn = min_entropy_coherence(states[i]);
    const auto mx = max_entropy_coherence(states[i]);
    std::lock_guard<std::mutex> g(m);
    worst = std::max({worst, mn.disagreement(), mx.disagreement()});
  });
  criterion(3, "distance and conditional-entropy routes agree", worst <= 1e-6,
            "200 states, worst disagreement " + fmt(worst));
}

void check_duality() {
  Rng rng(22);
  struct Instance {
    DensityMatrix rho_ab, rho_ac;
    int da, db, dc;
  };
  std::vector<Instance> instances;
  for (int t = 0; t < 100; ++t) {
    const int da = 2 + t % 2, db = 2 + (t / 2) % 2, dc = 2 + (t / 4) % 2;
    const auto amps = random_pure(rng, da * db * dc);
    auto full = DensityMatrix::pure(amps);
    instances.push_back(
        {partial_trace(full, da * db, dc, Subsystem::A),
         DensityMatrix::from_matrix(
             partial_trace_middle(full.matrix(), da, db, dc)),
         da, db, dc});
  }
  std::mutex m;
  double worst = 0.0;
  run_parallel(static_cast<int>(instances.size()), [&](int i) {
    const auto& in = instances[i];
    const double hmin = conditional_min_entropy(in.rho_ab, in.da, in.db).value;
    const double hmax = conditional_max_entropy(in.rho_ac, in.da, in.dc).value;
    std::lock_guard<std::mutex> g(m);
    worst = std::max(worst, std::abs(hmin + hmax));
  });
  criterion(4, "min/max conditional entropy duality", worst <= 1e-6,
            "100 pure tripartite states, worst |H_min + H_max| " + fmt(worst));
}

void check_qubit_oracles() {
  Rng rng(23);
  std::vector<DensityMatrix> qubits;
  for (int t = 0; t < 200; ++t) qubits.push_back(random_density(rng, 2));
  std::mutex m;
  double worst_min = 0.0, worst_grid = 0.0;
  run_parallel(static_cast<int>(qubits.size()), [&](int i) {
    const auto& rho = qubits[i];
    const auto cq = build_cq_state(rho);
    ComplexMatrix hel = cq.conditional_states[0].matrix();
    hel *= Complex(cq.probs[0]);
    ComplexMatrix o = cq.conditional_states[1].matrix();
    o *= Complex(cq.probs[1]);
    hel -= o;
    const double pguess = 0.5 * (1.0 + trace_norm(hel));
    const auto mn = min_entropy_coherence(rho);
    const double dev = std::max(std::abs(mn.value + std::log2(pguess)),
                                std::abs(mn.direct_route + std::log2(pguess)));

    double best = 0.0;
    for (int k = 0; k <= 100000; ++k) {
      const double t = static_cast<double>(k) / 100000;
      ComplexMatrix delta(2, 2);
      delta.at(0, 0) = t;
      delta.at(1, 1) = 1.0 - t;
      best = std::max(best, qubit_fidelity(rho.matrix(), delta));
    }
    const double grid_dev =
        std::abs((1.0 - std::exp2(-mn.value)) - (1.0 - best));
    std::lock_guard<std::mutex> g(m);
    worst_min = std::max(worst_min, dev);
    worst_grid = std::max(worst_grid, grid_dev);
  });
  criterion(5, "qubit guessing-probability and grid oracles",
            worst_min <= 1e-7 && worst_grid <= 1e-4,
            "trace-norm dev " + fmt(worst_min) + ", grid dev " +
                fmt(worst_grid));
}

void check_monotone_axioms() {
  Rng rng(24);
  bool pass = true;
  double worst_inc = 0.0;

  for (int t = 0; t < 60; ++t) {
    const int d = 2 + t % 3;
    std::vector<double> p(d);
    double total = 0.0;
    for (auto& x : p) total += (x = 0.05 + rng.uniform());
    for (auto& x : p) x /= total;
    const double v =
        min_entropy_coherence(DensityMatrix::diagonal(p)).value;
    worst_inc = std::max(worst_inc, std::abs(v));
    pass = pass && std::abs(v) <= 1e-7;
  }
  for (int t = 0; t < 60; ++t) {
    auto rho = random_density(rng, 2 + t % 3);
    double mass = 0.0;
    for (int i = 0; i < rho.dim(); ++i)
      for (int j = 0; j < rho.dim(); ++j)
        if (i != j) mass += std::abs(rho.matrix().at(i, j));
    if (mass <= 1e-3) continue;
    pass = pass && min_entropy_coherence(rho).value > 1e-9;
  }

  double worst_convexity = -1.0;
  std::mutex m;
  struct Mix {
    DensityMatrix a, b, mix;
    double p;
  };
  std::vector<Mix> mixes;
  for (int t = 0; t < 200; ++t) {
    const int d = 2 + t % 2;
    auto a = random_density(rng, d);
    auto b = random_density(rng, d);
    const double p = rng.uniform();
    ComplexMatrix mm = a.matrix();
    mm *= Complex(p);
    ComplexMatrix bm = b.matrix();
    bm *= Complex(1.0 - p);
    mm += bm;
    mixes.push_back({a, b, DensityMatrix::from_matrix(std::move(mm)), p});
  }
  run_parallel(static_cast<int>(mixes.size()), [&](int i) {
    const auto& mx = mixes[i];
    const double gap = mx.p * min_entropy_coherence(mx.a).value +
                       (1.0 - mx.p) * min_entropy_coherence(mx.b).value -
                       min_entropy_coherence(mx.mix).value;
    std::lock_guard<std::mutex> g(m);
    worst_convexity = std::max(worst_convexity, -gap);
  });
  pass = pass && worst_convexity <= 1e-7;
  criterion(6, "zero on incoherent, positive on coherent, convex",
            pass,
            "worst incoherent " + fmt(worst_inc) + ", worst convexity slack " +
                fmt(worst_convexity));
}

void check_renyi_ordering() {
  Rng rng(25);
  bool pass = true;
  double worst = 0.0;
  const double alphas[] = {0.5, 0.8, 1.2, 2.0, 5.0};
  for (int t = 0; t < 200; ++t) {
    const int d = 2 + t % 2;
    auto a = random_density(rng, d);
    auto b = random_density(rng, d);
    const double dmin = min_relative_entropy(a, b);
    const double dmid = relative_entropy(a, b);
    const double dmax = max_relative_entropy(a, b);
    worst = std::max({worst, dmin - dmid, dmid - dmax});
    pass = pass && dmin <= dmid + 1e-7 && dmid <= dmax + 1e-7;
    double prev = dmin - 1e-7;
    for (double alpha : alphas) {
      const double v = sandwiched_renyi_divergence(a, b, alpha);
      worst = std::max(worst, prev - v);
      pass = pass && v >= prev - 1e-7;
      prev = v;
    }
    pass = pass && dmax >= prev - 1e-7;
  }
  criterion(7, "divergence ordering and monotonicity in alpha", pass,
            "200 pairs, worst violation " + fmt(std::max(worst, 0.0)));
}

// brute force over two-member decompositions of a qubit state:
// V(theta, phi) rows applied to the weighted eigenbasis
struct QubitRoofOracle {
  ComplexMatrix basis{2, 2};
  double s0 = 0.0, s1 = 0.0;

  explicit QubitRoofOracle(const DensityMatrix& rho) {
    const EigResult eig = eig_hermitian(rho.matrix());
    basis = eig.eigenvectors;
    s0 = std::sqrt(std::max(eig.eigenvalues[0], 0.0));
    s1 = std::sqrt(std::max(eig.eigenvalues[1], 0.0));
  }

  // average dephased entropy and largest support size of the two members
  std::pair<double, int> evaluate(double theta, double phi) const {
    const Complex w = std::polar(1.0, phi);
    const double c = std::cos(theta), s = std::sin(theta);
    const Complex rows[2][2] = {{c * s0, s * w * s1},
                                {-s * std::conj(w) * s0, c * s1}};
    double value = 0.0;
    int max_support = 1;
    for (const auto& row : rows) {
      Complex amp0 = basis.at(0, 0) * row[0] + basis.at(0, 1) * row[1];
      Complex amp1 = basis.at(1, 0) * row[0] + basis.at(1, 1) * row[1];
      const double w0 = std::norm(amp0), w1 = std::norm(amp1);
      const double pj = w0 + w1;
      if (pj < 1e-14) continue;
      int support = 0;
      if (std::abs(amp0) > 1e-8) ++support;
      if (std::abs(amp1) > 1e-8) ++support;
      max_support = std::max(max_support, std::max(support, 1));
      if (w0 > 0.0) value += w0 * std::log2(pj / w0);
      if (w1 > 0.0) value += w1 * std::log2(pj / w1);
    }
    return {value, max_support};
  }

  double formation_minimum() const {
    double best = 1e300;
    double bt = 0.0, bp = 0.0;
    for (int i = 0; i <= 180; ++i)
      for (int j = 0; j < 360; ++j) {
        const double theta = i * (M_PI / 2) / 180;
        const double phi = j * (2 * M_PI) / 360;
        const double v = evaluate(theta, phi).first;
        if (v < best) {
          best = v;
          bt = theta;
          bp = phi;
        }
      }
    // shrinking grids with a fixed center per level and overlapping range
    double ht = (M_PI / 2) / 180, hp = (2 * M_PI) / 360;
    for (int level = 0; level < 8; ++level) {
      const double ct = bt, cp = bp;
      for (int i = -10; i <= 10; ++i)
        for (int j = -10; j <= 10; ++j) {
          const double v = evaluate(ct + i * ht / 5, cp + j * hp / 5).first;
          if (v < best) {
            best = v;
            bt = ct + i * ht / 5;
            bp = cp + j * hp / 5;
          }
        }
      ht /= 5;
      hp /= 5;
    }
    return best;
  }

  int smallest_max_support() const {
    int best = 2;
    for (int i = 0; i <= 120 && best > 1; ++i)
      for (int j = 0; j < 240 && best > 1; ++j)
        best = std::min(
            best,
            evaluate(i * (M_PI / 2) / 120, j * (2 * M_PI) / 240).second);
    return best;
  }
};

void check_qubit_convex_roofs() {
  Rng rng(26);
  std::mutex m;
  double worst_cf = 0.0;
  bool pass = true;
  std::vector<DensityMatrix> qubits;
  for (int t = 0; t < 100; ++t) qubits.push_back(random_density(rng, 2));
  run_parallel(static_cast<int>(qubits.size()), [&](int i) {
    const auto& rho = qubits[i];
    const QubitRoofOracle oracle(rho);
    const double brute = oracle.formation_minimum();
    const double closed = coherence_of_formation(rho).value;
    const double dev = std::abs(brute - closed);

    const bool diagonal = std::abs(rho.matrix().at(0, 1)) <= 1e-10;
    const double c0 = zero_entropy_coherence(rho).value;
    const int support = oracle.smallest_max_support();
    const bool ok =
        diagonal ? (c0 == 0.0) : (c0 == 1.0 && support == 2);
    std::lock_guard<std::mutex> g(m);
    worst_cf = std::max(worst_cf, dev);
    pass = pass && ok;
  });
  pass = pass && worst_cf <= 1e-5;
  criterion(8, "qubit convex-roof closed forms match brute force", pass,
            "100 qubits, worst formation dev " + fmt(worst_cf));
}

void check_solver_instances() {
  bool pass = true;
  std::string detail;

  {  // min t : t I - diag(1,2) >= 0
    SdpProblem p;
    p.decision_dim = 1;
    p.objective = {1.0};
    SdpBlock b;
    b.dim = 2;
    b.constant = RealMatrix(2, 2);
    b.constant.at(0, 0) = -1.0;
    b.constant.at(1, 1) = -2.0;
    p.blocks.push_back(std::move(b));
    p.add_block_term(0, 0, {{0, 0, 1.0}, {1, 1, 1.0}});
    p.initial_point = {3.0};
    const auto s = solve(p, {1e-8, 200});
    pass = pass && s.status == SdpStatus::Optimal && s.iterations <= 50 &&
           s.duality_gap <= 1e-8 && std::abs(s.optimal_value - 2.0) < 1e-7;
    detail += "eig-bound " + std::to_string(s.iterations) + " it";
  }
  {  // min Tr sigma : sigma >= diag(0.3, 0.7)
    SdpProblem p;
    p.decision_dim = 3;
    p.objective = {1.0, 1.0, 0.0};
    for (int k = 0; k < 2; ++k) {
      SdpBlock b;
      b.dim = 2;
      b.constant = RealMatrix(2, 2);
      if (k == 0) {
        b.constant.at(0, 0) = -0.3;
        b.constant.at(1, 1) = -0.7;
      }
      p.blocks.push_back(std::move(b));
      p.add_block_term(k, 0, {{0, 0, 1.0}});
      p.add_block_term(k, 1, {{1, 1, 1.0}});
      p.add_block_term(k, 2, {{0, 1, 1.0}, {1, 0, 1.0}});
    }
    p.initial_point = {1.0, 1.0, 0.0};
    const auto s = solve(p, {1e-8, 200});
    pass = pass && s.status == SdpStatus::Optimal && s.iterations <= 50 &&
           s.duality_gap <= 1e-8 && std::abs(s.optimal_value - 1.0) < 1e-7;
    detail += ", dominating " + std::to_string(s.iterations) + " it";
  }
  {  // uniform binary register with trivial side information
    SdpProblem p;
    p.decision_dim = 1;
    p.objective = {1.0};
    for (int i = 0; i < 3; ++i) {
      SdpBlock b;
      b.dim = 1;
      b.constant = RealMatrix(1, 1);
      if (i < 2) b.constant.at(0, 0) = -0.5;
      p.blocks.push_back(std::move(b));
      p.add_block_term(i, 0, {{0, 0, 1.0}});
    }
    p.initial_point = {1.1};
    const auto s = solve(p, {1e-8, 200});
    pass = pass && s.status == SdpStatus::Optimal && s.iterations <= 50 &&
           s.duality_gap <= 1e-8 && std::abs(s.optimal_value - 0.5) < 1e-7;
    detail += ", register " + std::to_string(s.iterations) + " it";
  }
  criterion(9, "analytic solver instances at 1e-8 gap", pass, detail);
}

}  // namespace

int main() {
  const double t0 = now();
  check_figure_endpoints();
  check_figure_shapes();
  check_route_equivalence();
  check_duality();
  check_qubit_oracles();
  check_monotone_axioms();
  check_renyi_ordering();
  check_qubit_convex_roofs();
  check_solver_instances();
  std::printf("%d/9 criteria passed in %.1f s\n", 9 - g_failures,
              now() - t0);
  return g_failures == 0 ? 0 : 1;
}
