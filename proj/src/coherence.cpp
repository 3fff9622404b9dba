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

#include "qcoh/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace qcoh {

namespace {

constexpr double kSupportEigTol = 1e-10;
constexpr double kDiagonalTol = 1e-10;   // off-diagonal magnitude => coherent
constexpr double kRankAmplitudeTol = 1e-8;  // T_j counting threshold
constexpr double kMemberWeightTol = 1e-12;

bool is_diagonal(const ComplexMatrix& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (i != j && std::abs(m.at(i, j)) > kDiagonalTol) return false;
  return true;
}

double dephased_entropy_of_amplitudes(const std::vector<Complex>& amps) {
  double s = 0.0;
  for (const auto& z : amps) {
    const double w = std::norm(z);
    if (w > 0.0) s -= w * std::log2(w);
  }
  return std::max(s, 0.0);
}

int coherence_rank(const std::vector<Complex>& amps) {
  int t = 0;
  for (const auto& z : amps)
    if (std::abs(z) > kRankAmplitudeTol) ++t;
  return std::max(t, 1);
}

}  // namespace

DensityMatrix dephase(const DensityMatrix& rho) {
  const int d = rho.dim();
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    m.at(i, i) = rho.matrix().at(i, i).real();
  return DensityMatrix::from_matrix(std::move(m));
}

ComplexMatrix dephasing_isometry(int dim) {
  if (dim < 2)
    throw ValidationError("dephasing_isometry: dimension must be at least 2");
  ComplexMatrix v(dim * dim, dim);
  for (int i = 0; i < dim; ++i) v.at(i * dim + i, i) = 1.0;
  return v;
}

ComplexMatrix dephasing_isometry(const DephasingBasisSpec& basis) {
  return dephasing_isometry(basis.dim);
}

ClassicalQuantumState build_cq_state(const PurifiedState& psi) {
  ClassicalQuantumState cq;
  const int da = psi.dim_a;
  const int de = psi.dim_e;
  for (int i = 0; i < da; ++i) {
    double p = 0.0;
    for (int e = 0; e < de; ++e)
      p += std::norm(psi.amplitudes[static_cast<size_t>(i) * de + e]);
    if (p <= kMemberWeightTol) continue;
    std::vector<Complex> v(de);
    const double inv = 1.0 / std::sqrt(p);
    for (int e = 0; e < de; ++e)
      v[e] = psi.amplitudes[static_cast<size_t>(i) * de + e] * inv;
    cq.probs.push_back(p);
    cq.conditional_states.push_back(DensityMatrix::pure(v));
  }
  // re-normalize truncation residue so the invariant holds exactly
  double total = 0.0;
  for (double p : cq.probs) total += p;
  for (double& p : cq.probs) p /= total;
  return cq;
}

ClassicalQuantumState build_cq_state(const DensityMatrix& rho) {
  return build_cq_state(purify(rho));
}

double relative_entropy_coherence(const DensityMatrix& rho) {
  return von_neumann_entropy(dephase(rho)) - von_neumann_entropy(rho);
}

// ---------------------------------------------------------------------------
// Distance-based measures.

namespace {

// Direct route for C_min: root-fidelity maximization over diagonal states,
//   max (Tr X + Tr X^dag)/2  s.t.  [[rho_r, X], [X^dag, P delta P]] >= 0,
//   delta diagonal, sum delta = 1,
// with everything compressed to the support basis of rho (columns of Us) so
// that strictly feasible points exist for singular rho.
SdpValue min_entropy_direct(const DensityMatrix& rho,
                            const SdpOptions& options) {
  const int d = rho.dim();
  const EigResult eig = eig_hermitian(rho.matrix());
  int r = 0;
  while (r < d && eig.eigenvalues[r] > kSupportEigTol) ++r;
  r = std::max(r, 1);
  ComplexMatrix us(d, r);
  for (int k = 0; k < r; ++k)
    for (int i = 0; i < d; ++i) us.at(i, k) = eig.eigenvectors.at(i, k);
  ComplexMatrix rho_r = us.adjoint() * rho.matrix() * us;
  rho_r = 0.5 * (rho_r + rho_r.adjoint());

  const int re_base = 0;           // r*r vars
  const int im_base = r * r;       // r*r vars
  const int delta_base = 2 * r * r;
  const int n = 2 * r * r + d;

  SdpProblem p;
  p.decision_dim = n;
  p.objective.assign(n, 0.0);
  for (int q = 0; q < r; ++q) p.objective[re_base + q * r + q] = -1.0;

  SdpBlock main;
  main.dim = 4 * r;
  ComplexMatrix f0(2 * r, 2 * r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) f0.at(i, j) = rho_r.at(i, j);
  main.constant = hermitian_embed(f0);
  p.blocks.push_back(std::move(main));

  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      ComplexMatrix ere(2 * r, 2 * r), eim(2 * r, 2 * r);
      ere.at(a, r + b) = 1.0;
      ere.at(r + b, a) = 1.0;
      eim.at(a, r + b) = Complex(0.0, 1.0);
      eim.at(r + b, a) = Complex(0.0, -1.0);
      p.add_block_term(0, re_base + a * r + b, embed_entries(ere));
      p.add_block_term(0, im_base + a * r + b, embed_entries(eim));
    }
  for (int i = 0; i < d; ++i) {
    // compressed projector: (Us^dag |i><i| Us) in the lower-right corner
    ComplexMatrix e(2 * r, 2 * r);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        e.at(r + a, r + b) = std::conj(us.at(i, a)) * us.at(i, b);
    p.add_block_term(0, delta_base + i, embed_entries(e, 1e-15));
    SdpBlock nonneg;
    nonneg.dim = 1;
    nonneg.constant = RealMatrix(1, 1);
    p.blocks.push_back(std::move(nonneg));
    p.add_block_term(static_cast<int>(p.blocks.size()) - 1, delta_base + i,
                     {{0, 0, 1.0}});
  }
  EqualityConstraint norm;
  for (int i = 0; i < d; ++i) norm.coefficients.push_back({delta_base + i, 1.0});
  norm.rhs = 1.0;
  p.equalities.push_back(std::move(norm));

  p.initial_point.assign(n, 0.0);
  for (int i = 0; i < d; ++i) p.initial_point[delta_base + i] = 1.0 / d;

  SdpSolution sol = solve(p, options);
  if (sol.status != SdpStatus::Optimal)
    throw SolverError("min_entropy_coherence: direct route not certified");
  const double root_f = std::max(-sol.optimal_value, 1e-300);
  return {-2.0 * std::log2(root_f), std::move(sol)};
}

// Direct route for C_max: minimize Tr D with diag(D) >= rho; the optimum is
// 2^{C_max}.
SdpValue max_entropy_direct(const DensityMatrix& rho,
                            const SdpOptions& options) {
  const int d = rho.dim();
  SdpProblem p;
  p.decision_dim = d;
  p.objective.assign(d, 1.0);
  SdpBlock b;
  b.dim = 2 * d;
  b.constant = hermitian_embed(Complex(-1.0) * rho.matrix());
  p.blocks.push_back(std::move(b));
  for (int i = 0; i < d; ++i) {
    ComplexMatrix e(d, d);
    e.at(i, i) = 1.0;
    p.add_block_term(0, i, embed_entries(e));
  }
  const double top = eig_hermitian(rho.matrix()).eigenvalues.front();
  p.initial_point.assign(d, top + 0.5);

  SdpSolution sol = solve(p, options);
  if (sol.status != SdpStatus::Optimal)
    throw SolverError("max_entropy_coherence: direct route not certified");
  return {std::log2(std::max(sol.optimal_value, 1e-300)), std::move(sol)};
}

// V rho V^dag for the dephasing isometry: entries rho_ij at ((i,i),(j,j)).
DensityMatrix dephasing_extension(const DensityMatrix& rho) {
  const int d = rho.dim();
  ComplexMatrix m(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      m.at(i * d + i, j * d + j) = rho.matrix().at(i, j);
  return DensityMatrix::from_matrix(std::move(m));
}

}  // namespace

RouteValue min_entropy_coherence(const DensityMatrix& rho,
                                 const MeasureOptions& options) {
  RouteValue out;
  SdpValue direct = min_entropy_direct(rho, options.sdp);
  SdpValue cond = conditional_min_entropy(build_cq_state(rho), options.sdp);
  out.direct_route = direct.value;
  out.conditional_route = cond.value;
  out.value = cond.value;
  out.direct_solution = std::move(direct.solution);
  out.conditional_solution = std::move(cond.solution);
  return out;
}

RouteValue max_entropy_coherence(const DensityMatrix& rho,
                                 const MeasureOptions& options) {
  RouteValue out;
  SdpValue direct = max_entropy_direct(rho, options.sdp);

  const ClassicalQuantumState cq = build_cq_state(rho);
  const int joint = cq.num_outcomes() * cq.env_dim();
  SdpValue cond;
  if (joint * joint <= 256) {
    cond = conditional_max_entropy(cq.joint_state(), cq.num_outcomes(),
                                   cq.env_dim(), options.sdp);
  } else {
    // pure-state duality H_max(X_A|E) = -H_min(X_A|A) on V rho V^dag keeps
    // the program at one Hermitian variable of size d
    SdpValue hmin = conditional_min_entropy(dephasing_extension(rho),
                                            rho.dim(), rho.dim(), options.sdp);
    cond.value = -hmin.value;
    cond.solution = std::move(hmin.solution);
  }
  out.direct_route = direct.value;
  out.conditional_route = cond.value;
  out.value = cond.value;
  out.direct_solution = std::move(direct.solution);
  out.conditional_solution = std::move(cond.solution);
  return out;
}

double geometric_coherence(const DensityMatrix& rho,
                           const MeasureOptions& options) {
  return 1.0 - std::exp2(-min_entropy_coherence(rho, options).value);
}

// ---------------------------------------------------------------------------
// Convex-roof machinery.

ComplexMatrix ConvexRoofDecomposition::mixture() const {
  const int d = states.empty() ? 0 : static_cast<int>(states[0].size());
  ComplexMatrix m(d, d);
  for (size_t j = 0; j < weights.size(); ++j)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        m.at(a, b) += weights[j] * states[j][a] * std::conj(states[j][b]);
  return m;
}

double ConvexRoofDecomposition::reconstruction_error(
    const DensityMatrix& rho) const {
  return max_abs_diff(mixture(), rho.matrix());
}

namespace {

struct RoofContext {
  int d = 0;
  int r = 0;
  ComplexMatrix basis;           // d x r eigenvector columns
  std::vector<double> sqrt_lam;  // r Schmidt weights
};

struct RoofEvaluation {
  double formation = 0.0;
  double rank_log = 0.0;
  ConvexRoofDecomposition decomposition;
};

// Rows of M are ensemble members in the eigenbasis; the seeded diagonal
// carries sqrt(lambda), so M^dag M = diag(lambda) for every rotation angle
// and the mixture reproduces rho exactly.
RoofEvaluation evaluate_member_matrix(const RoofContext& ctx, int k,
                                      const std::vector<std::pair<int, int>>& pairs,
                                      const std::vector<double>& angles) {
  std::vector<std::vector<Complex>> m(k, std::vector<Complex>(ctx.r));
  for (int i = 0; i < ctx.r; ++i) m[i][i] = ctx.sqrt_lam[i];
  for (size_t t = 0; t < pairs.size(); ++t) {
    const auto [p, q] = pairs[t];
    const double c = std::cos(angles[2 * t]);
    const double s = std::sin(angles[2 * t]);
    const Complex w = std::polar(1.0, angles[2 * t + 1]);
    for (int i = 0; i < ctx.r; ++i) {
      const Complex mp = m[p][i];
      const Complex mq = m[q][i];
      m[p][i] = c * mp + s * w * mq;
      m[q][i] = -s * std::conj(w) * mp + c * mq;
    }
  }

  RoofEvaluation out;
  int max_rank = 1;
  for (int j = 0; j < k; ++j) {
    std::vector<Complex> amp(ctx.d, 0.0);
    double pj = 0.0;
    for (int a = 0; a < ctx.d; ++a) {
      Complex z = 0.0;
      for (int i = 0; i < ctx.r; ++i) z += ctx.basis.at(a, i) * m[j][i];
      amp[a] = z;
      pj += std::norm(z);
    }
    if (pj <= kMemberWeightTol) continue;
    int rank = 0;
    for (int a = 0; a < ctx.d; ++a) {
      const double w = std::norm(amp[a]);
      if (w > 0.0) out.formation += w * std::log2(pj / w);
      if (std::abs(amp[a]) > kRankAmplitudeTol) ++rank;
    }
    max_rank = std::max(max_rank, std::max(rank, 1));
    const double inv = 1.0 / std::sqrt(pj);
    for (auto& z : amp) z *= inv;
    out.decomposition.weights.push_back(pj);
    out.decomposition.states.push_back(std::move(amp));
  }
  out.formation = std::max(out.formation, 0.0);
  out.rank_log = std::log2(static_cast<double>(max_rank));
  return out;
}

}  // namespace

RoofSearchResult convex_roof_search(const DensityMatrix& rho,
                                    const RoofOptions& options) {
  const EigResult eig = eig_hermitian(rho.matrix());
  const int d = rho.dim();
  RoofContext ctx;
  ctx.d = d;
  ctx.r = 0;
  while (ctx.r < d && eig.eigenvalues[ctx.r] > 1e-12) ++ctx.r;
  ctx.r = std::max(ctx.r, 1);
  ctx.basis = ComplexMatrix(d, ctx.r);
  ctx.sqrt_lam.resize(ctx.r);
  for (int i = 0; i < ctx.r; ++i) {
    ctx.sqrt_lam[i] = std::sqrt(std::max(eig.eigenvalues[i], 0.0));
    for (int a = 0; a < d; ++a) ctx.basis.at(a, i) = eig.eigenvectors.at(a, i);
  }

  int kmax = options.max_size > 0 ? std::min(options.max_size, d * d) : d * d;
  kmax = std::max(kmax, ctx.r);

  RoofSearchResult best;
  best.formation_upper = std::numeric_limits<double>::infinity();
  best.rank_upper = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> uang(0.0, M_PI);
  std::uniform_real_distribution<double> uphase(0.0, 2.0 * M_PI);

  const int num_sizes = kmax - ctx.r + 1;
  const int starts_per_size = std::max(1, options.restarts / num_sizes);

  for (int k = ctx.r; k <= kmax; ++k) {
    std::vector<std::pair<int, int>> pairs;
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q) pairs.push_back({p, q});
    const int nang = static_cast<int>(2 * pairs.size());

    auto track = [&](const std::vector<double>& angles) {
      RoofEvaluation ev = evaluate_member_matrix(ctx, k, pairs, angles);
      if (ev.formation < best.formation_upper) {
        best.formation_upper = ev.formation;
        best.best_formation = ev.decomposition;
      }
      if (ev.rank_log < best.rank_upper) {
        best.rank_upper = ev.rank_log;
        best.best_rank = std::move(ev.decomposition);
      }
      return ev.formation;
    };

    for (int start = 0; start < starts_per_size; ++start) {
      std::vector<double> angles(nang, 0.0);
      if (start > 0)
        for (int t = 0; t < nang; ++t)
          angles[t] = (t % 2 == 0) ? uang(rng) : uphase(rng);
      double current = track(angles);
      if (nang == 0) continue;

      // larger parametrizations get fewer sweeps so the search stays
      // affordable at d^2-sized decompositions; bounds remain valid
      const int sweeps = std::clamp(8000 / nang, 3, options.max_sweeps);
      double step = 0.4;
      for (int sweep = 0; sweep < sweeps; ++sweep) {
        const double before = current;
        for (int idx = 0; idx < nang; ++idx) {
          for (const double delta : {step, -step}) {
            angles[idx] += delta;
            const double trial = track(angles);
            if (trial < current - 1e-15) {
              current = trial;
              break;
            }
            angles[idx] -= delta;
          }
        }
        if (before - current < options.tol) {
          step *= 0.5;
          if (step < 1e-4) break;
        }
      }
    }
  }
  return best;
}

namespace {

std::pair<HeuristicValue, HeuristicValue> roof_values(
    const DensityMatrix& rho, const RoofOptions& options) {
  const int d = rho.dim();
  if (is_diagonal(rho.matrix()))
    return {HeuristicValue{0.0, true}, HeuristicValue{0.0, true}};

  const EigResult eig = eig_hermitian(rho.matrix());
  const bool pure = d < 2 || eig.eigenvalues[1] < 1e-12;
  if (pure) {
    std::vector<Complex> amp(d);
    for (int a = 0; a < d; ++a) amp[a] = eig.eigenvectors.at(a, 0);
    return {HeuristicValue{dephased_entropy_of_amplitudes(amp), true},
            HeuristicValue{std::log2(double(coherence_rank(amp))), true}};
  }
  if (d == 2) {
    // forced two-member decomposition: binary entropy closed form for C_f;
    // every decomposition of an off-diagonal qubit keeps a rank-2 member
    const double off = std::abs(rho.matrix().at(0, 1));
    const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * off * off));
    const double p = 0.5 * (1.0 + root);
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return {HeuristicValue{h, true}, HeuristicValue{1.0, true}};
  }
  const RoofSearchResult res = convex_roof_search(rho, options);
  return {HeuristicValue{res.formation_upper, false},
          HeuristicValue{res.rank_upper, false}};
}

}  // namespace

HeuristicValue coherence_of_formation(const DensityMatrix& rho,
                                      const RoofOptions& options) {
  return roof_values(rho, options).first;
}

HeuristicValue zero_entropy_coherence(const DensityMatrix& rho,
                                      const RoofOptions& options) {
  return roof_values(rho, options).second;
}

double classical_adversary_entropy(const DensityMatrix& rho,
                                   AdversaryEntropy kind, int strategy_budget,
                                   uint64_t seed) {
  if (is_diagonal(rho.matrix())) return 0.0;
  const EigResult eig = eig_hermitian(rho.matrix());
  const bool pure = rho.dim() < 2 || eig.eigenvalues[1] < 1e-12;
  if (pure) {
    std::vector<Complex> amp(rho.dim());
    for (int a = 0; a < rho.dim(); ++a) amp[a] = eig.eigenvectors.at(a, 0);
    return kind == AdversaryEntropy::VonNeumann
               ? dephased_entropy_of_amplitudes(amp)
               : std::log2(double(coherence_rank(amp)));
  }
  RoofOptions options;
  options.restarts = std::max(1, strategy_budget);
  options.seed = seed;
  const RoofSearchResult res = convex_roof_search(rho, options);
  return kind == AdversaryEntropy::VonNeumann ? res.formation_upper
                                              : res.rank_upper;
}

double guessing_probability(const ClassicalQuantumState& cq,
                            const MeasureOptions& options) {
  return std::exp2(-conditional_min_entropy(cq, options.sdp).value);
}

double secrecy_parameter(const ClassicalQuantumState& cq,
                         const MeasureOptions& options) {
  const SdpValue hmax = conditional_max_entropy(
      cq.joint_state(), cq.num_outcomes(), cq.env_dim(), options.sdp);
  return std::exp2(hmax.value);
}

CoherenceReport compute_report(const DensityMatrix& rho,
                               const ReportOptions& options) {
  CoherenceReport report;
  report.c_r = relative_entropy_coherence(rho);
  report.min_entropy = min_entropy_coherence(rho, options.measure);
  report.max_entropy = max_entropy_coherence(rho, options.measure);
  report.c_min = report.min_entropy.value;
  report.c_max = report.max_entropy.value;
  report.c_g = 1.0 - std::exp2(-report.c_min);
  if (options.with_formation || options.with_zero) {
    auto [cf, c0] = roof_values(rho, options.roof);
    if (options.with_formation) report.c_f = cf;
    if (options.with_zero) report.c_0 = c0;
  }
  report.route_disagreement = std::max(report.min_entropy.disagreement(),
                                       report.max_entropy.disagreement());
  report.flagged = report.route_disagreement > 1e-5;
  return report;
}

}  // namespace qcoh
