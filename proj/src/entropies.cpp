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

#include "qcoh/entropies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qcoh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSupportEigTol = 1e-10;   // eigenvalues below this are rank-0
constexpr double kSupportMassTol = 1e-9;   // mass outside support => infinity
constexpr double kZeroEntryTol = 1e-16;    // classical joint-mass threshold

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// weight of rho in the eigendirections of sigma below the support cutoff
double mass_outside_support(const ComplexMatrix& rho, const EigResult& sigma) {
  const int d = rho.rows();
  double mass = 0.0;
  for (int k = 0; k < d; ++k) {
    if (sigma.eigenvalues[k] > kSupportEigTol) continue;
    Complex q = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        q += std::conj(sigma.eigenvectors.at(i, k)) * rho.at(i, j) *
             sigma.eigenvectors.at(j, k);
    mass += std::max(0.0, q.real());
  }
  return mass;
}

// sigma^p on its support from a precomputed eigendecomposition
ComplexMatrix support_power(const EigResult& eig, double p) {
  const int d = eig.eigenvectors.rows();
  ComplexMatrix out(d, d);
  for (int k = 0; k < d; ++k) {
    if (eig.eigenvalues[k] <= kSupportEigTol) continue;
    const double w = std::pow(eig.eigenvalues[k], p);
    for (int i = 0; i < d; ++i) {
      const Complex ui = eig.eigenvectors.at(i, k);
      for (int j = 0; j < d; ++j)
        out.at(i, j) += w * ui * std::conj(eig.eigenvectors.at(j, k));
    }
  }
  return out;
}

ComplexMatrix ptrace_first(const ComplexMatrix& m, int da, int db) {
  ComplexMatrix out(db, db);
  for (int b = 0; b < db; ++b)
    for (int b2 = 0; b2 < db; ++b2)
      for (int a = 0; a < da; ++a)
        out.at(b, b2) += m.at(a * db + b, a * db + b2);
  return out;
}

void require_bipartite(const DensityMatrix& rho, int da, int db,
                       const char* who) {
  if (da <= 0 || db <= 0 || rho.dim() != da * db) {
    std::ostringstream os;
    os << who << ": state dimension " << rho.dim()
       << " does not factor as " << da << " x " << db;
    throw DimensionMismatchError(os.str());
  }
}

void require_optimal(const SdpSolution& sol, const char* who) {
  if (sol.status != SdpStatus::Optimal) {
    std::ostringstream os;
    os << who << ": solver did not certify optimality (status "
       << (sol.status == SdpStatus::MaxIterations ? "MaxIterations"
                                                  : "NumericalFailure")
       << ", gap " << sol.duality_gap << ")";
    throw SolverError(os.str());
  }
}

}  // namespace

DensityMatrix ClassicalQuantumState::joint_state() const {
  validate();
  const int n = num_outcomes();
  const int de = env_dim();
  ComplexMatrix m(n * de, n * de);
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix& ri = conditional_states[i].matrix();
    for (int a = 0; a < de; ++a)
      for (int b = 0; b < de; ++b)
        m.at(i * de + a, i * de + b) = probs[i] * ri.at(a, b);
  }
  return DensityMatrix::from_matrix(std::move(m));
}

void ClassicalQuantumState::validate() const {
  if (probs.empty() || probs.size() != conditional_states.size())
    throw ValidationError("classical-quantum state: outcome lists mismatch");
  double total = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw ValidationError("classical-quantum state: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw ValidationError("classical-quantum state: probabilities do not sum to 1");
  const int de = conditional_states[0].dim();
  for (const auto& s : conditional_states)
    if (s.dim() != de)
      throw ValidationError("classical-quantum state: conditional dimensions differ");
}

void ClassicalClassicalState::validate() const {
  if (num_a <= 0 || num_e <= 0 ||
      joint.size() != static_cast<size_t>(num_a) * num_e)
    throw ValidationError("classical-classical state: shape mismatch");
  double total = 0.0;
  for (double q : joint) {
    if (q < 0.0)
      throw ValidationError("classical-classical state: negative entry");
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw ValidationError("classical-classical state: total mass is not 1");
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const EigResult eig = eig_hermitian(rho.matrix());
  double s = 0.0;
  for (double lambda : eig.eigenvalues) s -= xlog2x(std::max(lambda, 0.0));
  return std::max(s, 0.0);
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatchError("relative_entropy: dimensions differ");
  const EigResult se = eig_hermitian(sigma.matrix());
  if (mass_outside_support(rho.matrix(), se) > kSupportMassTol) return kInf;

  const EigResult re = eig_hermitian(rho.matrix());
  double tr_rho_log_rho = 0.0;
  for (double lambda : re.eigenvalues)
    tr_rho_log_rho += xlog2x(std::max(lambda, 0.0));

  double tr_rho_log_sigma = 0.0;
  const int d = rho.dim();
  for (int k = 0; k < d; ++k) {
    const double mu = se.eigenvalues[k];
    if (mu <= kSupportEigTol) continue;
    Complex q = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        q += std::conj(se.eigenvectors.at(i, k)) * rho.matrix().at(i, j) *
             se.eigenvectors.at(j, k);
    tr_rho_log_sigma += std::max(0.0, q.real()) * std::log2(mu);
  }
  return std::max(0.0, tr_rho_log_rho - tr_rho_log_sigma);
}

double max_relative_entropy(const DensityMatrix& rho,
                            const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatchError("max_relative_entropy: dimensions differ");
  const EigResult se = eig_hermitian(sigma.matrix());
  if (mass_outside_support(rho.matrix(), se) > kSupportMassTol) return kInf;
  const ComplexMatrix w = support_power(se, -0.5);
  ComplexMatrix m = w * rho.matrix() * w;
  m = 0.5 * (m + m.adjoint());
  const EigResult me = eig_hermitian(m);
  return std::log2(std::max(me.eigenvalues.front(), 1e-300));
}

SdpValue max_relative_entropy_sdp(const DensityMatrix& rho,
                                  const DensityMatrix& sigma,
                                  const SdpOptions& options) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatchError("max_relative_entropy_sdp: dimensions differ");
  const EigResult se = eig_hermitian(sigma.matrix());
  if (mass_outside_support(rho.matrix(), se) > kSupportMassTol)
    return {kInf, {}};

  // compress to the support of sigma so the feasible set has interior
  int rank = 0;
  while (rank < sigma.dim() && se.eigenvalues[rank] > kSupportEigTol) ++rank;
  const int d = sigma.dim();
  ComplexMatrix basis(d, rank);
  for (int k = 0; k < rank; ++k)
    for (int i = 0; i < d; ++i) basis.at(i, k) = se.eigenvectors.at(i, k);
  ComplexMatrix rho_c = basis.adjoint() * rho.matrix() * basis;
  ComplexMatrix sig_c = basis.adjoint() * sigma.matrix() * basis;
  rho_c = 0.5 * (rho_c + rho_c.adjoint());
  sig_c = 0.5 * (sig_c + sig_c.adjoint());

  SdpProblem p;
  p.decision_dim = 1;
  p.objective = {1.0};
  SdpBlock b;
  b.dim = 2 * rank;
  b.constant = hermitian_embed(Complex(-1.0) * rho_c);
  p.blocks.push_back(std::move(b));
  p.add_block_term(0, 0, embed_entries(sig_c, 1e-15));
  p.initial_point = {1.0 / se.eigenvalues[rank - 1] + 1.0};

  SdpSolution sol = solve(p, options);
  require_optimal(sol, "max_relative_entropy_sdp");
  return {std::log2(std::max(sol.optimal_value, 1e-300)), std::move(sol)};
}

double min_relative_entropy(const DensityMatrix& rho,
                            const DensityMatrix& sigma) {
  const double f = fidelity(rho, sigma);
  if (f <= 1e-14) return kInf;
  return -std::log2(std::min(f, 1.0));
}

double sandwiched_renyi_divergence(const DensityMatrix& rho,
                                   const DensityMatrix& sigma, double alpha) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatchError("sandwiched_renyi_divergence: dimensions differ");
  if (!(alpha > 0.0) || alpha == 1.0)
    throw Error("sandwiched_renyi_divergence: alpha must be positive and != 1");
  if (std::isinf(alpha)) return max_relative_entropy(rho, sigma);

  const EigResult se = eig_hermitian(sigma.matrix());
  if (alpha > 1.0 &&
      mass_outside_support(rho.matrix(), se) > kSupportMassTol) {
    std::ostringstream os;
    os << "sandwiched_renyi_divergence: support violation at alpha = "
       << alpha;
    throw SupportViolationError(os.str());
  }
  const double expo = (1.0 - alpha) / (2.0 * alpha);
  const ComplexMatrix w = support_power(se, expo);
  ComplexMatrix m = w * rho.matrix() * w;
  m = 0.5 * (m + m.adjoint());
  const EigResult me = eig_hermitian(m);
  double tr = 0.0;
  for (double lambda : me.eigenvalues)
    if (lambda > 0.0) tr += std::pow(lambda, alpha);
  if (tr <= 1e-300) return kInf;
  return std::log2(tr) / (alpha - 1.0);
}

double conditional_entropy(const DensityMatrix& rho_ab, int dim_a, int dim_b) {
  require_bipartite(rho_ab, dim_a, dim_b, "conditional_entropy");
  const DensityMatrix rho_b = partial_trace(rho_ab, dim_a, dim_b, Subsystem::B);
  return von_neumann_entropy(rho_ab) - von_neumann_entropy(rho_b);
}

SdpValue conditional_min_entropy(const DensityMatrix& rho_ab, int dim_a,
                                 int dim_b, const SdpOptions& options) {
  require_bipartite(rho_ab, dim_a, dim_b, "conditional_min_entropy");
  const HermitianBasis basis(dim_b);
  const int n = basis.size();

  SdpProblem p;
  p.decision_dim = n;
  p.objective.resize(n);
  for (int k = 0; k < n; ++k) p.objective[k] = basis.trace_coefficient(k);

  SdpBlock main;
  main.dim = 2 * dim_a * dim_b;
  main.constant = hermitian_embed(Complex(-1.0) * rho_ab.matrix());
  p.blocks.push_back(std::move(main));
  SdpBlock pos;
  pos.dim = 2 * dim_b;
  pos.constant = RealMatrix(2 * dim_b, 2 * dim_b);
  p.blocks.push_back(std::move(pos));

  const ComplexMatrix id_a = ComplexMatrix::identity(dim_a);
  for (int k = 0; k < n; ++k) {
    const ComplexMatrix e = basis.element(k);
    p.add_block_term(0, k, embed_entries(kron(id_a, e)));
    p.add_block_term(1, k, embed_entries(e));
  }
  p.initial_point.assign(n, 0.0);
  const double top = eig_hermitian(rho_ab.matrix()).eigenvalues.front();
  for (int i = 0; i < dim_b; ++i) p.initial_point[i] = top + 0.5;

  SdpSolution sol = solve(p, options);
  require_optimal(sol, "conditional_min_entropy");
  return {-std::log2(std::max(sol.optimal_value, 1e-300)), std::move(sol)};
}

SdpValue conditional_min_entropy(const ClassicalQuantumState& cq,
                                 const SdpOptions& options) {
  cq.validate();
  const int de = cq.env_dim();
  const int outcomes = cq.num_outcomes();
  const HermitianBasis basis(de);
  const int n = basis.size();

  SdpProblem p;
  p.decision_dim = n;
  p.objective.resize(n);
  for (int k = 0; k < n; ++k) p.objective[k] = basis.trace_coefficient(k);

  // one block per outcome: sigma_B - p_i rho_E^i >= 0, plus sigma_B >= 0
  double top = 0.0;
  for (int i = 0; i < outcomes; ++i) {
    SdpBlock b;
    b.dim = 2 * de;
    b.constant = hermitian_embed(Complex(-cq.probs[i]) *
                                 cq.conditional_states[i].matrix());
    p.blocks.push_back(std::move(b));
    top = std::max(top,
                   cq.probs[i] * eig_hermitian(cq.conditional_states[i].matrix())
                                     .eigenvalues.front());
  }
  SdpBlock pos;
  pos.dim = 2 * de;
  pos.constant = RealMatrix(2 * de, 2 * de);
  p.blocks.push_back(std::move(pos));

  for (int k = 0; k < n; ++k) {
    const ComplexMatrix e = basis.element(k);
    const auto entries = embed_entries(e);
    for (int i = 0; i <= outcomes; ++i) p.add_block_term(i, k, entries);
  }
  p.initial_point.assign(n, 0.0);
  for (int i = 0; i < de; ++i) p.initial_point[i] = top + 0.5;

  SdpSolution sol = solve(p, options);
  require_optimal(sol, "conditional_min_entropy");
  return {-std::log2(std::max(sol.optimal_value, 1e-300)), std::move(sol)};
}

SdpValue conditional_max_entropy(const DensityMatrix& rho_ab, int dim_a,
                                 int dim_b, const SdpOptions& options) {
  require_bipartite(rho_ab, dim_a, dim_b, "conditional_max_entropy");
  const int dab = dim_a * dim_b;
  const PurifiedState purification = purify_support(rho_ab);
  const int dc = purification.dim_e;
  const ComplexMatrix rho_abc =
      outer(purification.amplitudes, purification.amplitudes);

  const HermitianBasis basis(dab);
  const int n = basis.size() + 1;
  const int mu = basis.size();

  SdpProblem p;
  p.decision_dim = n;
  p.objective.assign(n, 0.0);
  p.objective[mu] = 1.0;

  SdpBlock ext;  // sigma_AB (x) I_C - rho_ABC >= 0
  ext.dim = 2 * dab * dc;
  ext.constant = hermitian_embed(Complex(-1.0) * rho_abc);
  p.blocks.push_back(std::move(ext));
  SdpBlock marg;  // mu I_B - Tr_A sigma_AB >= 0
  marg.dim = 2 * dim_b;
  marg.constant = RealMatrix(2 * dim_b, 2 * dim_b);
  p.blocks.push_back(std::move(marg));
  SdpBlock pos;  // sigma_AB >= 0
  pos.dim = 2 * dab;
  pos.constant = RealMatrix(2 * dab, 2 * dab);
  p.blocks.push_back(std::move(pos));
  SdpBlock mupos;  // mu >= 0
  mupos.dim = 1;
  mupos.constant = RealMatrix(1, 1);
  p.blocks.push_back(std::move(mupos));

  const ComplexMatrix id_c = ComplexMatrix::identity(dc);
  for (int k = 0; k < basis.size(); ++k) {
    const ComplexMatrix e = basis.element(k);
    p.add_block_term(0, k, embed_entries(kron(e, id_c)));
    p.add_block_term(1, k,
                     embed_entries(Complex(-1.0) * ptrace_first(e, dim_a, dim_b),
                                   1e-15));
    p.add_block_term(2, k, embed_entries(e));
  }
  p.add_block_term(1, mu, embed_entries(ComplexMatrix::identity(dim_b)));
  p.add_block_term(3, mu, {{0, 0, 1.0}});

  p.initial_point.assign(n, 0.0);
  for (int i = 0; i < dab; ++i) p.initial_point[i] = 1.5;
  p.initial_point[mu] = 1.5 * dim_a + 1.0;

  SdpSolution sol = solve(p, options);
  require_optimal(sol, "conditional_max_entropy");
  return {std::log2(std::max(sol.optimal_value, 1e-300)), std::move(sol)};
}

double conditional_zero_entropy(const ClassicalClassicalState& cc) {
  cc.validate();
  int largest = 0;
  for (int e = 0; e < cc.num_e; ++e) {
    int support = 0;
    for (int a = 0; a < cc.num_a; ++a)
      if (cc.at(a, e) > kZeroEntryTol) ++support;
    largest = std::max(largest, support);
  }
  return std::log2(static_cast<double>(std::max(largest, 1)));
}

}  // namespace qcoh
