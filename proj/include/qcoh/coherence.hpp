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

#ifndef QCOH_COHERENCE_HPP
#define QCOH_COHERENCE_HPP

#include <cstdint>
#include <optional>

#include "qcoh/entropies.hpp"
#include "qcoh/linalg.hpp"
#include "qcoh/sdp.hpp"

// Coherence measures of a state with respect to the standard computational
// basis. The distance-based measures (relative entropy of coherence,
// geometric coherence, min/max-entropy coherence) are computed along two
// independent routes and cross-checked:
//
//   (a) direct optimization over the incoherent (diagonal) states, and
//   (b) a conditional entropy of the classical-quantum state obtained by
//       measuring a purification in the incoherent basis.
//
// The convex-roof measures (coherence of formation, the zero-entropy
// monotone) are exact for qubits, pure and diagonal states; otherwise a
// decomposition search returns certified *upper bounds*.

namespace qcoh {

// The dephasing basis is the standard basis of C^d; the spec of a basis is
// just the dimension.
struct DephasingBasisSpec {
  int dim = 0;
};

// Zero all off-diagonal entries.
DensityMatrix dephase(const DensityMatrix& rho);

// V = sum_i |i>_X (x) |i><i| : C^d -> C^{d^2}, V^dag V = I. Composed with
// a partial trace over the middle system it realizes the dephasing channel.
ComplexMatrix dephasing_isometry(int dim);
ComplexMatrix dephasing_isometry(const DephasingBasisSpec& basis);

// Measure a purification of rho in the incoherent basis: outcome
// probabilities are the diagonal of rho, conditional environment states are
// the projected purification. Zero-probability outcomes are dropped.
ClassicalQuantumState build_cq_state(const DensityMatrix& rho);
ClassicalQuantumState build_cq_state(const PurifiedState& psi);

// C_r = S(dephase(rho)) - S(rho), closed form.
double relative_entropy_coherence(const DensityMatrix& rho);

struct MeasureOptions {
  SdpOptions sdp{};
};

// Distance-based measure computed along both routes. `value` carries the
// conditional-entropy route; both routes are kept for diagnostics and the
// report flags them when they drift apart.
struct RouteValue {
  double value = 0.0;
  double direct_route = 0.0;
  double conditional_route = 0.0;
  SdpSolution direct_solution;
  SdpSolution conditional_solution;

  double disagreement() const {
    return direct_route > conditional_route
               ? direct_route - conditional_route
               : conditional_route - direct_route;
  }
};

// C_min = min over incoherent delta of D_min(rho||delta).
// Route (a): fidelity-maximization SDP over diagonal states, compressed to
// the support of rho so the program keeps a strictly feasible interior.
// Route (b): H_min(X_A|E) of the measured purification.
RouteValue min_entropy_coherence(const DensityMatrix& rho,
                                 const MeasureOptions& options = {});

// C_max = min over incoherent delta of D_max(rho||delta).
// Route (a): minimize Tr D subject to diag(D) >= rho (the unnormalized
// diagonal substitution linearizes lambda * delta), then take log2.
// Route (b): H_max(X_A|E); realized by the explicit fidelity program for
// small instances and through the pure-state duality
// H_max(X_A|E) = -H_min(X_A|A) on V rho V^dag for larger ones.
RouteValue max_entropy_coherence(const DensityMatrix& rho,
                                 const MeasureOptions& options = {});

// C_g = 1 - 2^{-C_min}, by the identity connecting the two measures.
double geometric_coherence(const DensityMatrix& rho,
                           const MeasureOptions& options = {});

// rho = sum_j weights[j] |states[j]><states[j]|
struct ConvexRoofDecomposition {
  std::vector<double> weights;
  std::vector<std::vector<Complex>> states;

  ComplexMatrix mixture() const;
  // max |mixture - rho| must stay below tol (1e-8 in the tests)
  double reconstruction_error(const DensityMatrix& rho) const;
};

struct RoofOptions {
  int restarts = 64;      // random starts, spread over decomposition sizes
  int max_size = 0;       // largest decomposition size; 0 means d^2
  double tol = 1e-7;      // descent convergence threshold
  int max_sweeps = 40;    // coordinate-descent sweeps per start
  uint64_t seed = 0x9e3779b97f4a7c15ull;
};

// Shared decomposition enumeration behind the convex-roof measures. Both
// objectives are evaluated on every candidate, so the returned upper bounds
// always satisfy formation_upper <= rank_upper.
struct RoofSearchResult {
  double formation_upper = 0.0;  // min of sum_j p_j S(dephase(psi_j))
  double rank_upper = 0.0;       // min of max_j log2 T_j
  ConvexRoofDecomposition best_formation;
  ConvexRoofDecomposition best_rank;
};
RoofSearchResult convex_roof_search(const DensityMatrix& rho,
                                    const RoofOptions& options = {});

struct HeuristicValue {
  double value = 0.0;
  bool exact = false;  // true only when the decomposition is forced
                       // (qubits, pure states, diagonal states)
};

// C_f: exact closed form for qubits (binary entropy of
// (1 + sqrt(1 - 4 |rho_01|^2)) / 2), exact for pure and diagonal states,
// otherwise the search upper bound.
HeuristicValue coherence_of_formation(const DensityMatrix& rho,
                                      const RoofOptions& options = {});

// C_0: log2 of the smallest achievable maximal coherence rank. Exact qubit
// dichotomy (0 iff diagonal, else 1); otherwise the search upper bound.
// Amplitudes below 1e-8 in magnitude do not count towards the rank T_j; the
// measure is discontinuous, so results sit on that documented threshold.
HeuristicValue zero_entropy_coherence(const DensityMatrix& rho,
                                      const RoofOptions& options = {});

enum class AdversaryEntropy { VonNeumann, Zero };

// Best classical adversary: minimum over sampled measurement strategies on
// the purifying system of H(X_A|X_E) (VonNeumann) or H_0(X_A|X_E) (Zero).
// Shares the decomposition enumeration with the convex-roof measures.
double classical_adversary_entropy(const DensityMatrix& rho,
                                   AdversaryEntropy kind, int strategy_budget,
                                   uint64_t seed = 0x9e3779b97f4a7c15ull);

// p_guess(X_A|E) = 2^{-H_min(X_A|E)}: best probability of guessing the
// register from the quantum side information.
double guessing_probability(const ClassicalQuantumState& cq,
                            const MeasureOptions& options = {});

// p_secr(X_A|E) = |X_A| max_sigma F(rho_{X_A E}, I/|X_A| (x) sigma_E)
//              = 2^{H_max(X_A|E)}: distance of the register from an ideal
// secret key that is uniform and independent of the adversary.
double secrecy_parameter(const ClassicalQuantumState& cq,
                         const MeasureOptions& options = {});

struct ReportOptions {
  MeasureOptions measure{};
  RoofOptions roof{};
  bool with_formation = false;  // include C_f
  bool with_zero = false;       // include C_0
};

struct CoherenceReport {
  double c_r = 0.0;
  double c_g = 0.0;
  double c_min = 0.0;
  double c_max = 0.0;
  std::optional<HeuristicValue> c_f;
  std::optional<HeuristicValue> c_0;
  double route_disagreement = 0.0;  // max over measures of |route a - route b|
  bool flagged = false;             // disagreement above 1e-5
  RouteValue min_entropy;           // full solver diagnostics
  RouteValue max_entropy;
};

CoherenceReport compute_report(const DensityMatrix& rho,
                               const ReportOptions& options = {});

}  // namespace qcoh

#endif  // QCOH_COHERENCE_HPP
