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

#ifndef QCOH_ENTROPIES_HPP
#define QCOH_ENTROPIES_HPP

#include <vector>

#include "qcoh/linalg.hpp"
#include "qcoh/sdp.hpp"

// Entropic functionals on density matrices, all in bits (log base 2).
// Conditional min/max entropies are computed by semidefinite programming;
// each SDP-backed value returns its solver certificate alongside the number.

namespace qcoh {

// sum_i p_i |i><i| (x) rho_E^i: classical register X_A with quantum side
// information E. Outcomes with zero probability are not stored.
struct ClassicalQuantumState {
  std::vector<double> probs;
  std::vector<DensityMatrix> conditional_states;

  int num_outcomes() const { return static_cast<int>(probs.size()); }
  int env_dim() const {
    return conditional_states.empty() ? 1 : conditional_states[0].dim();
  }
  // Block-diagonal joint state rho_{X_A E}.
  DensityMatrix joint_state() const;
  void validate() const;  // throws ValidationError
};

// Joint distribution of two classical registers; rows index X_A outcomes.
struct ClassicalClassicalState {
  int num_a = 0;
  int num_e = 0;
  std::vector<double> joint;  // row-major, size num_a * num_e

  double at(int a, int e) const { return joint[static_cast<size_t>(a) * num_e + e]; }
  void validate() const;
};

double von_neumann_entropy(const DensityMatrix& rho);

// S(rho||sigma); +infinity when rho has more than 1e-9 eigenvalue mass
// outside the support of sigma.
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

// D_max(rho||sigma) = log2 min { lambda : rho <= lambda sigma } via the
// generalized-eigenvalue closed form; +infinity on support violation.
double max_relative_entropy(const DensityMatrix& rho,
                            const DensityMatrix& sigma);

// Same quantity through the explicit SDP; retained as a cross-validation
// route against the closed form.
struct SdpValue {
  double value = 0.0;
  SdpSolution solution;
};
SdpValue max_relative_entropy_sdp(const DensityMatrix& rho,
                                  const DensityMatrix& sigma,
                                  const SdpOptions& options = {});

// D_min(rho||sigma) = -log2 F(rho, sigma).
double min_relative_entropy(const DensityMatrix& rho,
                            const DensityMatrix& sigma);

// Sandwiched alpha-Renyi divergence, alpha > 0, alpha != 1. Monotone
// nondecreasing in alpha; alpha -> 1/2 gives D_min, alpha -> infinity gives
// D_max (pass std::numeric_limits<double>::infinity()). For finite alpha > 1
// a support violation raises SupportViolationError.
double sandwiched_renyi_divergence(const DensityMatrix& rho,
                                   const DensityMatrix& sigma, double alpha);

// H(A|B) = S(AB) - S(B); may be negative.
double conditional_entropy(const DensityMatrix& rho_ab, int dim_a, int dim_b);

// H_min(A|B) = -log2 min { Tr sigma_B : I_A (x) sigma_B >= rho_AB }.
SdpValue conditional_min_entropy(const DensityMatrix& rho_ab, int dim_a,
                                 int dim_b, const SdpOptions& options = {});
// Classical-quantum specialization; the constraint splits into one small
// block per outcome.
SdpValue conditional_min_entropy(const ClassicalQuantumState& cq,
                                 const SdpOptions& options = {});

// H_max(A|B) = log2 of the optimum of the fidelity-maximization program
//   min mu  s.t.  mu I_B >= Tr_A sigma_AB,  sigma_AB (x) I_C >= rho_ABC,
//                 sigma_AB >= 0, mu >= 0
// with rho_ABC the canonical support-truncated purification of rho_AB.
SdpValue conditional_max_entropy(const DensityMatrix& rho_ab, int dim_a,
                                 int dim_b, const SdpOptions& options = {});

// H_0(A|B) of a classical-classical state: max over X_E outcomes of
// log2 (number of X_A symbols with joint mass above 1e-16).
double conditional_zero_entropy(const ClassicalClassicalState& cc);

}  // namespace qcoh

#endif  // QCOH_ENTROPIES_HPP
