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

#ifndef QCOH_SDP_HPP
#define QCOH_SDP_HPP

#include <vector>

#include "qcoh/linalg.hpp"

// Self-contained dense semidefinite programming over real symmetric cones:
//
//   minimize    c . x
//   subject to  S_k(x) = F0_k + sum_i x_i F_{k,i}  PSD   for each block k
//               G x = h
//
// solved by a primal-dual path-following interior-point method with
// Nesterov-Todd scaling and a Mehrotra-style adaptive centering parameter.
// All KKT solves are dense Cholesky factorizations; problem sizes in this
// project stay below a few hundred decision variables and block dimension
// ~128, where this is more than fast enough.
//
// Complex (Hermitian) linear matrix inequalities enter through the standard
// doubling embed H -> [[Re H, -Im H], [Im H, Re H]], which preserves
// semidefiniteness and doubles eigenvalue multiplicities.
//
// Feasibility contract: the problem generators in this project always supply
// a strictly feasible primal starting point (interior of every cone), so the
// solver does not attempt general infeasibility detection.

namespace qcoh {

// Dense row-major real matrix.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  static RealMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const double& at(int i, int j) const {
    return a_[static_cast<size_t>(i) * cols_ + j];
  }
  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

  double max_abs() const;
  bool is_symmetric(double tol) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

// [[Re h, -Im h], [Im h, Re h]]; h PSD iff the embedding is PSD, and the
// spectrum of h appears with doubled multiplicity. Throws NonHermitianError.
RealMatrix hermitian_embed(const ComplexMatrix& h);

// One nonzero of a symmetric coefficient matrix. Coefficient lists carry
// every nonzero explicitly (both (r,c) and (c,r) for off-diagonal values).
struct SparseEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

std::vector<SparseEntry> sparse_from_dense(const RealMatrix& m,
                                           double drop_tol = 0.0);
std::vector<SparseEntry> embed_entries(const ComplexMatrix& h,
                                       double drop_tol = 0.0);

struct BlockTerm {
  int var = 0;
  std::vector<SparseEntry> entries;
};

struct SdpBlock {
  int dim = 0;
  RealMatrix constant;          // F0, symmetric
  std::vector<BlockTerm> terms;
};

struct EqualityConstraint {
  std::vector<std::pair<int, double>> coefficients;
  double rhs = 0.0;
};

struct SdpProblem {
  int decision_dim = 0;
  std::vector<double> objective;
  std::vector<SdpBlock> blocks;
  std::vector<EqualityConstraint> equalities;
  // Strictly feasible starting point when available (empty: cold start).
  std::vector<double> initial_point;

  void add_block_term(int block, int var, std::vector<SparseEntry> entries);
  // Validates symmetry of constants and index ranges; throws Error.
  void validate() const;
};

struct SdpOptions {
  double tol = 1e-8;  // duality-gap target
  int max_iter = 200;
};

enum class SdpStatus { Optimal, MaxIterations, NumericalFailure };

struct SdpIterate {
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double gap = 0.0;        // Tr(S Z), nonnegative for interior iterates
  double primal_res = 0.0;
  double dual_res = 0.0;
};

struct SdpSolution {
  double optimal_value = 0.0;
  std::vector<double> decision;
  double duality_gap = 0.0;  // normalized |primal - dual| certificate
  int iterations = 0;
  SdpStatus status = SdpStatus::NumericalFailure;
  std::vector<SdpIterate> history;
};

SdpSolution solve(const SdpProblem& problem, const SdpOptions& options = {});

// Orthonormal-coefficient basis of d x d Hermitian matrices: first the d
// diagonal units, then (real, imaginary) unit pairs for each i<j in row-major
// order. A Hermitian matrix variable becomes d*d consecutive real decision
// variables.
class HermitianBasis {
 public:
  explicit HermitianBasis(int dim);
  int dim() const { return dim_; }
  int size() const { return dim_ * dim_; }
  ComplexMatrix element(int k) const;
  ComplexMatrix assemble(const std::vector<double>& x, int offset = 0) const;
  // Tr(E_k): 1 on diagonal elements, 0 otherwise.
  double trace_coefficient(int k) const { return k < dim_ ? 1.0 : 0.0; }

 private:
  int dim_;
  std::vector<std::pair<int, int>> pair_of_;  // off-diagonal (i, j), i < j
};

}  // namespace qcoh

#endif  // QCOH_SDP_HPP
