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

#ifndef QCOH_LINALG_HPP
#define QCOH_LINALG_HPP

#include <complex>
#include <vector>

#include "qcoh/errors.hpp"

namespace qcoh {

using Complex = std::complex<double>;

// Dense row-major complex matrix. Value type, immutable-by-convention once
// handed to the quantum layer; all operations below return fresh matrices.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  static ComplexMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Complex& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Complex& at(int i, int j) const {
    return a_[static_cast<size_t>(i) * cols_ + j];
  }

  const std::vector<Complex>& entries() const { return a_; }
  std::vector<Complex>& entries() { return a_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double max_abs() const;
  bool is_hermitian(double tol) const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    a += b;
    return a;
  }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    a -= b;
    return a;
  }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) {
    a *= s;
    return a;
  }
  friend ComplexMatrix operator*(const ComplexMatrix& a,
                                 const ComplexMatrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> a_;
};

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Tensor (Kronecker) product; dimensions multiply.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// |v><w| for amplitude vectors.
ComplexMatrix outer(const std::vector<Complex>& v,
                    const std::vector<Complex>& w);

enum class Subsystem { A, B };

// Validated quantum state: Hermitian within 1e-12, unit trace within 1e-10,
// positive semidefinite within -1e-10 on the smallest eigenvalue.
class DensityMatrix {
 public:
  // Throws ValidationError (message names the offending entry) when the
  // matrix fails a state invariant.
  static DensityMatrix from_matrix(ComplexMatrix m);

  static DensityMatrix pure(const std::vector<Complex>& amplitudes);
  static DensityMatrix diagonal(const std::vector<double>& populations);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return dim_; }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  DensityMatrix(int dim, ComplexMatrix m) : dim_(dim), m_(std::move(m)) {}
  int dim_ = 0;
  ComplexMatrix m_;
};

// Bipartite pure state |psi>_AE with amplitudes[a * dim_e + e].
struct PurifiedState {
  int dim_a = 0;
  int dim_e = 0;
  std::vector<Complex> amplitudes;

  DensityMatrix joint_state() const;
};

struct EigResult {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // columns, unitary: m = U diag(w) U^dag
};

// Cyclic Jacobi eigendecomposition for Hermitian matrices. Robust at the
// dimensions used here (<= ~128). Throws NonHermitianError above tolerance
// 1e-12 on max |m_ij - conj(m_ji)|.
EigResult eig_hermitian(const ComplexMatrix& m);

// Principal square root of a PSD Hermitian matrix. Eigenvalues below -1e-8
// raise NotPsdError; values in [-1e-8, 1e-10) are treated as numerical noise
// and clipped to zero.
ComplexMatrix matrix_sqrt(const ComplexMatrix& m);

// Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const ComplexMatrix& m);

// Reduce a state on A (x) B to the kept subsystem.
DensityMatrix partial_trace(const DensityMatrix& state, int dim_a, int dim_b,
                            Subsystem keep);

// Trace out the middle factor of a three-fold tensor product operator.
ComplexMatrix partial_trace_middle(const ComplexMatrix& m, int d1, int d2,
                                   int d3);

// Canonical purification from the eigendecomposition,
// |psi> = sum_i sqrt(lambda_i) |u_i>_A |i>_E, with dim_e fixed at dim_a.
PurifiedState purify(const DensityMatrix& rho);

// Same construction with the environment truncated to the support of rho
// (dim_e = rank). Keeps downstream semidefinite programs small; any two
// purifications are related by an isometry on E, so derived quantities do
// not depend on the choice.
PurifiedState purify_support(const DensityMatrix& rho);

}  // namespace qcoh

#endif  // QCOH_LINALG_HPP
