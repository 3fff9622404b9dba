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

#include "qcoh/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qcoh {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-10;
constexpr double kPsdTol = 1e-10;
constexpr double kEigClipError = -1e-8;
constexpr double kEigClipZero = 1e-10;

void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << who << ": matrix must be square and nonempty, got " << m.rows()
       << "x" << m.cols();
    throw DimensionMismatchError(os.str());
  }
}

void require_hermitian(const ComplexMatrix& m, const char* who) {
  require_square(m, who);
  if (!m.is_hermitian(kHermTol)) {
    std::ostringstream os;
    os << who << ": matrix is not Hermitian within " << kHermTol;
    throw NonHermitianError(os.str());
  }
}

}  // namespace

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(j, i) = std::conj(at(i, j));
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) t += at(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : a_) m = std::max(m, std::abs(z));
  return m;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i; j < cols_; ++j)
      if (std::abs(at(i, j) - std::conj(at(j, i))) > tol) return false;
  return true;
}

bool ComplexMatrix::all_finite() const {
  for (const auto& z : a_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : a_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionMismatchError("matrix product: inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const Complex aik = a.at(i, k);
      if (aik == Complex(0.0)) continue;
      for (int j = 0; j < b.cols(); ++j) out.at(i, j) += aik * b.at(k, j);
    }
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a.at(i, j) - b.at(i, j)));
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const Complex aij = a.at(i, j);
      if (aij == Complex(0.0)) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          out.at(i * b.rows() + k, j * b.cols() + l) = aij * b.at(k, l);
    }
  return out;
}

ComplexMatrix outer(const std::vector<Complex>& v,
                    const std::vector<Complex>& w) {
  ComplexMatrix out(static_cast<int>(v.size()), static_cast<int>(w.size()));
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = 0; j < w.size(); ++j)
      out.at(static_cast<int>(i), static_cast<int>(j)) = v[i] * std::conj(w[j]);
  return out;
}

// ---------------------------------------------------------------------------
// Eigendecomposition: cyclic Jacobi with complex rotations.

EigResult eig_hermitian(const ComplexMatrix& m) {
  require_hermitian(m, "eig_hermitian");
  const int n = m.rows();
  ComplexMatrix a = m;
  // exact Hermitization removes the sub-tolerance asymmetry of the input
  for (int i = 0; i < n; ++i) {
    a.at(i, i) = Complex(a.at(i, i).real(), 0.0);
    for (int j = i + 1; j < n; ++j) {
      const Complex v = 0.5 * (a.at(i, j) + std::conj(a.at(j, i)));
      a.at(i, j) = v;
      a.at(j, i) = std::conj(v);
    }
  }
  ComplexMatrix u = ComplexMatrix::identity(n);

  const double scale = std::max(1e-300, a.max_abs());
  const double stop = 1e-15 * scale;
  const int max_sweeps = 100;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(a.at(p, q)));
    if (off <= stop) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Complex apq = a.at(p, q);
        const double r = std::abs(apq);
        if (r <= stop * 1e-2) continue;
        const Complex w = apq / r;  // phase factor
        const double app = a.at(p, p).real();
        const double aqq = a.at(q, q).real();
        // small-angle choice keeps the cyclic sweep convergent
        const double tau = (app - aqq) / (2.0 * r);
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // columns: A <- A V with V(p,p)=c, V(p,q)=-s w, V(q,p)=s conj(w)
        for (int k = 0; k < n; ++k) {
          const Complex akp = a.at(k, p);
          const Complex akq = a.at(k, q);
          a.at(k, p) = c * akp + s * std::conj(w) * akq;
          a.at(k, q) = -s * w * akp + c * akq;
        }
        // rows: A <- V^dag A
        for (int k = 0; k < n; ++k) {
          const Complex apk = a.at(p, k);
          const Complex aqk = a.at(q, k);
          a.at(p, k) = c * apk + s * w * aqk;
          a.at(q, k) = -s * std::conj(w) * apk + c * aqk;
        }
        // accumulate eigenvectors: U <- U V
        for (int k = 0; k < n; ++k) {
          const Complex ukp = u.at(k, p);
          const Complex ukq = u.at(k, q);
          u.at(k, p) = c * ukp + s * std::conj(w) * ukq;
          u.at(k, q) = -s * w * ukp + c * ukq;
        }
        a.at(p, q) = 0.0;
        a.at(q, p) = 0.0;
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = a.at(i, i).real();
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return diag[x] > diag[y]; });

  EigResult res;
  res.eigenvalues.resize(n);
  res.eigenvectors = ComplexMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    res.eigenvalues[j] = diag[order[j]];
    for (int i = 0; i < n; ++i) res.eigenvectors.at(i, j) = u.at(i, order[j]);
  }
  return res;
}

namespace {

// Clip an eigenvalue for sqrt/log-type functions per the tolerance contract.
double clip_psd_eigenvalue(double lambda, const char* who) {
  if (lambda < kEigClipError) {
    std::ostringstream os;
    os << who << ": eigenvalue " << lambda << " below PSD tolerance "
       << kEigClipError;
    throw NotPsdError(os.str());
  }
  return lambda < kEigClipZero ? 0.0 : lambda;
}

}  // namespace

ComplexMatrix matrix_sqrt(const ComplexMatrix& m) {
  const EigResult eig = eig_hermitian(m);
  const int n = m.rows();
  ComplexMatrix out(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = std::sqrt(clip_psd_eigenvalue(eig.eigenvalues[k],
                                                   "matrix_sqrt"));
    if (s == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const Complex ui = eig.eigenvectors.at(i, k);
      for (int j = 0; j < n; ++j)
        out.at(i, j) += s * ui * std::conj(eig.eigenvectors.at(j, k));
    }
  }
  return out;
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatchError("fidelity: state dimensions differ");
  const ComplexMatrix sr = matrix_sqrt(rho.matrix());
  ComplexMatrix inner = sr * sigma.matrix() * sr;
  // re-Hermitize before the eigensolve; products drift at machine level
  inner = 0.5 * (inner + inner.adjoint());
  const EigResult eig = eig_hermitian(inner);
  double root = 0.0;
  for (double lambda : eig.eigenvalues)
    root += std::sqrt(std::max(lambda, 0.0));
  return root * root;
}

double trace_norm(const ComplexMatrix& m) {
  const EigResult eig = eig_hermitian(m);
  double sum = 0.0;
  for (double lambda : eig.eigenvalues) sum += std::abs(lambda);
  return sum;
}

DensityMatrix partial_trace(const DensityMatrix& state, int dim_a, int dim_b,
                            Subsystem keep) {
  if (state.dim() != dim_a * dim_b)
    throw DimensionMismatchError(
        "partial_trace: state dimension does not factor as dim_a * dim_b");
  const ComplexMatrix& m = state.matrix();
  if (keep == Subsystem::A) {
    ComplexMatrix out(dim_a, dim_a);
    for (int a = 0; a < dim_a; ++a)
      for (int a2 = 0; a2 < dim_a; ++a2)
        for (int b = 0; b < dim_b; ++b)
          out.at(a, a2) += m.at(a * dim_b + b, a2 * dim_b + b);
    return DensityMatrix::from_matrix(std::move(out));
  }
  ComplexMatrix out(dim_b, dim_b);
  for (int b = 0; b < dim_b; ++b)
    for (int b2 = 0; b2 < dim_b; ++b2)
      for (int a = 0; a < dim_a; ++a)
        out.at(b, b2) += m.at(a * dim_b + b, a * dim_b + b2);
  return DensityMatrix::from_matrix(std::move(out));
}

ComplexMatrix partial_trace_middle(const ComplexMatrix& m, int d1, int d2,
                                   int d3) {
  if (m.rows() != d1 * d2 * d3 || m.cols() != d1 * d2 * d3)
    throw DimensionMismatchError("partial_trace_middle: dimension mismatch");
  ComplexMatrix out(d1 * d3, d1 * d3);
  for (int i = 0; i < d1; ++i)
    for (int k = 0; k < d3; ++k)
      for (int i2 = 0; i2 < d1; ++i2)
        for (int k2 = 0; k2 < d3; ++k2)
          for (int j = 0; j < d2; ++j)
            out.at(i * d3 + k, i2 * d3 + k2) +=
                m.at((i * d2 + j) * d3 + k, (i2 * d2 + j) * d3 + k2);
  return out;
}

namespace {

PurifiedState purify_impl(const DensityMatrix& rho, bool truncate) {
  const EigResult eig = eig_hermitian(rho.matrix());
  const int d = rho.dim();
  int rank = d;
  if (truncate) {
    rank = 0;
    while (rank < d && eig.eigenvalues[rank] > 1e-12) ++rank;
    rank = std::max(rank, 1);
  }
  PurifiedState psi;
  psi.dim_a = d;
  psi.dim_e = rank;
  psi.amplitudes.assign(static_cast<size_t>(d) * rank, 0.0);
  for (int i = 0; i < rank; ++i) {
    const double s = std::sqrt(std::max(eig.eigenvalues[i], 0.0));
    if (s == 0.0) continue;
    for (int a = 0; a < d; ++a)
      psi.amplitudes[static_cast<size_t>(a) * rank + i] =
          s * eig.eigenvectors.at(a, i);
  }
  return psi;
}

}  // namespace

PurifiedState purify(const DensityMatrix& rho) {
  return purify_impl(rho, /*truncate=*/false);
}

PurifiedState purify_support(const DensityMatrix& rho) {
  return purify_impl(rho, /*truncate=*/true);
}

DensityMatrix PurifiedState::joint_state() const {
  return DensityMatrix::pure(amplitudes);
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw ValidationError("density matrix must be square and nonempty");
  if (!m.all_finite())
    throw ValidationError("density matrix has non-finite entries");
  const int d = m.rows();
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const double dev = std::abs(m.at(i, j) - std::conj(m.at(j, i)));
      if (dev > kHermTol) {
        std::ostringstream os;
        os << "density matrix not Hermitian: entry (" << i << "," << j
           << ") vs (" << j << "," << i << ") differ by " << dev;
        throw ValidationError(os.str());
      }
    }
  }
  const double trace_dev = std::abs(m.trace() - Complex(1.0));
  if (trace_dev > kTraceTol) {
    std::ostringstream os;
    os << "density matrix trace deviates from 1 by " << trace_dev;
    throw ValidationError(os.str());
  }
  // PSD check via the eigensolver (input already Hermitian within tolerance)
  const EigResult eig = eig_hermitian(m);
  const double lambda_min = eig.eigenvalues.back();
  if (lambda_min < -kPsdTol) {
    std::ostringstream os;
    os << "density matrix not PSD: smallest eigenvalue " << lambda_min;
    throw ValidationError(os.str());
  }
  return DensityMatrix(d, std::move(m));
}

DensityMatrix DensityMatrix::pure(const std::vector<Complex>& amplitudes) {
  double norm2 = 0.0;
  for (const auto& z : amplitudes) norm2 += std::norm(z);
  if (amplitudes.empty() || std::abs(norm2 - 1.0) > 1e-9)
    throw ValidationError("pure state amplitudes are not normalized");
  return from_matrix(outer(amplitudes, amplitudes));
}

DensityMatrix DensityMatrix::diagonal(const std::vector<double>& populations) {
  const int d = static_cast<int>(populations.size());
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i) m.at(i, i) = populations[i];
  return from_matrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return diagonal(std::vector<double>(dim, 1.0 / dim));
}

}  // namespace qcoh
