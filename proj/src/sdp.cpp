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

#include "qcoh/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>

namespace qcoh {

namespace {

// ---------------------------------------------------------------------------
// Small dense real-symmetric kernel used only by the solver.

RealMatrix transpose(const RealMatrix& a) {
  RealMatrix out(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.at(j, i) = a.at(i, j);
  return out;
}

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a.at(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) out.at(i, j) += aik * b.at(k, j);
    }
  return out;
}

void symmetrize(RealMatrix& a) {
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) {
      const double v = 0.5 * (a.at(i, j) + a.at(j, i));
      a.at(i, j) = v;
      a.at(j, i) = v;
    }
}

// Tr(A B) for symmetric A, B.
double trace_product(const RealMatrix& a, const RealMatrix& b) {
  double t = 0.0;
  const auto& x = a.data();
  const auto& y = b.data();
  for (size_t i = 0; i < x.size(); ++i) t += x[i] * y[i];
  return t;
}

// Lower-triangular Cholesky; false when a pivot is not positive.
bool cholesky(const RealMatrix& a, RealMatrix& l) {
  const int n = a.rows();
  l = RealMatrix(n, n);
  for (int j = 0; j < n; ++j) {
    double d = a.at(j, j);
    for (int k = 0; k < j; ++k) d -= l.at(j, k) * l.at(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    const double ljj = std::sqrt(d);
    l.at(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = a.at(i, j);
      for (int k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
      l.at(i, j) = s / ljj;
    }
  }
  return true;
}

// B <- L^-1 B
void solve_lower_inplace(const RealMatrix& l, RealMatrix& b) {
  const int n = l.rows();
  for (int c = 0; c < b.cols(); ++c) {
    for (int i = 0; i < n; ++i) {
      double s = b.at(i, c);
      for (int k = 0; k < i; ++k) s -= l.at(i, k) * b.at(k, c);
      b.at(i, c) = s / l.at(i, i);
    }
  }
}

// B <- L^-T B
void solve_lower_transposed_inplace(const RealMatrix& l, RealMatrix& b) {
  const int n = l.rows();
  for (int c = 0; c < b.cols(); ++c) {
    for (int i = n - 1; i >= 0; --i) {
      double s = b.at(i, c);
      for (int k = i + 1; k < n; ++k) s -= l.at(k, i) * b.at(k, c);
      b.at(i, c) = s / l.at(i, i);
    }
  }
}

void solve_lower_vec(const RealMatrix& l, std::vector<double>& b) {
  const int n = l.rows();
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l.at(i, k) * b[k];
    b[i] = s / l.at(i, i);
  }
}

void solve_lower_transposed_vec(const RealMatrix& l, std::vector<double>& b) {
  const int n = l.rows();
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= l.at(k, i) * b[k];
    b[i] = s / l.at(i, i);
  }
}

// Full eigendecomposition of a symmetric matrix (cyclic Jacobi), eigenvalues
// ascending. Workhorse for NT scalings and step lengths; dims <= ~128.
void sym_eig(const RealMatrix& a_in, std::vector<double>& w, RealMatrix& v) {
  const int n = a_in.rows();
  RealMatrix a = a_in;
  symmetrize(a);
  v = RealMatrix::identity(n);
  const double scale = std::max(1e-300, a.max_abs());
  const double stop = 1e-15 * scale;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q)
        off = std::max(off, std::abs(a.at(p, q)));
    if (off <= stop) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (std::abs(apq) <= stop * 1e-2) continue;
        const double tau = (a.at(p, p) - a.at(q, q)) / (2.0 * apq);
        double t;
        if (tau >= 0.0)
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a.at(k, p);
          const double akq = a.at(k, q);
          a.at(k, p) = c * akp + s * akq;
          a.at(k, q) = -s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a.at(p, k);
          const double aqk = a.at(q, k);
          a.at(p, k) = c * apk + s * aqk;
          a.at(q, k) = -s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v.at(k, p);
          const double vkq = v.at(k, q);
          v.at(k, p) = c * vkp + s * vkq;
          v.at(k, q) = -s * vkp + c * vkq;
        }
        a.at(p, q) = 0.0;
        a.at(q, p) = 0.0;
      }
    }
  }
  w.resize(n);
  for (int i = 0; i < n; ++i) w[i] = a.at(i, i);
  // ascending order
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return w[x] < w[y]; });
  std::vector<double> w2(n);
  RealMatrix v2(n, n);
  for (int j = 0; j < n; ++j) {
    w2[j] = w[order[j]];
    for (int i = 0; i < n; ++i) v2.at(i, j) = v.at(i, order[j]);
  }
  w = std::move(w2);
  v = std::move(v2);
}

double min_eigenvalue(const RealMatrix& a) {
  std::vector<double> w;
  RealMatrix v;
  sym_eig(a, w, v);
  return w.front();
}


}  // namespace

// ---------------------------------------------------------------------------
// Public small pieces.

RealMatrix RealMatrix::identity(int n) {
  RealMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

double RealMatrix::max_abs() const {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::abs(x));
  return m;
}

bool RealMatrix::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (std::abs(at(i, j) - at(j, i)) > tol) return false;
  return true;
}

RealMatrix hermitian_embed(const ComplexMatrix& h) {
  if (h.rows() != h.cols())
    throw DimensionMismatchError("hermitian_embed: matrix must be square");
  if (!h.is_hermitian(1e-12))
    throw NonHermitianError("hermitian_embed: input not Hermitian within 1e-12");
  const int n = h.rows();
  RealMatrix out(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex z = h.at(i, j);
      out.at(i, j) = z.real();
      out.at(n + i, n + j) = z.real();
      out.at(i, n + j) = -z.imag();
      out.at(n + i, j) = z.imag();
    }
  return out;
}

std::vector<SparseEntry> sparse_from_dense(const RealMatrix& m,
                                           double drop_tol) {
  std::vector<SparseEntry> out;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (std::abs(m.at(i, j)) > drop_tol)
        out.push_back({i, j, m.at(i, j)});
  return out;
}

std::vector<SparseEntry> embed_entries(const ComplexMatrix& h,
                                       double drop_tol) {
  const int n = h.rows();
  std::vector<SparseEntry> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Complex z = h.at(i, j);
      if (std::abs(z.real()) > drop_tol) {
        out.push_back({i, j, z.real()});
        out.push_back({n + i, n + j, z.real()});
      }
      if (std::abs(z.imag()) > drop_tol) {
        out.push_back({i, n + j, -z.imag()});
        out.push_back({n + i, j, z.imag()});
      }
    }
  return out;
}

void SdpProblem::add_block_term(int block, int var,
                                std::vector<SparseEntry> entries) {
  if (entries.empty()) return;
  blocks[block].terms.push_back({var, std::move(entries)});
}

void SdpProblem::validate() const {
  if (decision_dim <= 0 || static_cast<int>(objective.size()) != decision_dim)
    throw Error("sdp: objective size does not match decision_dim");
  if (blocks.empty()) throw Error("sdp: problem has no PSD blocks");
  for (const auto& b : blocks) {
    if (b.dim <= 0 || b.constant.rows() != b.dim || b.constant.cols() != b.dim)
      throw Error("sdp: block constant has wrong shape");
    if (!b.constant.is_symmetric(1e-12))
      throw Error("sdp: block constant is not symmetric within 1e-12");
    for (const auto& t : b.terms) {
      if (t.var < 0 || t.var >= decision_dim)
        throw Error("sdp: term variable index out of range");
      for (const auto& e : t.entries)
        if (e.row < 0 || e.row >= b.dim || e.col < 0 || e.col >= b.dim)
          throw Error("sdp: coefficient entry out of block range");
    }
  }
  for (const auto& eq : equalities)
    for (const auto& [i, v] : eq.coefficients)
      if (i < 0 || i >= decision_dim)
        throw Error("sdp: equality variable index out of range");
}

// ---------------------------------------------------------------------------
// HermitianBasis

HermitianBasis::HermitianBasis(int dim) : dim_(dim) {
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) pair_of_.push_back({i, j});
}

ComplexMatrix HermitianBasis::element(int k) const {
  ComplexMatrix e(dim_, dim_);
  if (k < dim_) {
    e.at(k, k) = 1.0;
  } else {
    const int p = (k - dim_) / 2;
    const auto [i, j] = pair_of_[p];
    if ((k - dim_) % 2 == 0) {
      e.at(i, j) = 1.0;
      e.at(j, i) = 1.0;
    } else {
      e.at(i, j) = Complex(0.0, 1.0);
      e.at(j, i) = Complex(0.0, -1.0);
    }
  }
  return e;
}

ComplexMatrix HermitianBasis::assemble(const std::vector<double>& x,
                                       int offset) const {
  ComplexMatrix m(dim_, dim_);
  for (int i = 0; i < dim_; ++i) m.at(i, i) = x[offset + i];
  int k = dim_;
  for (const auto& [i, j] : pair_of_) {
    const Complex z(x[offset + k], x[offset + k + 1]);
    m.at(i, j) = z;
    m.at(j, i) = std::conj(z);
    k += 2;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Interior-point solver.

namespace {

struct Workspace {
  std::vector<RealMatrix> S, Z, Rp, Winv, Sinv;
  std::vector<RealMatrix> dS, dZ;
};

RealMatrix constraint_value(const SdpBlock& b, const std::vector<double>& x) {
  RealMatrix s = b.constant;
  for (const auto& t : b.terms) {
    const double xi = x[t.var];
    if (xi == 0.0) continue;
    for (const auto& e : t.entries) s.at(e.row, e.col) += xi * e.value;
  }
  return s;
}

double sparse_dot(const std::vector<SparseEntry>& f, const RealMatrix& t) {
  double s = 0.0;
  for (const auto& e : f) s += e.value * t.at(e.col, e.row);
  return s;
}

// Regularized symmetric solve through Cholesky; returns false when the
// factorization cannot be rescued.
class SchurSolver {
 public:
  bool factor(RealMatrix m) {
    const int n = m.rows();
    double base = 0.0;
    for (int i = 0; i < n; ++i) base = std::max(base, std::abs(m.at(i, i)));
    double jitter = 0.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
      RealMatrix trial = m;
      if (jitter > 0.0)
        for (int i = 0; i < n; ++i) trial.at(i, i) += jitter;
      if (cholesky(trial, l_)) return true;
      jitter = std::max(jitter * 100.0, 1e-14 * std::max(base, 1.0));
    }
    return false;
  }

  std::vector<double> solve(std::vector<double> b) const {
    solve_lower_vec(l_, b);
    solve_lower_transposed_vec(l_, b);
    return b;
  }

 private:
  RealMatrix l_;
};

}  // namespace

namespace {
struct PhaseTimers {
  double residual = 0, scaling = 0, schur = 0, directions = 0, steps = 0,
         update = 0;
};
thread_local PhaseTimers g_phase_timers;
double now_sec() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}
}  // namespace

SdpSolution solve(const SdpProblem& problem, const SdpOptions& options) {
  problem.validate();
  const int n = problem.decision_dim;
  const int m = static_cast<int>(problem.equalities.size());
  const int nblocks = static_cast<int>(problem.blocks.size());
  const double tol = options.tol;

  // dense equality rows
  RealMatrix G(std::max(m, 1), n);
  std::vector<double> h(m, 0.0);
  for (int r = 0; r < m; ++r) {
    for (const auto& [i, v] : problem.equalities[r].coefficients)
      G.at(r, i) += v;
    h[r] = problem.equalities[r].rhs;
  }

  double f0_scale = 1.0, c_scale = 1.0;
  for (const auto& b : problem.blocks)
    f0_scale = std::max(f0_scale, b.constant.max_abs());
  for (double ci : problem.objective) c_scale = std::max(c_scale, std::abs(ci));

  std::vector<double> x(n, 0.0), y(m, 0.0);
  if (!problem.initial_point.empty()) x = problem.initial_point;

  Workspace w;
  w.S.resize(nblocks);
  w.Z.resize(nblocks);
  int sdim = 0;
  for (int k = 0; k < nblocks; ++k) {
    const auto& b = problem.blocks[k];
    sdim += b.dim;
    bool feasible_start = false;
    if (!problem.initial_point.empty()) {
      RealMatrix sx = constraint_value(b, x);
      if (min_eigenvalue(sx) > 1e-8 * std::max(1.0, sx.max_abs())) {
        w.S[k] = std::move(sx);
        feasible_start = true;
      }
    }
    if (!feasible_start) {
      const double xi = std::max(1.0, 2.0 * b.constant.max_abs());
      w.S[k] = RealMatrix::identity(b.dim);
      for (int i = 0; i < b.dim; ++i) w.S[k].at(i, i) = xi;
    }
    w.Z[k] = RealMatrix::identity(b.dim);
    for (int i = 0; i < b.dim; ++i) w.Z[k].at(i, i) = c_scale;
  }

  SdpSolution sol;
  sol.decision = x;
  const double pres_tol = 1e-9 * (1.0 + f0_scale);
  const double dres_tol = 1e-8 * (1.0 + c_scale);

  auto finish = [&](SdpStatus status, int iters) {
    if (std::getenv("QCOH_SDP_PROFILE"))
      std::fprintf(stderr,
                   "sdp phases: residual %.3f scaling %.3f schur %.3f "
                   "directions %.3f steps %.3f update %.3f (n=%d)\n",
                   g_phase_timers.residual, g_phase_timers.scaling,
                   g_phase_timers.schur, g_phase_timers.directions,
                   g_phase_timers.steps, g_phase_timers.update, n);
    sol.status = status;
    sol.iterations = iters;
    sol.decision = x;
    double pobj = 0.0;
    for (int i = 0; i < n; ++i) pobj += problem.objective[i] * x[i];
    sol.optimal_value = pobj;
    if (!sol.history.empty()) {
      const auto& it = sol.history.back();
      sol.duality_gap = std::abs(it.primal_obj - it.dual_obj) /
                        (1.0 + std::abs(it.primal_obj) + std::abs(it.dual_obj));
    }
    return sol;
  };

  for (int iter = 0; iter < options.max_iter; ++iter) {
    double t_phase = now_sec();
    // residuals; when the slack has only rounding-level drift from S(x),
    // re-anchor it exactly so the drift cannot accumulate across iterations
    w.Rp.assign(nblocks, RealMatrix());
    double pres = 0.0;
    for (int k = 0; k < nblocks; ++k) {
      RealMatrix sx = constraint_value(problem.blocks[k], x);
      RealMatrix r = sx;  // Rp = S(x) - S, so that dS = A(dx) + Rp
      for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j) r.at(i, j) -= w.S[k].at(i, j);
      double drift = r.max_abs();
      if (drift > 0.0 && drift <= 1e-6 * (1.0 + w.S[k].max_abs())) {
        symmetrize(sx);
        RealMatrix l;
        if (cholesky(sx, l)) {
          w.S[k] = std::move(sx);
          r = RealMatrix(w.S[k].rows(), w.S[k].cols());
          drift = 0.0;
        }
      }
      pres = std::max(pres, drift);
      w.Rp[k] = std::move(r);
    }
    std::vector<double> rg(m, 0.0);
    for (int r = 0; r < m; ++r) {
      double gx = 0.0;
      for (int i = 0; i < n; ++i) gx += G.at(r, i) * x[i];
      rg[r] = h[r] - gx;
      pres = std::max(pres, std::abs(rg[r]));
    }
    std::vector<double> rd = problem.objective;
    for (int r = 0; r < m; ++r)
      for (int i = 0; i < n; ++i) rd[i] -= G.at(r, i) * y[r];
    for (int k = 0; k < nblocks; ++k)
      for (const auto& t : problem.blocks[k].terms)
        rd[t.var] -= sparse_dot(t.entries, w.Z[k]);
    double dres = 0.0;
    for (double v : rd) dres = std::max(dres, std::abs(v));

    double gap = 0.0;
    for (int k = 0; k < nblocks; ++k) gap += trace_product(w.S[k], w.Z[k]);
    const double mu = gap / sdim;
    double pobj = 0.0;
    for (int i = 0; i < n; ++i) pobj += problem.objective[i] * x[i];
    double dobj = 0.0;
    for (int k = 0; k < nblocks; ++k)
      dobj -= trace_product(problem.blocks[k].constant, w.Z[k]);
    for (int r = 0; r < m; ++r) dobj += h[r] * y[r];

    sol.history.push_back({pobj, dobj, gap, pres, dres});
    const double relgap = gap / (1.0 + std::abs(pobj) + std::abs(dobj));
    if (relgap <= tol && pres <= pres_tol && dres <= dres_tol)
      return finish(SdpStatus::Optimal, iter);

    g_phase_timers.residual += now_sec() - t_phase;
    t_phase = now_sec();
    // NT scaling per block
    w.Winv.assign(nblocks, RealMatrix());
    w.Sinv.assign(nblocks, RealMatrix());
    bool scaling_ok = true;
    for (int k = 0; k < nblocks && scaling_ok; ++k) {
      RealMatrix ls;
      if (!cholesky(w.S[k], ls)) {
        scaling_ok = false;
        break;
      }
      // A = Ls^T Z Ls
      RealMatrix a = matmul(matmul(transpose(ls), w.Z[k]), ls);
      std::vector<double> ev;
      RealMatrix v;
      sym_eig(a, ev, v);
      if (ev.front() <= 0.0) {
        scaling_ok = false;
        break;
      }
      const int d = problem.blocks[k].dim;
      RealMatrix c(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double s = 0.0;
          for (int t = 0; t < d; ++t)
            s += v.at(i, t) * std::sqrt(ev[t]) * v.at(j, t);
          c.at(i, j) = s;
        }
      // Winv = Ls^-T C Ls^-1
      solve_lower_transposed_inplace(ls, c);   // C <- Ls^-T C
      RealMatrix ct = transpose(c);
      solve_lower_transposed_inplace(ls, ct);  // (C Ls^-1)^T = Ls^-T C^T
      RealMatrix winv = transpose(ct);
      symmetrize(winv);
      // Sinv = Ls^-T Ls^-1
      RealMatrix sinv = RealMatrix::identity(d);
      solve_lower_inplace(ls, sinv);
      solve_lower_transposed_inplace(ls, sinv);
      symmetrize(sinv);
      w.Winv[k] = std::move(winv);
      w.Sinv[k] = std::move(sinv);
    }
    if (!scaling_ok)
      return finish(relgap <= tol * 100 ? SdpStatus::MaxIterations
                                        : SdpStatus::NumericalFailure,
                    iter);

    g_phase_timers.scaling += now_sec() - t_phase;
    t_phase = now_sec();
    // Schur complement M_ij = sum_k Tr(F_i Winv F_j Winv)
    RealMatrix M(n, n);
    for (int k = 0; k < nblocks; ++k) {
      const auto& terms = problem.blocks[k].terms;
      const RealMatrix& wi = w.Winv[k];
      for (size_t a = 0; a < terms.size(); ++a) {
        for (size_t b = a; b < terms.size(); ++b) {
          double val = 0.0;
          for (const auto& e1 : terms[a].entries)
            for (const auto& e2 : terms[b].entries)
              val += e1.value * e2.value * wi.at(e1.col, e2.row) *
                     wi.at(e2.col, e1.row);
          M.at(terms[a].var, terms[b].var) += val;
          if (terms[a].var != terms[b].var)
            M.at(terms[b].var, terms[a].var) += val;
        }
      }
    }
    symmetrize(M);

    g_phase_timers.schur += now_sec() - t_phase;
    t_phase = now_sec();
    SchurSolver schur;
    if (!schur.factor(M))
      return finish(relgap <= tol * 100 ? SdpStatus::MaxIterations
                                        : SdpStatus::NumericalFailure,
                    iter);

    // Precompute per-variable pieces independent of sigma:
    //   base_i = -rd_i - Tr(F_i Z) - Tr(F_i Winv Rp Winv)
    //   cent_i = Tr(F_i Sinv)
    std::vector<double> base(n, 0.0), cent(n, 0.0);
    for (int i = 0; i < n; ++i) base[i] = -rd[i];
    for (int k = 0; k < nblocks; ++k) {
      RealMatrix t = matmul(matmul(w.Winv[k], w.Rp[k]), w.Winv[k]);
      for (int i = 0; i < t.rows(); ++i)
        for (int j = 0; j < t.cols(); ++j) t.at(i, j) += w.Z[k].at(i, j);
      for (const auto& term : problem.blocks[k].terms) {
        base[term.var] -= sparse_dot(term.entries, t);
        cent[term.var] += sparse_dot(term.entries, w.Sinv[k]);
      }
    }

    auto compute_direction = [&](double sigma_mu, std::vector<double>& dx,
                                 std::vector<double>& dy) {
      std::vector<double> rhs(n);
      for (int i = 0; i < n; ++i) rhs[i] = base[i] + sigma_mu * cent[i];
      if (m > 0) {
        // dy from (G M^-1 G^T) dy = rg - G M^-1 rhs
        std::vector<std::vector<double>> minv_gt(m);
        for (int r = 0; r < m; ++r) {
          std::vector<double> col(n);
          for (int i = 0; i < n; ++i) col[i] = G.at(r, i);
          minv_gt[r] = schur.solve(std::move(col));
        }
        const std::vector<double> minv_rhs = schur.solve(rhs);
        RealMatrix gmg(m, m);
        std::vector<double> rhs2(m);
        for (int r = 0; r < m; ++r) {
          for (int s = 0; s < m; ++s) {
            double v = 0.0;
            for (int i = 0; i < n; ++i) v += G.at(r, i) * minv_gt[s][i];
            gmg.at(r, s) = v;
          }
          double v = 0.0;
          for (int i = 0; i < n; ++i) v += G.at(r, i) * minv_rhs[i];
          rhs2[r] = rg[r] - v;
        }
        SchurSolver eqs;
        if (!eqs.factor(gmg)) return false;
        dy = eqs.solve(rhs2);
        for (int r = 0; r < m; ++r)
          for (int i = 0; i < n; ++i) rhs[i] += G.at(r, i) * dy[r];
      } else {
        dy.assign(0, 0.0);
      }
      dx = schur.solve(rhs);
      // dS = A(dx) + Rp ; dZ = sigma_mu Sinv - Z - Winv dS Winv
      w.dS.assign(nblocks, RealMatrix());
      w.dZ.assign(nblocks, RealMatrix());
      for (int k = 0; k < nblocks; ++k) {
        RealMatrix ds = w.Rp[k];
        for (const auto& t : problem.blocks[k].terms) {
          const double xi = dx[t.var];
          if (xi == 0.0) continue;
          for (const auto& e : t.entries) ds.at(e.row, e.col) += xi * e.value;
        }
        symmetrize(ds);
        RealMatrix dz = matmul(matmul(w.Winv[k], ds), w.Winv[k]);
        for (int i = 0; i < dz.rows(); ++i)
          for (int j = 0; j < dz.cols(); ++j)
            dz.at(i, j) = sigma_mu * w.Sinv[k].at(i, j) - w.Z[k].at(i, j) -
                          dz.at(i, j);
        symmetrize(dz);
        w.dS[k] = std::move(ds);
        w.dZ[k] = std::move(dz);
      }
      return true;
    };

    // Largest verified step in (0, 1]: bisection on Cholesky feasibility.
    // PD points along the segment form an interval, so any alpha below a
    // verified one is also PD.
    auto max_step = [&](const std::vector<RealMatrix>& mats,
                        const std::vector<RealMatrix>& dmats) {
      auto feasible = [&](double a) {
        for (int k = 0; k < nblocks; ++k) {
          RealMatrix trial = mats[k];
          const auto& d = dmats[k].data();
          auto& t = trial.data();
          for (size_t i = 0; i < t.size(); ++i) t[i] += a * d[i];
          RealMatrix l;
          if (!cholesky(trial, l)) return false;
        }
        return true;
      };
      if (feasible(1.0)) return 1.0;
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 14; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid))
          lo = mid;
        else
          hi = mid;
      }
      return lo;
    };

    g_phase_timers.directions += now_sec() - t_phase;
    t_phase = now_sec();
    std::vector<double> dx, dy;
    if (!compute_direction(0.0, dx, dy))
      return finish(relgap <= tol * 100 ? SdpStatus::MaxIterations
                                        : SdpStatus::NumericalFailure,
                    iter);
    double ap = std::min(1.0, 0.98 * max_step(w.S, w.dS));
    double ad = std::min(1.0, 0.98 * max_step(w.Z, w.dZ));
    double gap_aff = 0.0;
    for (int k = 0; k < nblocks; ++k) {
      gap_aff += trace_product(w.S[k], w.Z[k]);
      gap_aff += ap * trace_product(w.dS[k], w.Z[k]);
      gap_aff += ad * trace_product(w.S[k], w.dZ[k]);
      gap_aff += ap * ad * trace_product(w.dS[k], w.dZ[k]);
    }
    double sigma = std::pow(std::clamp(gap_aff / gap, 0.0, 1.0), 3);
    // keep the gap from collapsing below lagging feasibility residuals:
    // with mu pinned near zero the iterates jam against the cone boundary
    // and the residuals can no longer catch up
    const double lag = std::max(pres / (1.0 + f0_scale),
                                dres / (1.0 + c_scale));
    if (lag > relgap) sigma = std::max(sigma, 0.9);

    if (!compute_direction(sigma * mu, dx, dy))
      return finish(relgap <= tol * 100 ? SdpStatus::MaxIterations
                                        : SdpStatus::NumericalFailure,
                    iter);
    ap = std::min(1.0, 0.98 * max_step(w.S, w.dS));
    ad = std::min(1.0, 0.98 * max_step(w.Z, w.dZ));

    if (ap < 1e-12 && ad < 1e-12)
      return finish(relgap <= tol * 100 ? SdpStatus::MaxIterations
                                        : SdpStatus::NumericalFailure,
                    iter);

    g_phase_timers.steps += now_sec() - t_phase;
    t_phase = now_sec();
    static const bool trace = std::getenv("QCOH_SDP_TRACE") != nullptr;
    if (trace)
      std::fprintf(stderr,
                   "sdp it %3d gap %.3e relgap %.3e sigma %.3e ap %.3e ad "
                   "%.3e pres %.2e dres %.2e\n",
                   iter, gap, relgap, sigma, ap, ad, pres, dres);

    for (int i = 0; i < n; ++i) x[i] += ap * dx[i];
    for (int r = 0; r < m; ++r) y[r] += ad * dy[r];
    for (int k = 0; k < nblocks; ++k) {
      for (int i = 0; i < w.S[k].rows(); ++i)
        for (int j = 0; j < w.S[k].cols(); ++j) {
          w.S[k].at(i, j) += ap * w.dS[k].at(i, j);
          w.Z[k].at(i, j) += ad * w.dZ[k].at(i, j);
        }
      symmetrize(w.S[k]);
      symmetrize(w.Z[k]);
    }
    g_phase_timers.update += now_sec() - t_phase;
  }
  return finish(SdpStatus::MaxIterations, options.max_iter);
}

}  // namespace qcoh
