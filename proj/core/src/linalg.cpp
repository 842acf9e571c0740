// Copyright 2026 The qconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qconv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qconv {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": expected a square matrix, got " +
                         describe_shape(m));
  }
}

void require_bipartite(const ComplexMatrix& x, DimPair dims, const char* what) {
  require_square(x, what);
  if (x.rows() != dims.total()) {
    std::ostringstream msg;
    msg << what << ": operator of dimension " << x.rows()
        << " does not match bipartition " << dims.dim_a << "x" << dims.dim_b;
    throw DimensionError(msg.str());
  }
}

}  // namespace

DimPair::DimPair(int a, int b) : dim_a(a), dim_b(b) {
  if (a < 1 || b < 1) {
    throw DimensionError("DimPair: subsystem dimensions must be >= 1");
  }
}

std::string describe_shape(const ComplexMatrix& m) {
  std::ostringstream s;
  s << m.rows() << "x" << m.cols();
  return s.str();
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs_entry(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix& m) {
  return m.allFinite();
}

HermitianOperator::HermitianOperator(const ComplexMatrix& m) {
  require_square(m, "HermitianOperator");
  if (!all_finite(m)) throw ValueError("HermitianOperator: non-finite entry");
  const double defect = m.size() == 0 ? 0.0 : hermiticity_defect(m);
  if (defect > kHermitianTolerance * (1.0 + max_abs_entry(m))) {
    std::ostringstream msg;
    msg << "HermitianOperator: matrix is not Hermitian (max |X - X^dag| = " << defect
        << ")";
    throw ValueError(msg.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::symmetrized(const ComplexMatrix& m) {
  require_square(m, "HermitianOperator::symmetrized");
  if (!all_finite(m)) throw ValueError("HermitianOperator: non-finite entry");
  HermitianOperator h;
  h.m_ = 0.5 * (m + m.adjoint());
  return h;
}

HermitianOperator HermitianOperator::identity(int dim) {
  HermitianOperator h;
  h.m_ = ComplexMatrix::Identity(dim, dim);
  return h;
}

HermitianOperator HermitianOperator::zero(int dim) {
  HermitianOperator h;
  h.m_ = ComplexMatrix::Zero(dim, dim);
  return h;
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> values) {
  const auto n = static_cast<Eigen::Index>(values.size());
  HermitianOperator h;
  h.m_ = ComplexMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) h.m_(i, i) = values[static_cast<size_t>(i)];
  return h;
}

HermitianOperator HermitianOperator::projector(const ComplexVector& v) {
  return symmetrized(v * v.adjoint());
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& other) {
  if (dim() != other.dim()) throw DimensionError("HermitianOperator: dimension mismatch in +");
  m_ += other.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& other) {
  if (dim() != other.dim()) throw DimensionError("HermitianOperator: dimension mismatch in -");
  m_ -= other.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
  m_ *= s;
  return *this;
}

double inner_product(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("inner_product: dimension mismatch");
  // Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (a.matrix().array() * b.matrix().conjugate().array()).sum().real();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator::symmetrized(kron(a.matrix(), b.matrix()));
}

ComplexMatrix partial_trace(const ComplexMatrix& x, DimPair dims, Subsystem traced) {
  require_bipartite(x, dims, "partial_trace");
  const int da = dims.dim_a;
  const int db = dims.dim_b;
  if (traced == Subsystem::B) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < da; ++j)
        for (int k = 0; k < db; ++k) out(i, j) += x(i * db + k, j * db + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(db, db);
  for (int i = 0; i < da; ++i) out += x.block(i * db, i * db, db, db);
  return out;
}

HermitianOperator partial_trace(const HermitianOperator& x, DimPair dims,
                                Subsystem traced) {
  return HermitianOperator::symmetrized(partial_trace(x.matrix(), dims, traced));
}

ComplexMatrix partial_transpose(const ComplexMatrix& x, DimPair dims, Subsystem which) {
  require_bipartite(x, dims, "partial_transpose");
  const int da = dims.dim_a;
  const int db = dims.dim_b;
  ComplexMatrix out(x.rows(), x.cols());
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l) {
          if (which == Subsystem::B) {
            out(i * db + k, j * db + l) = x(i * db + l, j * db + k);
          } else {
            out(i * db + k, j * db + l) = x(j * db + k, i * db + l);
          }
        }
  return out;
}

HermitianOperator partial_transpose(const HermitianOperator& x, DimPair dims,
                                    Subsystem which) {
  return HermitianOperator::symmetrized(partial_transpose(x.matrix(), dims, which));
}

ComplexMatrix permute_subsystems(const ComplexMatrix& x, std::span<const int> dims,
                                 std::span<const int> perm) {
  require_square(x, "permute_subsystems");
  const size_t m = dims.size();
  if (perm.size() != m) throw DimensionError("permute_subsystems: perm size mismatch");
  std::vector<int> seen(m, 0);
  for (int p : perm) {
    if (p < 0 || static_cast<size_t>(p) >= m || seen[static_cast<size_t>(p)]++)
      throw ValueError("permute_subsystems: not a permutation");
  }
  const long total = std::accumulate(dims.begin(), dims.end(), 1L, std::multiplies<>());
  if (total != x.rows()) throw DimensionError("permute_subsystems: dimension mismatch");

  // Strides of the input factors (row-major composite index).
  std::vector<long> in_stride(m, 1);
  for (size_t k = m; k-- > 1;) in_stride[k - 1] = in_stride[k] * dims[k];
  std::vector<int> out_dims(m);
  for (size_t k = 0; k < m; ++k) out_dims[k] = dims[static_cast<size_t>(perm[k])];

  std::vector<Eigen::Index> source(static_cast<size_t>(total));
  std::vector<int> digit(m, 0);
  for (long idx = 0; idx < total; ++idx) {
    long src = 0;
    for (size_t k = 0; k < m; ++k) src += digit[k] * in_stride[static_cast<size_t>(perm[k])];
    source[static_cast<size_t>(idx)] = src;
    for (size_t k = m; k-- > 0;) {
      if (++digit[k] < out_dims[k]) break;
      digit[k] = 0;
    }
  }
  ComplexMatrix out(x.rows(), x.cols());
  for (long r = 0; r < total; ++r)
    for (long c = 0; c < total; ++c)
      out(r, c) = x(source[static_cast<size_t>(r)], source[static_cast<size_t>(c)]);
  return out;
}

EigenDecomposition eigh(const HermitianOperator& x) {
  EigenDecomposition out;
  if (x.dim() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(x.matrix()),
                                                         Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw ValueError("eigh: decomposition failed");
  const auto& w = solver.eigenvalues();
  out.values.assign(w.data(), w.data() + w.size());
  out.vectors = solver.eigenvectors();
  return out;
}

EigenDecomposition eigh(const ComplexMatrix& x) {
  return eigh(HermitianOperator(x));
}

HermitianOperator sqrt_psd(const HermitianOperator& x) {
  return spectral_map(x, [](double w) { return w > 0.0 ? std::sqrt(w) : 0.0; });
}

HermitianOperator inverse_sqrt_on_support(const HermitianOperator& x,
                                          double relative_cutoff) {
  const auto eig = eigh(x);
  const double top = eig.values.empty() ? 0.0 : eig.values.back();
  const double cutoff = relative_cutoff * std::max(top, 0.0);
  return spectral_map(eig, [cutoff](double w) { return w > cutoff ? 1.0 / std::sqrt(w) : 0.0; });
}

HermitianOperator kernel_projector(const HermitianOperator& x, double relative_cutoff) {
  const auto eig = eigh(x);
  const double top = eig.values.empty() ? 0.0 : eig.values.back();
  const double cutoff = relative_cutoff * std::max(top, 0.0);
  return spectral_map(eig, [cutoff](double w) { return w > cutoff ? 0.0 : 1.0; });
}

double min_eigenvalue(const HermitianOperator& x) {
  return eigh(x).values.front();
}

double max_eigenvalue(const HermitianOperator& x) {
  return eigh(x).values.back();
}

double operator_norm(const HermitianOperator& x) {
  const auto eig = eigh(x);
  return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const ComplexMatrix defect = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
  return max_abs_entry(defect) <= tol;
}

}  // namespace qconv
