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

#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qconv {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major. For a bipartite operator on A⊗B the
/// composite index of |i⟩_A|k⟩_B is i·dim_b + k.
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ValueError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Relative tolerance for Hermiticity: max|X - X†| ≤ tol·(1 + max|X|).
inline constexpr double kHermitianTolerance = 1e-12;

/// Bipartition of a composite system into A (first factor) and B.
struct DimPair {
  int dim_a;
  int dim_b;

  DimPair(int a, int b);
  int total() const { return dim_a * dim_b; }
};

enum class Subsystem { A, B };

/// Square complex matrix equal to its adjoint. Construction checks the
/// Hermiticity tolerance and then stores (X + X†)/2, so the stored matrix is
/// exactly Hermitian.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(const ComplexMatrix& m);

  /// Symmetrizes without checking the deviation; for iterates that are
  /// Hermitian only up to accumulated roundoff.
  static HermitianOperator symmetrized(const ComplexMatrix& m);
  static HermitianOperator identity(int dim);
  static HermitianOperator zero(int dim);
  static HermitianOperator diagonal(std::span<const double> values);
  static HermitianOperator projector(const ComplexVector& v);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }
  double trace() const { return m_.trace().real(); }

  HermitianOperator& operator+=(const HermitianOperator& other);
  HermitianOperator& operator-=(const HermitianOperator& other);
  HermitianOperator& operator*=(double s);

  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) {
    return a += b;
  }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) {
    return a -= b;
  }
  friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }
  friend HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }

 private:
  ComplexMatrix m_;
};

/// max|X[i][j] - conj(X[j][i])|.
double hermiticity_defect(const ComplexMatrix& m);
double max_abs_entry(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);

/// Re Tr(A B) for Hermitian A, B: the real Hilbert–Schmidt inner product.
double inner_product(const HermitianOperator& a, const HermitianOperator& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

/// Traces out `traced`; the result lives on the other factor.
ComplexMatrix partial_trace(const ComplexMatrix& x, DimPair dims, Subsystem traced);
HermitianOperator partial_trace(const HermitianOperator& x, DimPair dims,
                                Subsystem traced);

/// Transpose on the tagged factor only.
ComplexMatrix partial_transpose(const ComplexMatrix& x, DimPair dims,
                                Subsystem which);
HermitianOperator partial_transpose(const HermitianOperator& x, DimPair dims,
                                    Subsystem which);

/// Reorders the tensor factors of x: output factor k is input factor perm[k].
ComplexMatrix permute_subsystems(const ComplexMatrix& x, std::span<const int> dims,
                                 std::span<const int> perm);

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column k pairs with values[k]
};

EigenDecomposition eigh(const HermitianOperator& x);
/// Checks Hermiticity first; throws ValueError on non-Hermitian input.
EigenDecomposition eigh(const ComplexMatrix& x);

/// V diag(f(w)) V† for a real function f on the spectrum.
template <typename F>
HermitianOperator spectral_map(const EigenDecomposition& eig, F&& f) {
  const auto n = static_cast<Eigen::Index>(eig.values.size());
  ComplexMatrix scaled = eig.vectors;
  for (Eigen::Index k = 0; k < n; ++k) scaled.col(k) *= f(eig.values[k]);
  return HermitianOperator::symmetrized(scaled * eig.vectors.adjoint());
}

template <typename F>
HermitianOperator spectral_map(const HermitianOperator& x, F&& f) {
  return spectral_map(eigh(x), std::forward<F>(f));
}

/// Square root of a PSD operator; eigenvalues below zero are clamped.
HermitianOperator sqrt_psd(const HermitianOperator& x);

/// Pseudo-inverse square root on the support: eigenvalues ≤ cutoff·max are
/// treated as kernel.
HermitianOperator inverse_sqrt_on_support(const HermitianOperator& x,
                                          double relative_cutoff = 1e-12);

/// Orthogonal projector onto the eigenspace with eigenvalues ≤ cutoff·max.
HermitianOperator kernel_projector(const HermitianOperator& x,
                                   double relative_cutoff = 1e-12);

double min_eigenvalue(const HermitianOperator& x);
double max_eigenvalue(const HermitianOperator& x);
/// Largest |eigenvalue|.
double operator_norm(const HermitianOperator& x);

bool is_unitary(const ComplexMatrix& u, double tol = 1e-10);

std::string describe_shape(const ComplexMatrix& m);

}  // namespace qconv
