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

#include <vector>

#include "qconv/linalg.hpp"

namespace qconv {

/// Positive semidefinite, unit-trace operator.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Throws ValueError when an eigenvalue is below -tol or |Tr - 1| > tol.
  explicit DensityMatrix(HermitianOperator op, double tol = kTolerance);

  static DensityMatrix maximally_mixed(int dim);
  static DensityMatrix pure(const ComplexVector& psi);
  static DensityMatrix basis_state(int dim, int k);
  static DensityMatrix diagonal(std::span<const double> probs);

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const ComplexMatrix& matrix() const { return op_.matrix(); }

  /// ρ^T, the reduced state on the reference copy Ā of the canonical purification.
  DensityMatrix transpose() const;

 private:
  HermitianOperator op_;
};

DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b);

/// Completely positive trace-preserving map A → B, held as Kraus operators
/// (each dim_out × dim_in) with the Choi operator (id ⊗ E)(Φ) on Ā⊗B cached.
class QuantumChannel {
 public:
  static constexpr double kTraceTolerance = 1e-10;

  /// Throws ValueError naming ‖Σ K†K − I‖ when trace preservation fails.
  static QuantumChannel from_kraus(std::vector<ComplexMatrix> kraus,
                                   double tp_tolerance = kTraceTolerance);
  /// Kraus set from the eigendecomposition of the Choi operator.
  static QuantumChannel from_choi(const HermitianOperator& choi, int dim_in, int dim_out,
                                  double tp_tolerance = kTraceTolerance);
  static QuantumChannel identity(int dim);
  /// Replaces every input by `output`.
  static QuantumChannel constant(int dim_in, const DensityMatrix& output);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  const HermitianOperator& choi() const { return choi_; }
  DimPair choi_dims() const { return {dim_in_, dim_out_}; }

  /// Σ K X K† for any operator X on A (linear extension).
  ComplexMatrix apply(const ComplexMatrix& x) const;

  /// ‖Σ K†K − I‖ as max-abs entry.
  double trace_preservation_defect() const;

 private:
  QuantumChannel(int dim_in, int dim_out, std::vector<ComplexMatrix> kraus);

  int dim_in_ = 0;
  int dim_out_ = 0;
  std::vector<ComplexMatrix> kraus_;
  HermitianOperator choi_;
};

/// Φ = Σ_ij |ii⟩⟨jj| on Ā⊗A (unnormalized maximally entangled operator).
HermitianOperator phi_operator(int dim);

/// (id ⊗ E)(Φ) computed directly from the Kraus operators.
HermitianOperator choi_from_kraus(std::span<const ComplexMatrix> kraus, int dim_in,
                                  int dim_out);

/// ρ^{1/2} Φ ρ^{1/2} with the square roots acting on A; a pure state on Ā⊗A.
DensityMatrix canonical_purification(const DensityMatrix& rho);

DensityMatrix apply_channel(const QuantumChannel& channel, const DensityMatrix& rho);

/// (id_Ā ⊗ E)(x) for x on Ā⊗A; the result lives on Ā⊗B.
HermitianOperator apply_channel_to_A(const QuantumChannel& channel,
                                     const HermitianOperator& x);

/// d-dimensional depolarising channel τ ↦ (1−p)τ + p·Tr(τ)·1/d, with Kraus
/// operators from the Weyl–Heisenberg basis.
QuantumChannel depolarising_channel(int dim, double p);

QuantumChannel tensor_product(const QuantumChannel& first, const QuantumChannel& second);

inline constexpr int kDefaultTensorPowerCap = 1024;

/// n-fold tensor power. Throws DimensionError if (dim_in·dim_out)^n exceeds
/// `choi_dim_cap`. Kraus sets larger than the Choi rank are compressed.
QuantumChannel tensor_power(const QuantumChannel& channel, int n,
                            int choi_dim_cap = kDefaultTensorPowerCap);

/// Entropy of the spectrum, in bits, with eigenvalues in [-1e-10, 0) clamped.
double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy(const HermitianOperator& rho);

/// S(ρ) + S(E(ρ)) − S((id⊗E)ρ_ĀA), clamped at zero.
double mutual_information(const QuantumChannel& channel, const DensityMatrix& rho);

/// h(p) = −p log₂ p − (1−p) log₂(1−p).
double binary_entropy(double p);
/// d(p‖q) = p log₂(p/q) + (1−p) log₂((1−p)/(1−q)).
double binary_relative_entropy(double p, double q);

/// Unassisted code: message w is encoded as input_states[w] and decoded by the
/// POVM element decoder[w].
class Code {
 public:
  static constexpr double kPovmTolerance = 1e-10;

  Code(std::vector<DensityMatrix> input_states, std::vector<HermitianOperator> decoder);

  int message_count() const { return static_cast<int>(inputs_.size()); }
  const std::vector<DensityMatrix>& input_states() const { return inputs_; }
  const std::vector<HermitianOperator>& decoder() const { return decoder_; }

  /// Σ_w ρ(w)/M.
  DensityMatrix average_input() const;
  /// (1/M) Σ_w Tr D(w) E(ρ(w)).
  double success_probability(const QuantumChannel& channel) const;

 private:
  std::vector<DensityMatrix> inputs_;
  std::vector<HermitianOperator> decoder_;
};

/// Alice-side elements E(w) = (1/M)·ρ_Ā^{−1/2} ρ(w)^T ρ_Ā^{−1/2} of the local test.
std::vector<HermitianOperator> code_alice_elements(const Code& code,
                                                   const DensityMatrix& rho);

/// Test T = Σ_w E(w) ⊗ D(w) on Ā⊗B with Tr[T (id⊗E)ρ_ĀA] equal to the
/// code's success probability for every channel E. `rho` must equal the
/// code's average input.
HermitianOperator code_to_test(const Code& code, const DensityMatrix& rho);

}  // namespace qconv
