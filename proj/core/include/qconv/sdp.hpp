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

#include <string>
#include <utility>
#include <vector>

#include "qconv/linalg.hpp"

namespace qconv {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hermitian matrix stored as its upper triangle (row ≤ col), sorted by
/// (row, col) with no duplicates.
class SparseHermitian {
 public:
  struct Entry {
    int row;
    int col;
    Complex value;
  };

  SparseHermitian() = default;
  explicit SparseHermitian(int dim) : dim_(dim) {}

  /// Builds from an arbitrary triplet list describing a Hermitian matrix in
  /// full: entries below the diagonal are dropped, duplicates are summed.
  static SparseHermitian from_full_triplets(int dim, std::vector<Entry> triplets);
  /// Entries with |value| ≤ drop are skipped.
  static SparseHermitian from_dense(const HermitianOperator& op, double drop = 0.0);
  static SparseHermitian identity(int dim, double scale = 1.0);
  static SparseHermitian scalar(double value) { return identity(1, value); }

  int dim() const { return dim_; }
  const std::vector<Entry>& entries() const { return entries_; }
  size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Both triangles, for code that wants the full pattern.
  std::vector<Entry> full_triplets() const;
  HermitianOperator to_dense() const;
  /// Re Tr(A X) for Hermitian X of matching dimension.
  double inner(const ComplexMatrix& x) const;
  double frobenius_norm() const;

  SparseHermitian& operator*=(double s);

 private:
  int dim_ = 0;
  std::vector<Entry> entries_;
};

enum class Sense { Equal, LessEqual, GreaterEqual };

/// Σ_k Re⟨A_k, X_k⟩ (sense) rhs, with A_k acting on block `terms[j].first`.
struct Constraint {
  std::vector<std::pair<int, SparseHermitian>> terms;
  double rhs = 0.0;
  Sense sense = Sense::Equal;
};

/// minimize Σ_k Re⟨C_k, X_k⟩ subject to linear constraints, X_k ⪰ 0.
class SdpProblem {
 public:
  /// Returns the block index.
  int add_block(int dim);
  /// Adds `c` to the cost of `block`.
  void add_objective(int block, const SparseHermitian& c);
  /// Returns the constraint index.
  int add_constraint(Constraint c);

  int block_count() const { return static_cast<int>(block_dims_.size()); }
  const std::vector<int>& block_dims() const { return block_dims_; }
  const std::vector<SparseHermitian>& objective() const { return objective_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  int constraint_count() const { return static_cast<int>(constraints_.size()); }

  /// Throws DimensionError / ValueError on malformed data.
  void validate() const;

 private:
  std::vector<int> block_dims_;
  std::vector<SparseHermitian> objective_;
  std::vector<Constraint> constraints_;
};

enum class Status { Optimal, PrimalInfeasible, DualInfeasible, IterationLimit };

std::string to_string(Status status);

struct SdpSolution {
  Status status = Status::IterationLimit;
  std::vector<HermitianOperator> primal_blocks;
  /// One multiplier per constraint; ≥ 0 for ≥ rows, ≤ 0 for ≤ rows.
  std::vector<double> dual_multipliers;
  /// Z_k = C_k − Σ_i y_i A_{i,k}.
  std::vector<HermitianOperator> dual_blocks;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  std::string message;
};

struct SolverOptions {
  int max_iterations = 200;
  double gap_tolerance = 1e-8;
  double feasibility_tolerance = 1e-8;
  double step_fraction = 0.98;
  bool verbose = false;
};

/// Primal-dual path-following method (HKM direction, Mehrotra
/// predictor-corrector). Each instance owns its workspace.
class InteriorPointSolver {
 public:
  explicit InteriorPointSolver(SolverOptions options = {}) : options_(options) {}

  SdpSolution solve(const SdpProblem& problem);

  const SolverOptions& options() const { return options_; }

 private:
  SolverOptions options_;
};

SdpSolution solve(const SdpProblem& problem, const SolverOptions& options = {});

struct VerificationReport {
  double max_constraint_violation = 0.0;
  /// Largest violation scaled by 1/(1 + |rhs|).
  double max_relative_violation = 0.0;
  double min_primal_eigenvalue = 0.0;
  double min_dual_eigenvalue = 0.0;
  double max_multiplier_sign_violation = 0.0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double absolute_gap = 0.0;
  double relative_gap = 0.0;
  std::vector<std::string> findings;

  bool ok() const { return findings.empty(); }
};

struct VerificationThresholds {
  double constraint = 1e-8;
  double eigenvalue = 1e-9;
  double gap = 1e-7;
};

/// Re-evaluates feasibility and the duality gap from the problem data.
VerificationReport verify(const SdpProblem& problem, const SdpSolution& solution,
                          const VerificationThresholds& thresholds = {});

// ---------------------------------------------------------------------------
// Matrix-valued constraint helpers

/// Linear map from a variable block to operators of a fixed dimension.
struct BlockMap {
  enum class Kind {
    Identity,          // X
    TraceOutA,         // Tr_A X, X on A⊗B
    TraceOutB,         // Tr_B X
    IdentityTensor,    // I_A ⊗ X, X on B
    TensorIdentity,    // X ⊗ I_B, X on A
    PartialTransposeB, // X^{T_B}
    ScalarTimes,       // x·K, X a 1×1 block
  };

  int block = 0;
  Kind kind = Kind::Identity;
  double coefficient = 1.0;
  int dim_a = 1;
  int dim_b = 1;
  HermitianOperator fixed;  // K for ScalarTimes

  /// Output dimension of the map.
  int output_dim() const;
  /// Input (block) dimension of the map.
  int input_dim() const;
  /// Adjoint applied to a sparse Hermitian operator.
  SparseHermitian adjoint(const SparseHermitian& e) const;
  /// Forward action on a dense block.
  ComplexMatrix apply(const ComplexMatrix& x) const;
};

/// Adds Σ_j maps[j](X_{maps[j].block}) = rhs as dim² real equality rows.
/// Returns the index range [first, last) of the added constraints.
std::pair<int, int> add_hermitian_equality(SdpProblem& problem,
                                           const std::vector<BlockMap>& maps,
                                           const HermitianOperator& rhs);

}  // namespace qconv
