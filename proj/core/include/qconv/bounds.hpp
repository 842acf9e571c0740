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

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qconv/hypotest.hpp"
#include "qconv/quantum.hpp"
#include "qconv/sdp.hpp"

namespace qconv {

/// Test classes, ordered ALL ⊃ PPT ⊃ LC1 ⊃ L. Only ALL and PPT are computable.
enum class TestClass { All, Ppt, Lc1, L };

std::string to_string(TestClass cls);
/// Accepts "all", "ppt", "lc1", "l" (case-insensitive).
TestClass parse_test_class(std::string_view text);

class NotComputable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// ε used in place of 0 on interior-point paths.
inline constexpr double kSdpEpsilonFloor = 1e-9;

struct SolverDiagnostics {
  std::string solver = "none";
  Status status = Status::Optimal;
  int iterations = 0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double max_constraint_violation = 0.0;
  /// |‖Tr_Ā R*‖_∞ − λ*| for the primal bound.
  double sigma_certificate_gap = 0.0;
  std::string message;
};

struct BoundResult {
  /// Upper bound on log2 M.
  double bits = 0.0;
  /// Kept in long double: exact depolarising values reach 1e-366 at n = 1000.
  long double beta = 1.0L;
  double epsilon = 0.0;
  TestClass test_class = TestClass::All;
  int n_uses = 1;
  std::optional<HermitianOperator> optimal_r;
  std::optional<DensityMatrix> optimal_sigma;
  std::optional<DensityMatrix> optimal_rho;
  SolverDiagnostics diagnostics;
};

/// Data shared by every channel bound: Choi operator on Ā⊗B, ρ_Ā = ρ^T and
/// the H0 state E ρ_ĀA = (ρ_Ā^{1/2} ⊗ I) Choi (ρ_Ā^{1/2} ⊗ I).
struct ChannelHypothesis {
  HermitianOperator choi;
  DensityMatrix rho_bar;
  DensityMatrix joint;
  DimPair dims;
};

ChannelHypothesis make_hypothesis(const QuantumChannel& channel, const DensityMatrix& rho);

/// β^ALL_ε(E ρ_ĀA ‖ ρ_Ā ⊗ σ) for one fixed σ.
double beta_for_sigma(const QuantumChannel& channel, const DensityMatrix& rho,
                      const DensityMatrix& sigma, double eps);

/// Primal SDP: min λ s.t. Tr_Ā R ≤ λ I, Tr[R·Choi] ≥ 1 − ε, 0 ≤ R ≤ ρ_Ā⊗I
/// (plus 0 ≤ R^{T_B} ≤ ρ_Ā⊗I for PPT).
BoundResult ea_bound(const QuantumChannel& channel, const DensityMatrix& rho, double eps,
                     TestClass cls, const SolverOptions& options = {});

/// Dual SDP: max (1−ε)μ − Tr[F(ρ_Ā⊗I)] s.t. I⊗G + F ≥ μ·Choi, Tr G ≤ 1,
/// G, F, μ ≥ 0. ALL class only.
BoundResult ea_bound_dual(const QuantumChannel& channel, const DensityMatrix& rho, double eps,
                          const SolverOptions& options = {});

/// Joint SDP with ρ_Ā as a unit-trace PSD variable.
BoundResult ea_bound_opt_rho(const QuantumChannel& channel, double eps, TestClass cls,
                             const SolverOptions& options = {});

/// Column-stochastic matrix: entry (y, x) is W(y|x).
class StochasticMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit StochasticMatrix(Eigen::MatrixXd w);

  int inputs() const { return static_cast<int>(w_.cols()); }
  int outputs() const { return static_cast<int>(w_.rows()); }
  double operator()(int y, int x) const { return w_(y, x); }
  const Eigen::MatrixXd& matrix() const { return w_; }

 private:
  Eigen::MatrixXd w_;
};

/// Kraus operators √W(y|x)·|y⟩⟨x|.
QuantumChannel classical_channel(const StochasticMatrix& w);

/// −log2 min_p max_q β_ε(p·W ‖ p×q). With `input` given, p is fixed.
/// ε = 0 is evaluated exactly.
BoundResult classical_converse(const StochasticMatrix& w, double eps,
                               const std::optional<std::vector<double>>& input = std::nullopt);

/// max_q β_ε(p·W ‖ p×q) with the maximizing q.
std::pair<double, std::vector<double>> classical_max_beta(const StochasticMatrix& w,
                                                          std::span<const double> p, double eps);

/// Exact bound for n uses of the d-dimensional depolarising channel.
BoundResult depolarising_exact(int d, double p, int n, double eps);

/// −log2 β_ε(τ_CB ‖ τ_C ⊗ τ_B) for a fixed ensemble.
double wang_renner_chi(const std::vector<std::pair<double, DensityMatrix>>& ensemble,
                       const QuantumChannel& channel, double eps);

/// (I(E, ρ) + h(ε)) / (1 − ε).
double fano_bound(const QuantumChannel& channel, const DensityMatrix& rho, double eps);

/// Σ_g w_g U_g ρ U_g†.
DensityMatrix average_state(const DensityMatrix& rho, const std::vector<ComplexMatrix>& unitaries,
                            const std::vector<double>& weights);

/// True iff E(U X U†) = V E(X) V† on every matrix unit, within 1e-8.
bool verify_covariance(const QuantumChannel& channel, const ComplexMatrix& u,
                       const ComplexMatrix& v);

/// −log2(1 − ε) if the code rate exceeds the storage bound, else 0.
double noisy_storage_minentropy(double code_rate_bits, const BoundResult& bound);

/// Smallest n ≤ n_max with n·rate > depolarising_exact(d, p, n, eps).bits.
std::optional<int> depolarising_overflow_blocklength(int d, double p, double rate_bits,
                                                     double eps, int n_max);

}  // namespace qconv
