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


#include <gtest/gtest.h>

#include <cmath>

#include "qconv/quantum.hpp"
#include "qconv/random.hpp"
#include "support/oracles.hpp"

namespace qconv {
namespace {

// Mutual information of depolarising(2, 0.15) at the maximally mixed input,
// evaluated with mpmath at 60 digits.
constexpr double kDepolInfo = 1.314280755004173052;
constexpr double kH005 = 0.28639695711595612877;

oracle::Mat phi_oracle(int d) {
  oracle::Mat phi = oracle::Mat::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) phi(i * d + i, j * d + j) = 1.0;
  return phi;
}

double distance(const ComplexMatrix& a, const oracle::Mat& b) {
  return (oracle::Mat(a) - b).cwiseAbs().maxCoeff();
}

TEST(DensityMatrix, Validation) {
  EXPECT_THROW(DensityMatrix(HermitianOperator::identity(2)), ValueError);
  const std::vector<double> negative = {1.5, -0.5};
  EXPECT_THROW(DensityMatrix(HermitianOperator::diagonal(negative)), ValueError);
  EXPECT_NO_THROW(DensityMatrix::maximally_mixed(3));
  EXPECT_THROW(DensityMatrix::basis_state(2, 2), DimensionError);
}

TEST(DensityMatrix, PureStateNormalizes) {
  ComplexVector v(2);
  v << 3.0, Complex(0, 4.0);
  const auto rho = DensityMatrix::pure(v);
  EXPECT_NEAR(rho.op().trace(), 1.0, 1e-15);
  EXPECT_NEAR(rho.matrix()(0, 0).real(), 0.36, 1e-15);
  EXPECT_NEAR(std::abs(rho.matrix()(0, 1) - Complex(0, -0.48)), 0.0, 1e-15);
}

TEST(Channel, IdentityChoiIsPhi) {
  for (int d = 1; d <= 4; ++d) {
    const auto id = QuantumChannel::identity(d);
    EXPECT_LT(distance(id.choi().matrix(), phi_oracle(d)), 1e-15);
    EXPECT_LT(distance(phi_operator(d).matrix(), phi_oracle(d)), 1e-15);
  }
}

TEST(Channel, DepolarisingChoiClosedForm) {
  for (int d : {2, 3})
    for (double p : {0.0, 0.15, 0.5, 1.0}) {
      const auto ch = depolarising_channel(d, p);
      const oracle::Mat expected =
          (1 - p) * phi_oracle(d) + (p / d) * oracle::Mat::Identity(d * d, d * d);
      EXPECT_LT(distance(ch.choi().matrix(), expected), 1e-14) << d << " " << p;
      EXPECT_LT(ch.trace_preservation_defect(), 1e-14);
    }
  EXPECT_THROW(depolarising_channel(1, 0.1), ValueError);
  EXPECT_THROW(depolarising_channel(2, 1.1), ValueError);
}

TEST(Channel, NonTracePreservingKrausNamesResidual) {
  std::vector<ComplexMatrix> kraus = {0.9 * ComplexMatrix::Identity(2, 2)};
  try {
    QuantumChannel::from_kraus(kraus);
    FAIL() << "expected ValueError";
  } catch (const ValueError& e) {
    EXPECT_NE(std::string(e.what()).find("sum K^dag K - I"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("0.19"), std::string::npos);
  }
}

TEST(Channel, KrausShapeErrors) {
  std::vector<ComplexMatrix> kraus = {ComplexMatrix::Identity(2, 2), ComplexMatrix::Zero(3, 2)};
  EXPECT_THROW(QuantumChannel::from_kraus(kraus), DimensionError);
  EXPECT_THROW(QuantumChannel::from_kraus({}), ValueError);
}

// E(X) = Tr_Abar[(X^T (x) I) Choi] for every channel.
TEST(Channel, ApplyAgreesWithChoi) {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const int din = 1 + trial % 3, dout = 1 + (trial / 3) % 3;
    const auto ch = random_channel(din, dout, 1 + trial % 4, rng);
    const ComplexMatrix x = ginibre(din, din, rng);
    const oracle::Mat lhs = oracle::kron(x.transpose(), oracle::Mat::Identity(dout, dout)) *
                            oracle::Mat(ch.choi().matrix());
    EXPECT_LT(distance(ch.apply(x), oracle::trace_out_first(lhs, din, dout)), 1e-12);
    EXPECT_LT(ch.trace_preservation_defect(), 1e-12);
  }
}

TEST(Channel, FromChoiRoundTrip) {
  Rng rng(22);
  for (int trial = 0; trial < 8; ++trial) {
    const auto ch = random_channel(2 + trial % 2, 2 + (trial / 2) % 2, 3, rng);
    const auto back = QuantumChannel::from_choi(ch.choi(), ch.dim_in(), ch.dim_out());
    EXPECT_LT(max_abs_entry(back.choi().matrix() - ch.choi().matrix()), 1e-12);
  }
  const auto dep = depolarising_channel(2, 0.15);
  const auto back = QuantumChannel::from_choi(dep.choi(), 2, 2);
  EXPECT_LT(max_abs_entry(back.choi().matrix() - dep.choi().matrix()), 1e-10);
}

TEST(Channel, FromChoiRejectsBadInput) {
  EXPECT_THROW(QuantumChannel::from_choi(HermitianOperator::identity(4), 2, 2), ValueError);
  EXPECT_THROW(QuantumChannel::from_choi(HermitianOperator::identity(5), 2, 2), DimensionError);
}

TEST(Channel, ConstantChannel) {
  Rng rng(23);
  const auto sigma = random_density_matrix(3, rng);
  const auto ch = QuantumChannel::constant(2, sigma);
  const auto rho = random_density_matrix(2, rng);
  EXPECT_LT(max_abs_entry(apply_channel(ch, rho).matrix() - sigma.matrix()), 1e-13);
}

TEST(Channel, ApplyToAMatchesKraus) {
  Rng rng(24);
  const auto ch = random_channel(2, 3, 2, rng);
  const auto x = random_hermitian(4, rng);
  oracle::Mat expected = oracle::Mat::Zero(6, 6);
  for (const auto& k : ch.kraus()) {
    const oracle::Mat big = oracle::kron(oracle::Mat::Identity(2, 2), k);
    expected += big * oracle::Mat(x.matrix()) * big.adjoint();
  }
  EXPECT_LT(distance(apply_channel_to_A(ch, x).matrix(), expected), 1e-13);
}

TEST(Channel, TensorProductActsFactorwise) {
  Rng rng(25);
  const auto e = random_channel(2, 2, 2, rng), f = random_channel(2, 3, 3, rng);
  const auto ef = tensor_product(e, f);
  const ComplexMatrix x = ginibre(2, 2, rng), y = ginibre(2, 2, rng);
  EXPECT_LT(max_abs_entry(ef.apply(kron(x, y)) - kron(e.apply(x), f.apply(y))), 1e-12);
}

TEST(Channel, TensorPowerMatchesRepeatedProduct) {
  const auto dep = depolarising_channel(2, 0.15);
  const auto p3 = tensor_power(dep, 3);
  const auto manual = tensor_product(tensor_product(dep, dep), dep);
  EXPECT_EQ(p3.dim_in(), 8);
  EXPECT_LT(max_abs_entry(p3.choi().matrix() - manual.choi().matrix()), 1e-12);
  EXPECT_THROW(tensor_power(dep, 6), DimensionError);
  EXPECT_THROW(tensor_power(dep, 0), ValueError);
}

TEST(Purification, Marginals) {
  Rng rng(26);
  const auto rho = random_density_matrix(3, rng);
  const auto psi = canonical_purification(rho);
  EXPECT_NEAR(max_eigenvalue(psi.op()), 1.0, 1e-12);
  EXPECT_LT(distance(rho.matrix(), oracle::trace_out_first(psi.matrix(), 3, 3)), 1e-12);
  EXPECT_LT(distance(rho.transpose().matrix(), oracle::trace_out_second(psi.matrix(), 3, 3)),
            1e-12);
}

TEST(Entropy, MutualInformationDepolarising) {
  const auto dep = depolarising_channel(2, 0.15);
  const double info = mutual_information(dep, DensityMatrix::maximally_mixed(2));
  EXPECT_NEAR(info, kDepolInfo, 1e-12);
  // Oracle: isotropic joint state, entropies from an independent eigensolver.
  const oracle::Mat joint = oracle::Mat(dep.choi().matrix()) / 2.0;
  const double expected = oracle::entropy_bits(oracle::trace_out_first(joint, 2, 2)) +
                          oracle::entropy_bits(oracle::trace_out_second(joint, 2, 2)) -
                          oracle::entropy_bits(joint);
  EXPECT_NEAR(info, expected, 1e-12);
}

TEST(Entropy, MutualInformationExtremes) {
  for (int d : {2, 3}) {
    EXPECT_NEAR(mutual_information(QuantumChannel::identity(d), DensityMatrix::maximally_mixed(d)),
                2 * std::log2(d), 1e-12);
    const auto c = QuantumChannel::constant(d, DensityMatrix::maximally_mixed(2));
    EXPECT_NEAR(mutual_information(c, DensityMatrix::maximally_mixed(d)), 0.0, 1e-12);
  }
}

TEST(Entropy, RandomStatesMatchOracle) {
  Rng rng(27);
  for (int d = 1; d <= 5; ++d) {
    const auto rho = random_density_matrix(d, rng);
    EXPECT_NEAR(von_neumann_entropy(rho), oracle::entropy_bits(rho.matrix()), 1e-12);
    EXPECT_LE(von_neumann_entropy(rho), std::log2(d) + 1e-12);
  }
}

TEST(Entropy, Binary) {
  EXPECT_NEAR(binary_entropy(0.05), kH005, 1e-15);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_relative_entropy(0.3, 0.3), 0.0, 1e-15);
  EXPECT_NEAR(binary_relative_entropy(0.1, 0.5), 1.0 - binary_entropy(0.1), 1e-14);
  EXPECT_THROW(binary_entropy(-0.1), ValueError);
}

TEST(Code, IdentityChannelBasisCode) {
  std::vector<DensityMatrix> states = {DensityMatrix::basis_state(2, 0),
                                       DensityMatrix::basis_state(2, 1)};
  std::vector<HermitianOperator> povm = {states[0].op(), states[1].op()};
  const Code code(states, povm);
  EXPECT_NEAR(code.success_probability(QuantumChannel::identity(2)), 1.0, 1e-15);
  EXPECT_NEAR(code.success_probability(depolarising_channel(2, 0.15)), 1 - 0.15 / 2, 1e-14);
}

TEST(Code, RejectsBadPovm) {
  std::vector<DensityMatrix> states = {DensityMatrix::basis_state(2, 0)};
  std::vector<HermitianOperator> povm = {0.5 * HermitianOperator::identity(2)};
  EXPECT_THROW(Code(states, povm), ValueError);
}

}  // namespace
}  // namespace qconv
