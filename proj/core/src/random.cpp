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

#include "qconv/random.hpp"

#include <cmath>

namespace qconv {

ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  return g;
}

HermitianOperator random_hermitian(int dim, Rng& rng) {
  return HermitianOperator::symmetrized(ginibre(dim, dim, rng));
}

namespace {

// Orthonormal columns from QR, with the phase of R's diagonal removed so the
// distribution is Haar.
ComplexMatrix orthonormal_columns(const ComplexMatrix& g) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr{Eigen::MatrixXcd(g)};
  const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(g.rows(), g.cols());
  const Eigen::MatrixXcd r = qr.matrixQR();
  ComplexMatrix out = q;
  for (Eigen::Index c = 0; c < g.cols(); ++c) {
    const Complex d = r(c, c);
    if (std::abs(d) > 0.0) out.col(c) *= d / std::abs(d);
  }
  return out;
}

}  // namespace

ComplexMatrix random_unitary(int dim, Rng& rng) {
  return orthonormal_columns(ginibre(dim, dim, rng));
}

DensityMatrix random_density_matrix(int dim, Rng& rng, int rank) {
  const ComplexMatrix g = ginibre(dim, rank > 0 ? rank : dim, rng);
  const ComplexMatrix rho = g * g.adjoint();
  return DensityMatrix(HermitianOperator::symmetrized(rho / rho.trace().real()));
}

DensityMatrix random_pure_state(int dim, Rng& rng) {
  const ComplexMatrix g = ginibre(dim, 1, rng);
  return DensityMatrix::pure(g.col(0));
}

QuantumChannel random_channel(int dim_in, int dim_out, int kraus_count, Rng& rng) {
  // The Stinespring isometry needs dim_out * kraus_count >= dim_in.
  if (kraus_count < 1 || dim_out * kraus_count < dim_in)
    throw ValueError("random_channel: need dim_out * kraus_count >= dim_in");
  const ComplexMatrix v = orthonormal_columns(ginibre(dim_out * kraus_count, dim_in, rng));
  std::vector<ComplexMatrix> kraus;
  for (int k = 0; k < kraus_count; ++k) kraus.push_back(v.block(k * dim_out, 0, dim_out, dim_in));
  return QuantumChannel::from_kraus(std::move(kraus));
}

std::vector<HermitianOperator> random_povm(int dim, int outcomes, Rng& rng) {
  std::vector<HermitianOperator> raw;
  HermitianOperator total = HermitianOperator::zero(dim);
  for (int i = 0; i < outcomes; ++i) {
    const ComplexMatrix g = ginibre(dim, dim, rng);
    raw.push_back(HermitianOperator::symmetrized(g * g.adjoint()));
    total += raw.back();
  }
  const HermitianOperator root = inverse_sqrt_on_support(total);
  std::vector<HermitianOperator> out;
  for (const auto& e : raw)
    out.push_back(HermitianOperator::symmetrized(root.matrix() * e.matrix() * root.matrix()));
  return out;
}

std::vector<double> random_distribution(int size, Rng& rng) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> p(static_cast<size_t>(size));
  double s = 0.0;
  for (auto& v : p) s += (v = exp1(rng));
  for (auto& v : p) v /= s;
  return p;
}

StochasticMatrix random_stochastic_matrix(int outputs, int inputs, Rng& rng) {
  Eigen::MatrixXd w(outputs, inputs);
  for (int x = 0; x < inputs; ++x) {
    const auto col = random_distribution(outputs, rng);
    for (int y = 0; y < outputs; ++y) w(y, x) = col[static_cast<size_t>(y)];
  }
  return StochasticMatrix(std::move(w));
}

}  // namespace qconv
