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

#include <random>
#include <vector>

#include "qconv/bounds.hpp"
#include "qconv/quantum.hpp"

namespace qconv {

/// Random instances for tests and benchmarks. All draws come from the
/// caller's engine, so a fixed seed gives a fixed instance.
using Rng = std::mt19937_64;

/// i.i.d. standard complex Gaussian entries.
ComplexMatrix ginibre(int rows, int cols, Rng& rng);
HermitianOperator random_hermitian(int dim, Rng& rng);
/// Haar-distributed unitary.
ComplexMatrix random_unitary(int dim, Rng& rng);
/// G G† / Tr for a dim × rank Ginibre G.
DensityMatrix random_density_matrix(int dim, Rng& rng, int rank = 0);
DensityMatrix random_pure_state(int dim, Rng& rng);
/// Stinespring isometry split into `kraus_count` blocks.
QuantumChannel random_channel(int dim_in, int dim_out, int kraus_count, Rng& rng);
/// Normalized rank-one-ish elements S^{-1/2} G_i S^{-1/2}.
std::vector<HermitianOperator> random_povm(int dim, int outcomes, Rng& rng);
/// Columns drawn uniformly from the simplex.
StochasticMatrix random_stochastic_matrix(int outputs, int inputs, Rng& rng);
std::vector<double> random_distribution(int size, Rng& rng);

}  // namespace qconv
