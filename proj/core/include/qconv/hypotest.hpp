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

#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qconv/quantum.hpp"

namespace qconv {

/// Probability vector; entries ≥ 0 summing to 1 within 1e-12.
class ClassicalDistribution {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit ClassicalDistribution(std::vector<double> probs);

  size_t size() const { return probs_.size(); }
  double operator[](size_t k) const { return probs_[k]; }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

/// Optimal Neyman–Pearson test summary. The test accepts H0 on outcomes
/// ranked above the boundary, rejects below it, and rejects the boundary
/// outcome (or crossing eigenspace) with probability `gamma`.
struct TestResult {
  double beta = 1.0;
  /// log2(beta); finite even when beta underflows a double.
  long double log2_beta = 0.0L;
  /// Likelihood-ratio threshold p0/p1 (or τ0 − t·τ1 crossing point t).
  double threshold = 0.0;
  double gamma = 0.0;
  double alpha_achieved = 0.0;
  /// Boundary outcome index, or ℓ for the binomial formula; -1 if none.
  long boundary = -1;
};

/// min β(P1, T) subject to α(P0, T) ≤ eps over randomized tests.
TestResult classical_np_beta(const ClassicalDistribution& p0, const ClassicalDistribution& p1,
                             double eps);

/// Exact optimal β for n i.i.d. binary samples, with H0 success probability
/// mu and H1 success probability lambda (lambda ≤ mu). Tails are summed in
/// the log domain in long double.
TestResult binomial_beta(double mu, double lambda, int n, double eps);

using Rational = boost::multiprecision::cpp_rational;

/// Same formula in exact rational arithmetic; returns β.
Rational binomial_beta_exact(const Rational& mu, const Rational& lambda, int n,
                             const Rational& eps);

struct QuantumTestResult : TestResult {
  HermitianOperator test;
};

/// min Tr τ1 T subject to 1 − Tr τ0 T ≤ eps, 0 ≤ T ≤ I.
QuantumTestResult quantum_np_beta(const DensityMatrix& tau0, const DensityMatrix& tau1,
                                  double eps);

}  // namespace qconv
