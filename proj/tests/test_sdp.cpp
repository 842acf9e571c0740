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
#include <thread>

#include "qconv/random.hpp"
#include "qconv/sdp.hpp"
#include "support/oracles.hpp"

namespace qconv {
namespace {

using Entry = SparseHermitian::Entry;

Constraint scalar_constraint(int block, double coef, Sense sense, double rhs) {
  Constraint c;
  c.terms.push_back({block, SparseHermitian::scalar(coef)});
  c.sense = sense;
  c.rhs = rhs;
  return c;
}

// <A, X> = Re X(a, b) or Im X(a, b) for an off-diagonal entry.
SparseHermitian entry_selector(int dim, int a, int b, bool imaginary) {
  if (a == b) return SparseHermitian::from_full_triplets(dim, {{a, a, 1.0}});
  if (imaginary)
    return SparseHermitian::from_full_triplets(dim, {{a, b, Complex(0, 0.5)}, {b, a, Complex(0, -0.5)}});
  return SparseHermitian::from_full_triplets(dim, {{a, b, 0.5}, {b, a, 0.5}});
}

BlockMap map_of(int block, BlockMap::Kind kind, double coefficient = 1.0, int dim_a = 1,
                int dim_b = 1) {
  BlockMap m;
  m.block = block;
  m.kind = kind;
  m.coefficient = coefficient;
  m.dim_a = dim_a;
  m.dim_b = dim_b;
  return m;
}

BlockMap identity_map(int block, int dim, double coefficient = 1.0) {
  return map_of(block, BlockMap::Kind::Identity, coefficient, dim);
}

void expect_certified(const SdpProblem& problem, const SdpSolution& sol) {
  ASSERT_EQ(sol.status, Status::Optimal) << sol.message;
  const auto report = verify(problem, sol);
  EXPECT_TRUE(report.ok()) << (report.findings.empty() ? "" : report.findings.front());
}

TEST(SparseHermitian, InnerMatchesDense) {
  Rng rng(41);
  const auto a = random_hermitian(4, rng), x = random_hermitian(4, rng);
  const auto s = SparseHermitian::from_dense(a);
  EXPECT_NEAR(s.inner(x.matrix()), inner_product(a, x), 1e-12);
  EXPECT_LT(max_abs_entry(s.to_dense().matrix() - a.matrix()), 1e-15);
  EXPECT_NEAR(s.frobenius_norm(), a.matrix().norm(), 1e-12);
}

TEST(SparseHermitian, SelectorPicksEntries) {
  ComplexMatrix x(2, 2);
  x << 1.0, Complex(0.3, -0.7), Complex(0.3, 0.7), 2.0;
  EXPECT_NEAR(entry_selector(2, 0, 1, false).inner(x), 0.3, 1e-15);
  EXPECT_NEAR(entry_selector(2, 0, 1, true).inner(x), -0.7, 1e-15);
}

TEST(SdpProblem, ValidateCatchesMismatch) {
  SdpProblem p;
  const int b = p.add_block(2);
  Constraint c;
  c.terms.push_back({b, SparseHermitian::identity(3)});
  p.add_constraint(c);
  EXPECT_THROW(p.validate(), DimensionError);
  EXPECT_THROW(solve(p), DimensionError);
}

TEST(SdpFixture, ScalarLowerBound) {
  SdpProblem p;
  const int x = p.add_block(1);
  p.add_objective(x, SparseHermitian::scalar(1));
  p.add_constraint(scalar_constraint(x, 1, Sense::GreaterEqual, 1));
  const auto sol = solve(p);
  expect_certified(p, sol);
  EXPECT_NEAR(sol.primal_objective, 1.0, 1e-7);
  EXPECT_NEAR(sol.dual_multipliers.at(0), 1.0, 1e-6);
}

TEST(SdpFixture, TraceAboveIdentity) {
  for (int d : {1, 2, 4}) {
    SdpProblem p;
    const int x = p.add_block(d), s = p.add_block(d);
    p.add_objective(x, SparseHermitian::identity(d));
    add_hermitian_equality(p, {identity_map(x, d), identity_map(s, d, -1.0)},
                           HermitianOperator::identity(d));
    const auto sol = solve(p);
    expect_certified(p, sol);
    EXPECT_NEAR(sol.primal_objective, d, 1e-7);
  }
}

TEST(SdpFixture, MinimumEigenvalue) {
  Rng rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    const int d = 2 + trial;
    const auto c = random_hermitian(d, rng);
    SdpProblem p;
    const int x = p.add_block(d);
    p.add_objective(x, SparseHermitian::from_dense(c));
    Constraint tr;
    tr.terms.push_back({x, SparseHermitian::identity(d)});
    tr.rhs = 1;
    p.add_constraint(tr);
    const auto sol = solve(p);
    expect_certified(p, sol);
    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::Mat(c.matrix()));
    EXPECT_NEAR(sol.primal_objective, es.eigenvalues()(0), 1e-7);
  }
}

TEST(SdpFixture, KyFanSumOfTopEigenvalues) {
  Rng rng(43);
  const int d = 5;
  const auto c = random_hermitian(d, rng);
  SdpProblem p;
  const int x = p.add_block(d), s = p.add_block(d);
  auto neg = SparseHermitian::from_dense(c);
  neg *= -1.0;
  p.add_objective(x, neg);
  Constraint tr;
  tr.terms.push_back({x, SparseHermitian::identity(d)});
  tr.rhs = 2;
  p.add_constraint(tr);
  // X + S = I keeps X <= I.
  add_hermitian_equality(p, {identity_map(x, d), identity_map(s, d)},
                         HermitianOperator::identity(d));
  const auto sol = solve(p);
  expect_certified(p, sol);
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::Mat(c.matrix()));
  EXPECT_NEAR(-sol.primal_objective, es.eigenvalues()(d - 1) + es.eigenvalues()(d - 2), 1e-7);
}

TEST(SdpFixture, OperatorNorm) {
  Rng rng(44);
  const int d = 4;
  const auto c = random_hermitian(d, rng);
  // min t  s.t.  tI - C = S1 >= 0,  tI + C = S2 >= 0.
  SdpProblem p;
  const int t = p.add_block(1), s1 = p.add_block(d), s2 = p.add_block(d);
  p.add_objective(t, SparseHermitian::scalar(1));
  BlockMap scaled = map_of(t, BlockMap::Kind::ScalarTimes);
  scaled.fixed = HermitianOperator::identity(d);
  add_hermitian_equality(p, {scaled, identity_map(s1, d, -1.0)}, c);
  add_hermitian_equality(p, {scaled, identity_map(s2, d, -1.0)}, -1.0 * c);
  const auto sol = solve(p);
  expect_certified(p, sol);
  Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::Mat(c.matrix()));
  EXPECT_NEAR(sol.primal_objective, es.eigenvalues().cwiseAbs().maxCoeff(), 1e-7);
}

TEST(SdpFixture, LovaszThetaOfPentagon) {
  const int n = 5;
  SdpProblem p;
  const int x = p.add_block(n);
  std::vector<Entry> all;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) all.push_back({i, j, -1.0});
  p.add_objective(x, SparseHermitian::from_full_triplets(n, all));
  Constraint tr;
  tr.terms.push_back({x, SparseHermitian::identity(n)});
  tr.rhs = 1;
  p.add_constraint(tr);
  for (int i = 0; i < n; ++i) {
    Constraint edge;
    edge.terms.push_back({x, entry_selector(n, i, (i + 1) % n, false)});
    p.add_constraint(edge);
  }
  const auto sol = solve(p);
  expect_certified(p, sol);
  EXPECT_NEAR(-sol.primal_objective, std::sqrt(5.0), 1e-7);
}

TEST(SdpFixture, MaxCutTriangle) {
  // Goemans-Williamson relaxation of K3: value 9/4.
  const int n = 3;
  SdpProblem p;
  const int x = p.add_block(n);
  std::vector<Entry> c;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) c.push_back({i, j, 0.25});
  // Cut value is 3/2 minus the objective sum_{i<j} X_ij / 2.
  p.add_objective(x, SparseHermitian::from_full_triplets(n, c));
  for (int i = 0; i < n; ++i) {
    Constraint diag;
    diag.terms.push_back({x, entry_selector(n, i, i, false)});
    diag.rhs = 1;
    p.add_constraint(diag);
  }
  const auto sol = solve(p);
  expect_certified(p, sol);
  EXPECT_NEAR(1.5 - sol.primal_objective, 2.25, 1e-7);
}

TEST(SdpFixture, ComplexObjective) {
  ComplexMatrix c(2, 2);
  c << 1.0, Complex(0, 1), Complex(0, -1), 1.0;
  SdpProblem p;
  const int x = p.add_block(2);
  p.add_objective(x, SparseHermitian::from_dense(HermitianOperator(c)));
  Constraint tr;
  tr.terms.push_back({x, SparseHermitian::identity(2)});
  tr.rhs = 1;
  p.add_constraint(tr);
  const auto sol = solve(p);
  expect_certified(p, sol);
  EXPECT_NEAR(sol.primal_objective, 0.0, 1e-7);
  // The minimizer is the kernel vector (1, i)/sqrt(2) up to phase.
  const ComplexMatrix& xm = sol.primal_blocks.at(0).matrix();
  EXPECT_NEAR(xm(0, 1).imag(), -0.5, 1e-4);
}

TEST(SdpFixture, RootFidelity) {
  Rng rng(45);
  for (int trial = 0; trial < 3; ++trial) {
    const int d = 2 + trial % 2;
    const auto rho = random_density_matrix(d, rng), sigma = random_density_matrix(d, rng);
    // max Re Tr Y  s.t.  [[rho, Y], [Y^dag, sigma]] >= 0.
    SdpProblem p;
    const int z = p.add_block(2 * d);
    std::vector<Entry> c;
    for (int i = 0; i < d; ++i) {
      c.push_back({i, d + i, -0.5});
      c.push_back({d + i, i, -0.5});
    }
    p.add_objective(z, SparseHermitian::from_full_triplets(2 * d, c));
    for (int off : {0, d}) {
      const ComplexMatrix& target = off == 0 ? rho.matrix() : sigma.matrix();
      for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
          Constraint re;
          re.terms.push_back({z, entry_selector(2 * d, off + a, off + b, false)});
          re.rhs = target(a, b).real();
          p.add_constraint(re);
          if (a == b) continue;
          Constraint im;
          im.terms.push_back({z, entry_selector(2 * d, off + a, off + b, true)});
          im.rhs = -target(a, b).imag();
          p.add_constraint(im);
        }
    }
    const auto sol = solve(p);
    expect_certified(p, sol);
    EXPECT_NEAR(-sol.primal_objective, oracle::root_fidelity(rho.matrix(), sigma.matrix()), 1e-7);
  }
}

TEST(SdpFixture, TwoBlockCoupling) {
  // min x + 2y  s.t.  x + y >= 3,  x - y <= 1,  x, y >= 0: optimum 4 at (2, 1).
  SdpProblem p;
  const int x = p.add_block(1), y = p.add_block(1);
  p.add_objective(x, SparseHermitian::scalar(1));
  p.add_objective(y, SparseHermitian::scalar(2));
  Constraint sum;
  sum.terms = {{x, SparseHermitian::scalar(1)}, {y, SparseHermitian::scalar(1)}};
  sum.sense = Sense::GreaterEqual;
  sum.rhs = 3;
  p.add_constraint(sum);
  Constraint diff;
  diff.terms = {{x, SparseHermitian::scalar(1)}, {y, SparseHermitian::scalar(-1)}};
  diff.sense = Sense::LessEqual;
  diff.rhs = 1;
  p.add_constraint(diff);
  const auto sol = solve(p);
  expect_certified(p, sol);
  EXPECT_NEAR(sol.primal_objective, 4.0, 1e-7);
  EXPECT_GE(sol.dual_multipliers.at(0), -1e-9);
  EXPECT_LE(sol.dual_multipliers.at(1), 1e-9);
}

TEST(SdpFixture, PartialTraceConstraint) {
  // min <C, X>  s.t.  Tr_A X = I_B / dB  over X on A (x) B: optimum is dB^-1 * sum of the
  // smallest eigenvalue of each block when C = C_A (x) I_B.
  Rng rng(46);
  const int da = 2, db = 3;
  const auto ca = random_hermitian(da, rng);
  const auto c = kron(ca, HermitianOperator::identity(db));
  SdpProblem p;
  const int x = p.add_block(da * db);
  p.add_objective(x, SparseHermitian::from_dense(c));
  add_hermitian_equality(p, {map_of(x, BlockMap::Kind::TraceOutA, 1.0, da, db)},
                         (1.0 / db) * HermitianOperator::identity(db));
  const auto sol = solve(p);
  expect_certified(p, sol);
  EXPECT_NEAR(sol.primal_objective, min_eigenvalue(ca), 1e-7);
}

TEST(SdpFixture, PrimalInfeasible) {
  SdpProblem p;
  const int x = p.add_block(1);
  p.add_objective(x, SparseHermitian::scalar(1));
  p.add_constraint(scalar_constraint(x, 1, Sense::LessEqual, -1));
  EXPECT_EQ(solve(p).status, Status::PrimalInfeasible);
}

TEST(SdpFixture, DualInfeasible) {
  SdpProblem p;
  const int x = p.add_block(1), y = p.add_block(1);
  p.add_objective(x, SparseHermitian::scalar(-1));
  Constraint c;
  c.terms = {{x, SparseHermitian::scalar(1)}, {y, SparseHermitian::scalar(-1)}};
  p.add_constraint(c);
  EXPECT_EQ(solve(p).status, Status::DualInfeasible);
}

TEST(SdpFixture, NoConstraints) {
  SdpProblem p;
  const int x = p.add_block(2);
  p.add_objective(x, SparseHermitian::identity(2));
  EXPECT_EQ(solve(p).status, Status::Optimal);
  SdpProblem q;
  const int y = q.add_block(2);
  q.add_objective(y, SparseHermitian::identity(2, -1.0));
  EXPECT_EQ(solve(q).status, Status::DualInfeasible);
}

TEST(SdpFixture, IterationLimitReported) {
  SdpProblem p;
  const int x = p.add_block(3);
  p.add_objective(x, SparseHermitian::identity(3));
  Constraint tr;
  tr.terms.push_back({x, SparseHermitian::identity(3)});
  tr.rhs = 1;
  p.add_constraint(tr);
  SolverOptions opts;
  opts.max_iterations = 1;
  EXPECT_EQ(solve(p, opts).status, Status::IterationLimit);
}

TEST(SdpSolver, StrongDualityOnRandomProblems) {
  // Random feasible, bounded problems: min <C, X>, <A_i, X> = <A_i, X0>, C = Z0 + sum y_i A_i.
  Rng rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + trial % 3;
    const int m = 1 + trial % 4;
    const auto x0 = random_density_matrix(d, rng);
    SdpProblem p;
    const int x = p.add_block(d);
    HermitianOperator c = random_density_matrix(d, rng).op();
    for (int i = 0; i < m; ++i) {
      const auto a = random_hermitian(d, rng);
      Constraint con;
      con.terms.push_back({x, SparseHermitian::from_dense(a)});
      con.rhs = inner_product(a, x0.op());
      p.add_constraint(con);
      c += (0.3 * (i + 1)) * a;
    }
    p.add_objective(x, SparseHermitian::from_dense(c));
    const auto sol = solve(p);
    expect_certified(p, sol);
    EXPECT_LE(std::abs(sol.primal_objective - sol.dual_objective),
              1e-7 * (1 + std::abs(sol.primal_objective)));
  }
}

TEST(SdpSolver, DistinctInstancesRunConcurrently) {
  // Same fixture solved from several threads gives identical answers.
  SdpProblem p;
  const int n = 5;
  const int x = p.add_block(n);
  std::vector<Entry> all;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) all.push_back({i, j, -1.0});
  p.add_objective(x, SparseHermitian::from_full_triplets(n, all));
  Constraint tr;
  tr.terms.push_back({x, SparseHermitian::identity(n)});
  tr.rhs = 1;
  p.add_constraint(tr);
  std::vector<double> values(4);
  std::vector<std::thread> pool;
  for (size_t t = 0; t < values.size(); ++t)
    pool.emplace_back([&, t] { values[t] = InteriorPointSolver().solve(p).primal_objective; });
  for (auto& th : pool) th.join();
  for (double v : values) EXPECT_EQ(v, values.front());
  EXPECT_NEAR(-values.front(), n, 1e-7);
}

}  // namespace
}  // namespace qconv
