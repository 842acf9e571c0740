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

#include "qconv/bounds.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qconv {

std::string to_string(TestClass cls) {
  switch (cls) {
    case TestClass::All:
      return "ALL";
    case TestClass::Ppt:
      return "PPT";
    case TestClass::Lc1:
      return "LC1";
    case TestClass::L:
      return "L";
  }
  return "?";
}

TestClass parse_test_class(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "all") return TestClass::All;
  if (lower == "ppt") return TestClass::Ppt;
  if (lower == "lc1") return TestClass::Lc1;
  if (lower == "l") return TestClass::L;
  throw ValueError("unknown test class '" + std::string(text) + "' (expected all, ppt, lc1 or l)");
}

namespace {

void require_computable(TestClass cls) {
  if (cls == TestClass::Lc1 || cls == TestClass::L) {
    throw NotComputable("test class " + to_string(cls) +
                        " has no semidefinite formulation; only ALL and PPT are computable");
  }
}

double sdp_epsilon(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) {
    std::ostringstream msg;
    msg << "eps = " << eps << " outside [0, 1)";
    throw ValueError(msg.str());
  }
  return std::max(eps, kSdpEpsilonFloor);
}

void require_state_dim(const QuantumChannel& channel, const DensityMatrix& rho) {
  if (rho.dim() != channel.dim_in()) {
    throw DimensionError("input state dimension " + std::to_string(rho.dim()) +
                         " does not match channel input dimension " +
                         std::to_string(channel.dim_in()));
  }
}

BlockMap map_of(int block, BlockMap::Kind kind, int dim_a, int dim_b, double coefficient = 1.0) {
  BlockMap m;
  m.block = block;
  m.kind = kind;
  m.dim_a = dim_a;
  m.dim_b = dim_b;
  m.coefficient = coefficient;
  return m;
}

BlockMap scalar_map(int block, const HermitianOperator& k, double coefficient) {
  BlockMap m;
  m.block = block;
  m.kind = BlockMap::Kind::ScalarTimes;
  m.fixed = k;
  m.coefficient = coefficient;
  return m;
}

struct PrimalBlocks {
  int r = -1;
  int lambda = -1;
  int rho = -1;
};

// Primal program in (R, λ[, ρ_Ā]). With rho_bar absent, ρ_Ā is a variable.
SdpProblem build_primal(const HermitianOperator& choi, DimPair dims,
                        const std::optional<DensityMatrix>& rho_bar, double eps, TestClass cls,
                        PrimalBlocks& blocks) {
  using Kind = BlockMap::Kind;
  const int da = dims.dim_a;
  const int db = dims.dim_b;
  const int n = da * db;
  SdpProblem problem;
  blocks.r = problem.add_block(n);
  blocks.lambda = problem.add_block(1);
  problem.add_objective(blocks.lambda, SparseHermitian::scalar(1.0));

  // Tr_Ā R + S = λ I_B
  const int s_trace = problem.add_block(db);
  add_hermitian_equality(problem,
                         {map_of(blocks.r, Kind::TraceOutA, da, db),
                          map_of(s_trace, Kind::Identity, db, 1),
                          scalar_map(blocks.lambda, HermitianOperator::identity(db), -1.0)},
                         HermitianOperator::zero(db));

  Constraint fidelity;
  fidelity.terms.emplace_back(blocks.r, SparseHermitian::from_dense(choi));
  fidelity.rhs = 1.0 - eps;
  fidelity.sense = Sense::GreaterEqual;
  problem.add_constraint(std::move(fidelity));

  // Upper bound ρ_Ā ⊗ I, either fixed data or the variable block.
  HermitianOperator upper_rhs = HermitianOperator::zero(n);
  std::vector<BlockMap> upper_var;
  if (rho_bar) {
    upper_rhs = kron(rho_bar->op(), HermitianOperator::identity(db));
  } else {
    blocks.rho = problem.add_block(da);
    upper_var.push_back(map_of(blocks.rho, Kind::TensorIdentity, da, db, -1.0));
    Constraint unit;
    unit.terms.emplace_back(blocks.rho, SparseHermitian::identity(da));
    unit.rhs = 1.0;
    problem.add_constraint(std::move(unit));
  }

  auto add_upper = [&](Kind kind) {
    const int slack = problem.add_block(n);
    std::vector<BlockMap> maps = {map_of(blocks.r, kind, da, db),
                                  map_of(slack, Kind::Identity, n, 1)};
    maps.insert(maps.end(), upper_var.begin(), upper_var.end());
    add_hermitian_equality(problem, maps, upper_rhs);
  };
  add_upper(Kind::Identity);

  if (cls == TestClass::Ppt) {
    // R^{T_B} = P ⪰ 0 and R^{T_B} ≤ ρ_Ā ⊗ I.
    const int p = problem.add_block(n);
    add_hermitian_equality(problem,
                           {map_of(blocks.r, Kind::PartialTransposeB, da, db),
                            map_of(p, Kind::Identity, n, 1, -1.0)},
                           HermitianOperator::zero(n));
    add_upper(Kind::PartialTransposeB);
  }
  return problem;
}

SolverDiagnostics diagnostics_from(const SdpProblem& problem, const SdpSolution& sol) {
  SolverDiagnostics d;
  d.solver = "interior-point";
  d.status = sol.status;
  d.iterations = sol.iterations;
  d.primal_objective = sol.primal_objective;
  d.dual_objective = sol.dual_objective;
  d.relative_gap = sol.relative_gap;
  d.message = sol.message;
  if (!sol.primal_blocks.empty()) {
    d.max_constraint_violation = verify(problem, sol).max_constraint_violation;
  }
  return d;
}

void require_optimal(const SdpSolution& sol, const char* what) {
  if (sol.status != Status::Optimal) {
    throw SolverError(std::string(what) + ": solver finished with status " +
                      to_string(sol.status) + " (" + sol.message + ")");
  }
}

long double checked_beta(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << what << ": optimal value " << value << " is not a positive type-II error";
    throw SolverError(msg.str());
  }
  return std::min(1.0L, static_cast<long double>(value));
}

double bits_of(long double beta) {
  return static_cast<double>(-std::log2(beta));
}

DensityMatrix normalized_state(const HermitianOperator& x) {
  // Clip roundoff negativity before renormalizing.
  const auto eig = eigh(x);
  HermitianOperator clipped = spectral_map(eig, [](double w) { return std::max(w, 0.0); });
  return DensityMatrix(clipped * (1.0 / clipped.trace()));
}

// σ* = uniform mixture over the top eigenspace of Tr_Ā R*.
DensityMatrix top_eigenspace_state(const HermitianOperator& x, double* top) {
  const auto eig = eigh(x);
  const double w_max = eig.values.back();
  *top = w_max;
  int count = 0;
  for (double w : eig.values)
    if (w >= w_max - 1e-8) ++count;
  return DensityMatrix(spectral_map(eig, [&](double w) {
    return w >= w_max - 1e-8 ? 1.0 / count : 0.0;
  }));
}

BoundResult finish_primal(const SdpProblem& problem, const SdpSolution& sol,
                          const PrimalBlocks& blocks, DimPair dims, double eps, TestClass cls,
                          const char* what) {
  require_optimal(sol, what);
  BoundResult out;
  out.epsilon = eps;
  out.test_class = cls;
  out.diagnostics = diagnostics_from(problem, sol);
  out.beta = checked_beta(sol.primal_objective, what);
  out.bits = bits_of(out.beta);
  const HermitianOperator& r = sol.primal_blocks[static_cast<size_t>(blocks.r)];
  out.optimal_r = r;
  double top = 0.0;
  out.optimal_sigma = top_eigenspace_state(partial_trace(r, dims, Subsystem::A), &top);
  out.diagnostics.sigma_certificate_gap = std::abs(top - sol.primal_objective);
  return out;
}

}  // namespace

ChannelHypothesis make_hypothesis(const QuantumChannel& channel, const DensityMatrix& rho) {
  require_state_dim(channel, rho);
  const DimPair dims = channel.choi_dims();
  DensityMatrix rho_bar = rho.transpose();
  const ComplexMatrix root =
      kron(sqrt_psd(rho_bar.op()).matrix(),
           ComplexMatrix::Identity(channel.dim_out(), channel.dim_out()));
  const ComplexMatrix joint = root * channel.choi().matrix() * root;
  return ChannelHypothesis{channel.choi(), std::move(rho_bar),
                           normalized_state(HermitianOperator::symmetrized(joint)), dims};
}

double beta_for_sigma(const QuantumChannel& channel, const DensityMatrix& rho,
                      const DensityMatrix& sigma, double eps) {
  if (sigma.dim() != channel.dim_out())
    throw DimensionError("beta_for_sigma: sigma dimension does not match channel output");
  const auto h = make_hypothesis(channel, rho);
  return quantum_np_beta(h.joint, kron(h.rho_bar, sigma), eps).beta;
}

BoundResult ea_bound(const QuantumChannel& channel, const DensityMatrix& rho, double eps,
                     TestClass cls, const SolverOptions& options) {
  require_computable(cls);
  require_state_dim(channel, rho);
  const double e = sdp_epsilon(eps);
  const DimPair dims = channel.choi_dims();
  PrimalBlocks blocks;
  const SdpProblem problem = build_primal(channel.choi(), dims, rho.transpose(), e, cls, blocks);
  const SdpSolution sol = solve(problem, options);
  BoundResult out = finish_primal(problem, sol, blocks, dims, eps, cls, "ea_bound");
  out.optimal_rho = rho;
  return out;
}

BoundResult ea_bound_dual(const QuantumChannel& channel, const DensityMatrix& rho, double eps,
                          const SolverOptions& options) {
  using Kind = BlockMap::Kind;
  require_state_dim(channel, rho);
  const double e = sdp_epsilon(eps);
  const int da = channel.dim_in();
  const int db = channel.dim_out();
  const int n = da * db;

  // minimize Tr[F(ρ_Ā⊗I)] − (1−ε)μ over G, F, μ ⪰ 0 with I⊗G + F − μ·Choi = S ⪰ 0.
  SdpProblem problem;
  const int g = problem.add_block(db);
  const int f = problem.add_block(n);
  const int mu = problem.add_block(1);
  const int s = problem.add_block(n);
  problem.add_objective(
      f, SparseHermitian::from_dense(kron(rho.transpose().op(), HermitianOperator::identity(db))));
  problem.add_objective(mu, SparseHermitian::scalar(-(1.0 - e)));
  add_hermitian_equality(problem,
                         {map_of(g, Kind::IdentityTensor, da, db), map_of(f, Kind::Identity, n, 1),
                          scalar_map(mu, channel.choi(), -1.0),
                          map_of(s, Kind::Identity, n, 1, -1.0)},
                         HermitianOperator::zero(n));
  Constraint trace_g;
  trace_g.terms.emplace_back(g, SparseHermitian::identity(db));
  trace_g.rhs = 1.0;
  trace_g.sense = Sense::LessEqual;
  problem.add_constraint(std::move(trace_g));

  const SdpSolution sol = solve(problem, options);
  require_optimal(sol, "ea_bound_dual");
  BoundResult out;
  out.epsilon = eps;
  out.test_class = TestClass::All;
  out.diagnostics = diagnostics_from(problem, sol);
  out.beta = checked_beta(-sol.primal_objective, "ea_bound_dual");
  out.bits = bits_of(out.beta);
  out.optimal_rho = rho;
  // The optimal G, normalized, is a maximizing σ.
  const HermitianOperator& gm = sol.primal_blocks[static_cast<size_t>(g)];
  if (gm.trace() > 1e-12) out.optimal_sigma = normalized_state(gm);
  return out;
}

BoundResult ea_bound_opt_rho(const QuantumChannel& channel, double eps, TestClass cls,
                             const SolverOptions& options) {
  require_computable(cls);
  const double e = sdp_epsilon(eps);
  const DimPair dims = channel.choi_dims();
  PrimalBlocks blocks;
  const SdpProblem problem = build_primal(channel.choi(), dims, std::nullopt, e, cls, blocks);
  const SdpSolution sol = solve(problem, options);
  BoundResult out = finish_primal(problem, sol, blocks, dims, eps, cls, "ea_bound_opt_rho");
  const HermitianOperator& rho_bar = sol.primal_blocks[static_cast<size_t>(blocks.rho)];
  out.optimal_rho = normalized_state(HermitianOperator::symmetrized(rho_bar.matrix().transpose()));
  return out;
}

// ---------------------------------------------------------------------------
// Classical channels

StochasticMatrix::StochasticMatrix(Eigen::MatrixXd w) : w_(std::move(w)) {
  if (w_.rows() < 1 || w_.cols() < 1) throw DimensionError("StochasticMatrix: empty matrix");
  if (!w_.allFinite()) throw ValueError("StochasticMatrix: non-finite entry");
  if (w_.minCoeff() < 0.0) throw ValueError("StochasticMatrix: negative entry");
  for (Eigen::Index x = 0; x < w_.cols(); ++x) {
    const double s = w_.col(x).sum();
    if (std::abs(s - 1.0) > kTolerance) {
      std::ostringstream msg;
      msg << "StochasticMatrix: column " << x << " sums to " << s;
      throw ValueError(msg.str());
    }
  }
}

QuantumChannel classical_channel(const StochasticMatrix& w) {
  std::vector<ComplexMatrix> kraus;
  for (int x = 0; x < w.inputs(); ++x)
    for (int y = 0; y < w.outputs(); ++y) {
      if (w(y, x) == 0.0) continue;
      ComplexMatrix k = ComplexMatrix::Zero(w.outputs(), w.inputs());
      k(y, x) = std::sqrt(w(y, x));
      kraus.push_back(std::move(k));
    }
  return QuantumChannel::from_kraus(std::move(kraus));
}

namespace {

struct InnerSolution {
  double value = 0.0;
  double t = 0.0;
  std::vector<double> q;
};

// For fixed t: max_q [t(1−ε) − Σ_{x,y} (t p(x)W(y|x) − p(x)q(y))_+]. The
// objective separates over y into convex piecewise-linear pieces; filling
// the steepest segments first is optimal.
InnerSolution best_q_for_t(const StochasticMatrix& w, std::span<const double> p, double t,
                           double eps) {
  struct Segment {
    double slope;
    double length;
    int y;
  };
  const int ny = w.outputs();
  std::vector<Segment> segments;
  for (int y = 0; y < ny; ++y) {
    std::vector<std::pair<double, double>> kinks;  // (t·W(y|x), p(x))
    double mass = 0.0;
    for (int x = 0; x < w.inputs(); ++x) {
      if (p[static_cast<size_t>(x)] <= 0.0 || w(y, x) <= 0.0) continue;
      kinks.emplace_back(t * w(y, x), p[static_cast<size_t>(x)]);
      mass += p[static_cast<size_t>(x)];
    }
    std::sort(kinks.begin(), kinks.end());
    double s = 0.0;
    for (size_t k = 0; k < kinks.size();) {
      const double b = kinks[k].first;
      if (b > s) segments.push_back({-mass, b - s, y});
      s = std::max(s, b);
      while (k < kinks.size() && kinks[k].first == b) mass -= kinks[k++].second;
    }
  }
  std::stable_sort(segments.begin(), segments.end(),
                   [](const Segment& a, const Segment& b) { return a.slope < b.slope; });
  InnerSolution out;
  out.t = t;
  out.q.assign(static_cast<size_t>(ny), 0.0);
  double left = 1.0;
  double gain = 0.0;
  for (const auto& seg : segments) {
    if (left <= 0.0) break;
    const double take = std::min(left, seg.length);
    out.q[static_cast<size_t>(seg.y)] += take;
    gain += take * seg.slope;
    left -= take;
  }
  if (left > 0.0)
    for (auto& qy : out.q) qy += left / ny;
  out.value = -t * eps - gain;
  return out;
}

InnerSolution max_over_q(const StochasticMatrix& w, std::span<const double> p, double eps) {
  // Concave in t on [0, 1/ε]; golden-section search.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.0;
  double hi = 1.0 / eps;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  InnerSolution f1 = best_q_for_t(w, p, x1, eps);
  InnerSolution f2 = best_q_for_t(w, p, x2, eps);
  for (int iter = 0; iter < 400 && hi - lo > 1e-14 * (1.0 + hi); ++iter) {
    if (f1.value < f2.value) {
      lo = x1;
      x1 = x2;
      f1 = std::move(f2);
      x2 = lo + phi * (hi - lo);
      f2 = best_q_for_t(w, p, x2, eps);
    } else {
      hi = x2;
      x2 = x1;
      f2 = std::move(f1);
      x1 = hi - phi * (hi - lo);
      f1 = best_q_for_t(w, p, x1, eps);
    }
  }
  InnerSolution best = f1.value >= f2.value ? std::move(f1) : std::move(f2);
  InnerSolution at_zero = best_q_for_t(w, p, 0.0, eps);
  return at_zero.value > best.value ? at_zero : best;
}

// β̃(p) and a subgradient with respect to p.
struct Evaluation {
  double value;
  std::vector<double> gradient;
  std::vector<double> q;
};

Evaluation evaluate_beta_tilde(const StochasticMatrix& w, std::span<const double> p, double eps) {
  const int nx = w.inputs();
  const int ny = w.outputs();
  Evaluation ev;
  ev.gradient.assign(static_cast<size_t>(nx), 0.0);
  if (eps == 0.0) {
    // Test must accept the whole support: β̃ = max_y Σ_{x: W(y|x)>0} p(x).
    int best_y = 0;
    double best = -1.0;
    for (int y = 0; y < ny; ++y) {
      double s = 0.0;
      for (int x = 0; x < nx; ++x)
        if (w(y, x) > 0.0) s += p[static_cast<size_t>(x)];
      if (s > best) {
        best = s;
        best_y = y;
      }
    }
    for (int x = 0; x < nx; ++x) ev.gradient[static_cast<size_t>(x)] = w(best_y, x) > 0.0;
    ev.value = std::min(1.0, best);
    ev.q.assign(static_cast<size_t>(ny), 0.0);
    ev.q[static_cast<size_t>(best_y)] = 1.0;
    return ev;
  }
  InnerSolution inner = max_over_q(w, p, eps);
  for (int x = 0; x < nx; ++x) {
    double s = 0.0;
    for (int y = 0; y < ny; ++y) s += std::max(0.0, inner.t * w(y, x) - inner.q[static_cast<size_t>(y)]);
    ev.gradient[static_cast<size_t>(x)] = -s;
  }
  ev.value = std::clamp(inner.value, 0.0, 1.0);
  ev.q = std::move(inner.q);
  return ev;
}

std::vector<double> from_reduced(const Eigen::VectorXd& c) {
  std::vector<double> p(static_cast<size_t>(c.size()) + 1);
  double s = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    p[static_cast<size_t>(i)] = c(i);
    s += c(i);
  }
  p.back() = 1.0 - s;
  return p;
}

}  // namespace

std::pair<double, std::vector<double>> classical_max_beta(const StochasticMatrix& w,
                                                          std::span<const double> p, double eps) {
  if (static_cast<int>(p.size()) != w.inputs())
    throw DimensionError("classical_max_beta: input distribution size mismatch");
  if (!(eps >= 0.0 && eps < 1.0)) throw ValueError("classical_max_beta: eps outside [0, 1)");
  auto ev = evaluate_beta_tilde(w, p, eps);
  return {ev.value, std::move(ev.q)};
}

BoundResult classical_converse(const StochasticMatrix& w, double eps,
                               const std::optional<std::vector<double>>& input) {
  if (!(eps >= 0.0 && eps < 1.0)) {
    std::ostringstream msg;
    msg << "classical_converse: eps = " << eps << " outside [0, 1)";
    throw ValueError(msg.str());
  }
  const int nx = w.inputs();
  std::vector<double> best_p;
  Evaluation best{std::numeric_limits<double>::infinity(), {}, {}};
  int iterations = 0;
  auto consider = [&](const std::vector<double>& p) {
    Evaluation ev = evaluate_beta_tilde(w, p, eps);
    if (ev.value < best.value) {
      best = ev;
      best_p = p;
    }
    return ev;
  };

  if (input) {
    ClassicalDistribution check(*input);
    if (static_cast<int>(check.size()) != nx)
      throw DimensionError("classical_converse: input distribution size mismatch");
    consider(*input);
  } else if (nx == 1) {
    consider({1.0});
  } else if (nx == 2) {
    // Bisection on the sign of the subgradient along the segment.
    double lo = 0.0, hi = 1.0;
    for (; iterations < 200 && hi - lo > 1e-15; ++iterations) {
      const double mid = 0.5 * (lo + hi);
      const Evaluation ev = consider({mid, 1.0 - mid});
      const double slope = ev.gradient[0] - ev.gradient[1];
      if (slope > 0.0) {
        hi = mid;
      } else if (slope < 0.0) {
        lo = mid;
      } else {
        break;
      }
    }
    consider({lo, 1.0 - lo});
    consider({hi, 1.0 - hi});
  } else {
    // Central-cut ellipsoid method on {c ≥ 0, Σc ≤ 1} ⊂ R^{nx−1}.
    const int dim = nx - 1;
    Eigen::VectorXd c = Eigen::VectorXd::Constant(dim, 1.0 / nx);
    Eigen::MatrixXd shape = Eigen::MatrixXd::Identity(dim, dim);
    const double nd = dim;
    for (; iterations < 200000; ++iterations) {
      Eigen::VectorXd a(dim);
      Eigen::Index worst;
      const double low = c.minCoeff(&worst);
      bool objective_cut = false;
      if (low < 0.0) {
        a.setZero();
        a(worst) = -1.0;
      } else if (c.sum() > 1.0) {
        a.setOnes();
      } else {
        const Evaluation ev = consider(from_reduced(c));
        for (int i = 0; i < dim; ++i)
          a(i) = ev.gradient[static_cast<size_t>(i)] - ev.gradient.back();
        objective_cut = true;
      }
      const double width = std::sqrt(std::max(0.0, a.dot(shape * a)));
      if (objective_cut && width < 1e-9) break;
      if (width == 0.0) break;
      const Eigen::VectorXd step = shape * a / width;
      c -= step / (nd + 1.0);
      shape = (nd * nd / (nd * nd - 1.0)) * (shape - (2.0 / (nd + 1.0)) * step * step.transpose());
      shape = 0.5 * (shape + shape.transpose()).eval();
    }
    std::vector<double> uniform(static_cast<size_t>(nx), 1.0 / nx);
    consider(uniform);
  }

  BoundResult out;
  out.epsilon = eps;
  out.test_class = TestClass::All;
  out.beta = checked_beta(best.value, "classical_converse");
  out.bits = bits_of(out.beta);
  out.optimal_rho = DensityMatrix(HermitianOperator::diagonal(best_p) *
                                  (1.0 / std::accumulate(best_p.begin(), best_p.end(), 0.0)));
  out.optimal_sigma = DensityMatrix(HermitianOperator::diagonal(best.q) *
                                    (1.0 / std::accumulate(best.q.begin(), best.q.end(), 0.0)));
  out.diagnostics.solver = input ? "fixed-input" : "ellipsoid";
  out.diagnostics.iterations = iterations;
  out.diagnostics.primal_objective = best.value;
  out.diagnostics.dual_objective = best.value;
  out.diagnostics.message = "exact inner problem";
  return out;
}

// ---------------------------------------------------------------------------

BoundResult depolarising_exact(int d, double p, int n, double eps) {
  if (d < 2) throw ValueError("depolarising_exact: d must be >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw ValueError("depolarising_exact: p outside [0, 1]");
  if (n < 1) throw ValueError("depolarising_exact: n must be >= 1");
  if (!(eps >= 0.0 && eps < 1.0)) throw ValueError("depolarising_exact: eps outside [0, 1)");
  const double d2 = static_cast<double>(d) * d;
  const TestResult t = binomial_beta((1.0 - p) + p / d2, 1.0 / d2, n, eps);
  BoundResult out;
  out.epsilon = eps;
  out.test_class = TestClass::All;
  out.n_uses = n;
  out.beta = std::exp2(t.log2_beta);
  out.bits = static_cast<double>(-t.log2_beta);
  out.diagnostics.solver = "binomial";
  out.diagnostics.message = "l = " + std::to_string(t.boundary);
  return out;
}

double wang_renner_chi(const std::vector<std::pair<double, DensityMatrix>>& ensemble,
                       const QuantumChannel& channel, double eps) {
  if (ensemble.empty()) throw ValueError("wang_renner_chi: empty ensemble");
  if (!(eps > 0.0 && eps < 1.0)) throw ValueError("wang_renner_chi: eps outside (0, 1)");
  std::vector<double> probs;
  for (const auto& [prob, state] : ensemble) {
    require_state_dim(channel, state);
    probs.push_back(prob);
  }
  ClassicalDistribution check(probs);
  const int k = static_cast<int>(ensemble.size());
  const int db = channel.dim_out();
  ComplexMatrix joint = ComplexMatrix::Zero(k * db, k * db);
  ComplexMatrix average = ComplexMatrix::Zero(channel.dim_in(), channel.dim_in());
  for (int x = 0; x < k; ++x) {
    const auto& [prob, state] = ensemble[static_cast<size_t>(x)];
    joint.block(x * db, x * db, db, db) = prob * channel.apply(state.matrix());
    average += prob * state.matrix();
  }
  const DensityMatrix tau_cb(HermitianOperator::symmetrized(joint));
  const DensityMatrix tau_c = DensityMatrix::diagonal(probs);
  const DensityMatrix tau_b(
      HermitianOperator::symmetrized(channel.apply(average)), 1e-9);
  const auto r = quantum_np_beta(tau_cb, kron(tau_c, tau_b), eps);
  return static_cast<double>(-r.log2_beta);
}

double fano_bound(const QuantumChannel& channel, const DensityMatrix& rho, double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw ValueError("fano_bound: eps outside [0, 1)");
  return (mutual_information(channel, rho) + binary_entropy(eps)) / (1.0 - eps);
}

DensityMatrix average_state(const DensityMatrix& rho, const std::vector<ComplexMatrix>& unitaries,
                            const std::vector<double>& weights) {
  if (unitaries.empty() || unitaries.size() != weights.size())
    throw ValueError("average_state: need one weight per group element");
  ClassicalDistribution check(weights);
  ComplexMatrix acc = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (size_t g = 0; g < unitaries.size(); ++g) {
    const auto& u = unitaries[g];
    if (u.rows() != rho.dim() || u.cols() != rho.dim())
      throw DimensionError("average_state: group element has the wrong dimension");
    if (!is_unitary(u)) throw ValueError("average_state: group element is not unitary");
    acc += weights[g] * u * rho.matrix() * u.adjoint();
  }
  return DensityMatrix(HermitianOperator::symmetrized(acc));
}

bool verify_covariance(const QuantumChannel& channel, const ComplexMatrix& u,
                       const ComplexMatrix& v) {
  const int din = channel.dim_in();
  const int dout = channel.dim_out();
  if (u.rows() != din || u.cols() != din)
    throw DimensionError("verify_covariance: U does not act on the channel input");
  if (v.rows() != dout || v.cols() != dout)
    throw DimensionError("verify_covariance: V does not act on the channel output");
  if (!is_unitary(u) || !is_unitary(v)) throw ValueError("verify_covariance: non-unitary input");
  for (int i = 0; i < din; ++i)
    for (int j = 0; j < din; ++j) {
      ComplexMatrix unit = ComplexMatrix::Zero(din, din);
      unit(i, j) = 1.0;
      const ComplexMatrix lhs = channel.apply(u * unit * u.adjoint());
      const ComplexMatrix rhs = v * channel.apply(unit) * v.adjoint();
      if (max_abs_entry(lhs - rhs) > 1e-8) return false;
    }
  return true;
}

double noisy_storage_minentropy(double code_rate_bits, const BoundResult& bound) {
  if (code_rate_bits > bound.bits) return -std::log2(1.0 - bound.epsilon);
  return 0.0;
}

std::optional<int> depolarising_overflow_blocklength(int d, double p, double rate_bits,
                                                     double eps, int n_max) {
  for (int n = 1; n <= n_max; ++n)
    if (n * rate_bits > depolarising_exact(d, p, n, eps).bits) return n;
  return std::nullopt;
}

}  // namespace qconv
