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

#include "qconv/hypotest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qconv {

namespace {

constexpr long double kNegInf = -std::numeric_limits<long double>::infinity();

void require_epsilon(double eps, const char* where) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    std::ostringstream msg;
    msg << where << ": eps = " << eps << " outside [0, 1]";
    throw ValueError(msg.str());
  }
}

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << "binomial_beta: " << name << " = " << p << " outside [0, 1]";
    throw ValueError(msg.str());
  }
}

// Compensated accumulator.
struct KahanSum {
  long double sum = 0.0L;
  long double carry = 0.0L;

  void add(long double x) {
    const long double y = x - carry;
    const long double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// log of C(n, j) p^j (1-p)^(n-j); -inf where the term vanishes.
long double log_binomial_pmf(int n, int j, long double log_p, long double log_q) {
  long double out = std::lgamma(static_cast<long double>(n) + 1) -
                    std::lgamma(static_cast<long double>(j) + 1) -
                    std::lgamma(static_cast<long double>(n - j) + 1);
  if (j > 0) {
    if (log_p == kNegInf) return kNegInf;
    out += j * log_p;
  }
  if (n - j > 0) {
    if (log_q == kNegInf) return kNegInf;
    out += (n - j) * log_q;
  }
  return out;
}

long double log_add(long double a, long double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const long double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.array() * b.transpose().array()).sum().real();
}

}  // namespace

ClassicalDistribution::ClassicalDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ValueError("ClassicalDistribution: empty");
  KahanSum total;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw ValueError("ClassicalDistribution: entries must be finite and nonnegative");
    total.add(p);
  }
  if (std::abs(static_cast<double>(total.sum) - 1.0) > kTolerance) {
    std::ostringstream msg;
    msg << "ClassicalDistribution: entries sum to " << static_cast<double>(total.sum);
    throw ValueError(msg.str());
  }
}

TestResult classical_np_beta(const ClassicalDistribution& p0, const ClassicalDistribution& p1,
                             double eps) {
  require_epsilon(eps, "classical_np_beta");
  if (p0.size() != p1.size()) throw DimensionError("classical_np_beta: support sizes differ");

  // Rank: outcomes with p1 = 0 < p0 first, then by ratio, then p0 = 0.
  auto group = [&](size_t k) {
    if (p0[k] == 0.0) return 2;
    return p1[k] == 0.0 ? 0 : 1;
  };
  std::vector<size_t> order(p0.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const int ga = group(a);
    const int gb = group(b);
    if (ga != gb) return ga < gb;
    if (ga != 1) return false;
    return static_cast<long double>(p0[a]) * p1[b] > static_cast<long double>(p0[b]) * p1[a];
  });

  TestResult out;
  const long double target = 1.0L - eps;
  KahanSum accepted;
  KahanSum beta;
  if (target > 0.0L) {
    for (size_t k : order) {
      if (p0[k] == 0.0) break;
      const long double remaining = target - accepted.sum;
      if (remaining <= 0.0L) break;
      if (p0[k] <= remaining) {
        accepted.add(p0[k]);
        beta.add(p1[k]);
        continue;
      }
      const long double take = remaining / p0[k];
      accepted.add(take * p0[k]);
      beta.add(take * p1[k]);
      out.gamma = static_cast<double>(1.0L - take);
      out.boundary = static_cast<long>(k);
      out.threshold = p1[k] == 0.0 ? std::numeric_limits<double>::infinity() : p0[k] / p1[k];
      break;
    }
  }
  out.beta = std::clamp(static_cast<double>(beta.sum), 0.0, 1.0);
  out.log2_beta = out.beta > 0.0 ? std::log2(static_cast<long double>(out.beta)) : kNegInf;
  out.alpha_achieved = std::max(0.0, static_cast<double>(1.0L - accepted.sum));
  return out;
}

TestResult binomial_beta(double mu, double lambda, int n, double eps) {
  require_probability(mu, "mu");
  require_probability(lambda, "lambda");
  require_epsilon(eps, "binomial_beta");
  if (n < 1) throw ValueError("binomial_beta: n must be >= 1");
  if (lambda > mu) {
    std::ostringstream msg;
    msg << "binomial_beta: requires lambda <= mu (got lambda = " << lambda << ", mu = " << mu
        << ")";
    throw ValueError(msg.str());
  }

  TestResult out;
  if (eps >= 1.0) {
    out.beta = 0.0;
    out.log2_beta = kNegInf;
    out.alpha_achieved = 1.0;
    out.gamma = 1.0;
    out.boundary = n;
    return out;
  }

  const long double lmu = std::log(static_cast<long double>(mu));
  const long double lmu_c = std::log1p(-static_cast<long double>(mu));
  const long double llam = std::log(static_cast<long double>(lambda));
  const long double llam_c = std::log1p(-static_cast<long double>(lambda));

  // Largest ℓ with α_ℓ ≤ ε, α_ℓ = P0(J < ℓ).
  KahanSum alpha;
  int ell = 0;
  long double pmf_ell = 0.0L;
  for (int j = 0; j <= n; ++j) {
    const long double pmf = std::exp(log_binomial_pmf(n, j, lmu, lmu_c));
    if (j == n || alpha.sum + pmf > eps) {
      ell = j;
      pmf_ell = pmf;
      break;
    }
    alpha.add(pmf);
  }
  const long double gamma =
      pmf_ell > 0.0L ? std::clamp((eps - alpha.sum) / pmf_ell, 0.0L, 1.0L) : 0.0L;

  // β = β_{ℓ+1} + (1 − γ)·P1(J = ℓ), in the log domain.
  std::vector<long double> tail_terms;
  for (int j = ell + 1; j <= n; ++j) tail_terms.push_back(log_binomial_pmf(n, j, llam, llam_c));
  long double log_tail = kNegInf;
  if (!tail_terms.empty()) {
    const long double top = *std::max_element(tail_terms.begin(), tail_terms.end());
    if (top != kNegInf) {
      KahanSum scaled;
      for (long double t : tail_terms) scaled.add(std::exp(t - top));
      log_tail = top + std::log(scaled.sum);
    }
  }
  long double log_beta = log_tail;
  if (gamma < 1.0L) {
    log_beta = log_add(log_tail, std::log1p(-gamma) + log_binomial_pmf(n, ell, llam, llam_c));
  }

  out.boundary = ell;
  out.gamma = static_cast<double>(gamma);
  out.alpha_achieved = static_cast<double>(alpha.sum + gamma * pmf_ell);
  out.log2_beta = log_beta / std::log(2.0L);
  out.beta = static_cast<double>(std::exp(log_beta));
  out.threshold = static_cast<double>(ell);
  return out;
}

Rational binomial_beta_exact(const Rational& mu, const Rational& lambda, int n,
                             const Rational& eps) {
  if (mu < 0 || mu > 1 || lambda < 0 || lambda > 1)
    throw ValueError("binomial_beta_exact: probabilities outside [0, 1]");
  if (lambda > mu) throw ValueError("binomial_beta_exact: requires lambda <= mu");
  if (eps < 0 || eps > 1) throw ValueError("binomial_beta_exact: eps outside [0, 1]");
  if (n < 1) throw ValueError("binomial_beta_exact: n must be >= 1");
  if (eps == 1) return Rational(0);

  auto pmfs = [n](const Rational& p) {
    std::vector<Rational> out(static_cast<size_t>(n) + 1);
    boost::multiprecision::cpp_int choose = 1;
    for (int j = 0; j <= n; ++j) {
      Rational term(choose);
      for (int k = 0; k < j; ++k) term *= p;
      for (int k = 0; k < n - j; ++k) term *= (1 - p);
      out[static_cast<size_t>(j)] = term;
      choose = choose * (n - j) / (j + 1);
    }
    return out;
  };
  const auto p0 = pmfs(mu);
  const auto p1 = pmfs(lambda);

  Rational alpha = 0;
  int ell = 0;
  for (int j = 0; j <= n; ++j) {
    if (j == n || alpha + p0[static_cast<size_t>(j)] > eps) {
      ell = j;
      break;
    }
    alpha += p0[static_cast<size_t>(j)];
  }
  const Rational& pmf = p0[static_cast<size_t>(ell)];
  const Rational gamma = pmf > 0 ? (eps - alpha) / pmf : Rational(0);
  Rational beta = (1 - gamma) * p1[static_cast<size_t>(ell)];
  for (int j = ell + 1; j <= n; ++j) beta += p1[static_cast<size_t>(j)];
  return beta;
}

QuantumTestResult quantum_np_beta(const DensityMatrix& tau0, const DensityMatrix& tau1,
                                  double eps) {
  require_epsilon(eps, "quantum_np_beta");
  if (tau0.dim() != tau1.dim()) throw DimensionError("quantum_np_beta: dimension mismatch");
  const int d = tau0.dim();
  const ComplexMatrix& t0 = tau0.matrix();
  const ComplexMatrix& t1 = tau1.matrix();

  QuantumTestResult out;
  auto finish = [&](HermitianOperator test) {
    out.test = std::move(test);
    out.beta = std::clamp(trace_product(t1, out.test.matrix()), 0.0, 1.0);
    out.log2_beta = out.beta > 0.0 ? std::log2(static_cast<long double>(out.beta)) : kNegInf;
    out.alpha_achieved = std::max(0.0, 1.0 - trace_product(t0, out.test.matrix()));
    return out;
  };

  if (eps >= 1.0) {
    out.gamma = 1.0;
    return finish(HermitianOperator::zero(d));
  }

  // Accepting only on ker τ1 costs nothing under H1.
  const HermitianOperator ker1 = kernel_projector(tau1.op());
  const double a_ker = trace_product(t0, ker1.matrix());
  if (a_ker > 0.0 && a_ker >= 1.0 - eps) {
    const double w = std::min(1.0, (1.0 - eps) / a_ker);
    out.gamma = 1.0 - w;
    out.threshold = std::numeric_limits<double>::infinity();
    return finish(w * ker1);
  }
  if (eps == 0.0) {
    return finish(HermitianOperator::identity(d) - kernel_projector(tau0.op()));
  }

  constexpr double kPositive = 1e-13;
  const double target = 1.0 - eps;
  auto weighted = [&](double s) {
    return HermitianOperator::symmetrized((1.0 - s) * t0 - s * t1);
  };
  auto positive_part = [&](double s) {
    const auto eig = eigh(weighted(s));
    return spectral_map(eig, [](double w) { return w > kPositive ? 1.0 : 0.0; });
  };
  auto accepted = [&](const HermitianOperator& p) { return trace_product(t0, p.matrix()); };

  // a(s) = Tr τ0 P_{>0}((1−s)τ0 − sτ1) decreases from 1 at s = 0 to 0 at s = 1.
  double lo = 0.0;
  double hi = 1.0;
  HermitianOperator p_lo = positive_part(lo);
  double a_lo = accepted(p_lo);
  double a_hi = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    if (a_lo - a_hi < 1e-13) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    HermitianOperator p_mid = positive_part(mid);
    const double a_mid = accepted(p_mid);
    if (a_mid >= target) {
      lo = mid;
      a_lo = a_mid;
      p_lo = std::move(p_mid);
    } else {
      hi = mid;
      a_hi = a_mid;
    }
  }

  const double s = 0.5 * (lo + hi);
  out.threshold = s < 1.0 ? s / (1.0 - s) : std::numeric_limits<double>::infinity();
  if (a_lo - a_hi < 1e-13) return finish(p_lo);

  // Jump in a(s): randomize on the crossing eigenspace of (1−s)τ0 − sτ1.
  const double scale = operator_norm(tau0.op()) + operator_norm(tau1.op());
  const double tol = std::max(1e-12, 10.0 * (hi - lo) * scale);
  const auto eig = eigh(weighted(s));
  const HermitianOperator p = spectral_map(eig, [tol](double w) { return w > tol ? 1.0 : 0.0; });
  const HermitianOperator q =
      spectral_map(eig, [tol](double w) { return std::abs(w) <= tol ? 1.0 : 0.0; });
  const double a_p = accepted(p);
  const double a_q = accepted(q);
  const double w = a_q > 0.0 ? std::clamp((target - a_p) / a_q, 0.0, 1.0) : 0.0;
  out.gamma = 1.0 - w;
  return finish(p + w * q);
}

}  // namespace qconv
