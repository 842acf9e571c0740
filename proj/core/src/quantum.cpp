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

#include "qconv/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace qconv {

namespace {

constexpr double kEntropyClamp = 1e-10;

double entropy_of_spectrum(const std::vector<double>& values) {
  double s = 0.0;
  for (double w : values) {
    if (w <= 0.0) continue;  // clamped: 0 log 0 = 0
    s -= w * std::log2(w);
  }
  return std::max(s, 0.0);
}

}  // namespace

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(HermitianOperator op, double tol) : op_(std::move(op)) {
  if (op_.dim() < 1) throw DimensionError("DensityMatrix: empty operator");
  const double tr = op_.trace();
  if (std::abs(tr - 1.0) > tol) {
    std::ostringstream msg;
    msg << "DensityMatrix: trace " << tr << " differs from 1";
    throw ValueError(msg.str());
  }
  const double lo = min_eigenvalue(op_);
  if (lo < -tol) {
    std::ostringstream msg;
    msg << "DensityMatrix: negative eigenvalue " << lo;
    throw ValueError(msg.str());
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(HermitianOperator::identity(dim) * (1.0 / dim));
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) throw ValueError("DensityMatrix::pure: zero vector");
  return DensityMatrix(HermitianOperator::projector(psi / norm));
}

DensityMatrix DensityMatrix::basis_state(int dim, int k) {
  if (k < 0 || k >= dim) throw DimensionError("DensityMatrix::basis_state: index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v(k) = 1.0;
  return pure(v);
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probs) {
  return DensityMatrix(HermitianOperator::diagonal(probs));
}

DensityMatrix DensityMatrix::transpose() const {
  return DensityMatrix(HermitianOperator::symmetrized(op_.matrix().transpose()));
}

DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.op(), b.op()));
}

// ---------------------------------------------------------------------------
// QuantumChannel

HermitianOperator choi_from_kraus(std::span<const ComplexMatrix> kraus, int dim_in,
                                  int dim_out) {
  const int n = dim_in * dim_out;
  ComplexMatrix choi = ComplexMatrix::Zero(n, n);
  ComplexVector v(n);
  for (const auto& k : kraus) {
    for (int i = 0; i < dim_in; ++i)
      for (int b = 0; b < dim_out; ++b) v(i * dim_out + b) = k(b, i);
    choi.noalias() += v * v.adjoint();
  }
  return HermitianOperator::symmetrized(choi);
}

QuantumChannel::QuantumChannel(int dim_in, int dim_out, std::vector<ComplexMatrix> kraus)
    : dim_in_(dim_in), dim_out_(dim_out), kraus_(std::move(kraus)) {
  choi_ = choi_from_kraus(kraus_, dim_in_, dim_out_);
}

QuantumChannel QuantumChannel::from_kraus(std::vector<ComplexMatrix> kraus,
                                          double tp_tolerance) {
  if (kraus.empty()) throw ValueError("QuantumChannel: empty Kraus list");
  const auto rows = kraus.front().rows();
  const auto cols = kraus.front().cols();
  if (rows < 1 || cols < 1) throw DimensionError("QuantumChannel: empty Kraus operator");
  for (const auto& k : kraus) {
    if (k.rows() != rows || k.cols() != cols) {
      throw DimensionError("QuantumChannel: Kraus operators have inconsistent shapes");
    }
    if (!k.allFinite()) throw ValueError("QuantumChannel: non-finite Kraus entry");
  }
  QuantumChannel channel(static_cast<int>(cols), static_cast<int>(rows), std::move(kraus));
  const double defect = channel.trace_preservation_defect();
  if (defect > tp_tolerance) {
    std::ostringstream msg;
    msg << "QuantumChannel: not trace preserving, ||sum K^dag K - I|| = " << defect;
    throw ValueError(msg.str());
  }
  // Tr_B choi = I is the Choi-form statement of trace preservation.
  const ComplexMatrix marginal =
      partial_trace(channel.choi_.matrix(), channel.choi_dims(), Subsystem::B);
  const double choi_defect =
      max_abs_entry(marginal - ComplexMatrix::Identity(channel.dim_in_, channel.dim_in_));
  if (choi_defect > tp_tolerance * std::max(1.0, static_cast<double>(channel.dim_out_))) {
    std::ostringstream msg;
    msg << "QuantumChannel: Choi marginal differs from identity by " << choi_defect;
    throw ValueError(msg.str());
  }
  return channel;
}

QuantumChannel QuantumChannel::from_choi(const HermitianOperator& choi, int dim_in,
                                         int dim_out, double tp_tolerance) {
  if (dim_in < 1 || dim_out < 1 || choi.dim() != dim_in * dim_out) {
    throw DimensionError("QuantumChannel::from_choi: Choi dimension does not match dim_in*dim_out");
  }
  const auto eig = eigh(choi);
  const double top = std::max(eig.values.back(), 0.0);
  if (eig.values.front() < -tp_tolerance * std::max(1.0, top)) {
    std::ostringstream msg;
    msg << "QuantumChannel::from_choi: Choi operator is not positive (min eigenvalue "
        << eig.values.front() << ")";
    throw ValueError(msg.str());
  }
  std::vector<ComplexMatrix> kraus;
  for (size_t k = eig.values.size(); k-- > 0;) {
    const double w = eig.values[k];
    if (w <= 1e-14 * std::max(1.0, top)) break;
    ComplexMatrix op(dim_out, dim_in);
    const double s = std::sqrt(w);
    for (int i = 0; i < dim_in; ++i)
      for (int b = 0; b < dim_out; ++b)
        op(b, i) = s * eig.vectors(i * dim_out + b, static_cast<Eigen::Index>(k));
    kraus.push_back(std::move(op));
  }
  if (kraus.empty()) throw ValueError("QuantumChannel::from_choi: zero Choi operator");
  auto channel = from_kraus(std::move(kraus), tp_tolerance);
  const double mismatch = max_abs_entry(channel.choi().matrix() - choi.matrix());
  if (mismatch > 1e-8 * std::max(1.0, top)) {
    std::ostringstream msg;
    msg << "QuantumChannel::from_choi: reconstructed Choi differs by " << mismatch;
    throw ValueError(msg.str());
  }
  return channel;
}

QuantumChannel QuantumChannel::identity(int dim) {
  return from_kraus({ComplexMatrix::Identity(dim, dim)});
}

QuantumChannel QuantumChannel::constant(int dim_in, const DensityMatrix& output) {
  // K_{b,i} = sqrt(w_b) |v_b⟩⟨i| for the spectral decomposition of the output.
  const auto eig = eigh(output.op());
  std::vector<ComplexMatrix> kraus;
  for (size_t b = 0; b < eig.values.size(); ++b) {
    if (eig.values[b] <= 0.0) continue;
    const double s = std::sqrt(eig.values[b]);
    for (int i = 0; i < dim_in; ++i) {
      ComplexMatrix k = ComplexMatrix::Zero(output.dim(), dim_in);
      k.col(i) = s * eig.vectors.col(static_cast<Eigen::Index>(b));
      kraus.push_back(std::move(k));
    }
  }
  return from_kraus(std::move(kraus));
}

ComplexMatrix QuantumChannel::apply(const ComplexMatrix& x) const {
  if (x.rows() != dim_in_ || x.cols() != dim_in_) {
    throw DimensionError("QuantumChannel::apply: input dimension " + describe_shape(x) +
                         " does not match dim_in " + std::to_string(dim_in_));
  }
  ComplexMatrix out = ComplexMatrix::Zero(dim_out_, dim_out_);
  for (const auto& k : kraus_) out.noalias() += k * x * k.adjoint();
  return out;
}

double QuantumChannel::trace_preservation_defect() const {
  ComplexMatrix sum = ComplexMatrix::Zero(dim_in_, dim_in_);
  for (const auto& k : kraus_) sum.noalias() += k.adjoint() * k;
  return max_abs_entry(sum - ComplexMatrix::Identity(dim_in_, dim_in_));
}

// ---------------------------------------------------------------------------

HermitianOperator phi_operator(int dim) {
  if (dim < 1) throw DimensionError("phi_operator: dimension must be >= 1");
  ComplexMatrix phi = ComplexMatrix::Zero(dim * dim, dim * dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) phi(i * dim + i, j * dim + j) = 1.0;
  return HermitianOperator(phi);
}

DensityMatrix canonical_purification(const DensityMatrix& rho) {
  const int d = rho.dim();
  const ComplexMatrix root = kron(ComplexMatrix::Identity(d, d), sqrt_psd(rho.op()).matrix());
  const ComplexMatrix state = root * phi_operator(d).matrix() * root;
  return DensityMatrix(HermitianOperator::symmetrized(state));
}

DensityMatrix apply_channel(const QuantumChannel& channel, const DensityMatrix& rho) {
  return DensityMatrix(HermitianOperator::symmetrized(channel.apply(rho.matrix())));
}

HermitianOperator apply_channel_to_A(const QuantumChannel& channel,
                                     const HermitianOperator& x) {
  const int din = channel.dim_in();
  const int dout = channel.dim_out();
  if (x.dim() != din * din) {
    throw DimensionError("apply_channel_to_A: operator dimension " + std::to_string(x.dim()) +
                         " is not dim_in^2 = " + std::to_string(din * din));
  }
  // Block (i, j) of x is an operator on A; the channel acts block-wise.
  ComplexMatrix out(din * dout, din * dout);
  for (int i = 0; i < din; ++i)
    for (int j = 0; j < din; ++j)
      out.block(i * dout, j * dout, dout, dout) =
          channel.apply(x.matrix().block(i * din, j * din, din, din));
  return HermitianOperator::symmetrized(out);
}

QuantumChannel depolarising_channel(int dim, double p) {
  if (dim < 2) throw ValueError("depolarising_channel: dimension must be >= 2");
  if (!(p >= 0.0 && p <= 1.0)) throw ValueError("depolarising_channel: p must lie in [0, 1]");
  const double d2 = static_cast<double>(dim) * dim;
  const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi / dim);
  std::vector<ComplexMatrix> kraus;
  kraus.push_back(std::sqrt(1.0 - p + p / d2) * ComplexMatrix::Identity(dim, dim));
  if (p > 0.0) {
    const double weight = std::sqrt(p / d2);
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        if (a == 0 && b == 0) continue;
        // X^a Z^b |j⟩ = ω^{bj} |j + a⟩
        ComplexMatrix w = ComplexMatrix::Zero(dim, dim);
        for (int j = 0; j < dim; ++j) w((j + a) % dim, j) = std::pow(omega, b * j);
        kraus.push_back(weight * w);
      }
    }
  }
  return QuantumChannel::from_kraus(std::move(kraus));
}

QuantumChannel tensor_product(const QuantumChannel& first, const QuantumChannel& second) {
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(first.kraus().size() * second.kraus().size());
  for (const auto& k1 : first.kraus())
    for (const auto& k2 : second.kraus()) kraus.push_back(kron(k1, k2));
  // Products of exactly trace-preserving sets; tolerance scales with size.
  return QuantumChannel::from_kraus(std::move(kraus), 1e-9);
}

QuantumChannel tensor_power(const QuantumChannel& channel, int n, int choi_dim_cap) {
  if (n < 1) throw ValueError("tensor_power: n must be >= 1");
  const long per_use = static_cast<long>(channel.dim_in()) * channel.dim_out();
  long choi_dim = 1;
  for (int k = 0; k < n; ++k) {
    choi_dim *= per_use;
    if (choi_dim > choi_dim_cap) {
      throw DimensionError("tensor_power: Choi dimension of the " + std::to_string(n) +
                           "-fold power exceeds the cap " + std::to_string(choi_dim_cap));
    }
  }
  QuantumChannel power = channel;
  for (int k = 1; k < n; ++k) {
    power = tensor_product(power, channel);
    if (static_cast<long>(power.kraus().size()) >
        static_cast<long>(power.dim_in()) * power.dim_out()) {
      power = QuantumChannel::from_choi(power.choi(), power.dim_in(), power.dim_out(), 1e-9);
    }
  }
  return power;
}

double von_neumann_entropy(const HermitianOperator& rho) {
  auto values = eigh(rho).values;
  for (double& w : values)
    if (w < 0.0 && w >= -kEntropyClamp) w = 0.0;
  return entropy_of_spectrum(values);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return von_neumann_entropy(rho.op());
}

double mutual_information(const QuantumChannel& channel, const DensityMatrix& rho) {
  if (rho.dim() != channel.dim_in()) {
    throw DimensionError("mutual_information: state dimension does not match channel input");
  }
  const double s_in = von_neumann_entropy(rho);
  const double s_out = von_neumann_entropy(apply_channel(channel, rho));
  const double s_joint =
      von_neumann_entropy(apply_channel_to_A(channel, canonical_purification(rho).op()));
  return std::max(0.0, s_in + s_out - s_joint);
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValueError("binary_entropy: p must lie in [0, 1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

double binary_relative_entropy(double p, double q) {
  auto term = [](double a, double b) {
    if (a == 0.0) return 0.0;
    if (b == 0.0) return std::numeric_limits<double>::infinity();
    return a * std::log2(a / b);
  };
  return term(p, q) + term(1.0 - p, 1.0 - q);
}

// ---------------------------------------------------------------------------
// Codes and the code-to-test construction

Code::Code(std::vector<DensityMatrix> input_states, std::vector<HermitianOperator> decoder)
    : inputs_(std::move(input_states)), decoder_(std::move(decoder)) {
  if (inputs_.empty()) throw ValueError("Code: at least one message is required");
  if (inputs_.size() != decoder_.size()) {
    throw ValueError("Code: input state count and decoder POVM size differ");
  }
  const int din = inputs_.front().dim();
  for (const auto& s : inputs_)
    if (s.dim() != din) throw DimensionError("Code: input states have inconsistent dimensions");
  const int dout = decoder_.front().dim();
  HermitianOperator sum = HermitianOperator::zero(dout);
  for (const auto& e : decoder_) {
    if (e.dim() != dout) throw DimensionError("Code: POVM elements have inconsistent dimensions");
    if (min_eigenvalue(e) < -kPovmTolerance) throw ValueError("Code: POVM element is not positive");
    sum += e;
  }
  const double defect = max_abs_entry(sum.matrix() - ComplexMatrix::Identity(dout, dout));
  if (defect > kPovmTolerance) {
    std::ostringstream msg;
    msg << "Code: decoder POVM does not sum to identity (defect " << defect << ")";
    throw ValueError(msg.str());
  }
}

DensityMatrix Code::average_input() const {
  HermitianOperator avg = HermitianOperator::zero(inputs_.front().dim());
  for (const auto& s : inputs_) avg += s.op();
  return DensityMatrix(avg * (1.0 / message_count()));
}

double Code::success_probability(const QuantumChannel& channel) const {
  if (channel.dim_in() != inputs_.front().dim() || channel.dim_out() != decoder_.front().dim()) {
    throw DimensionError("Code::success_probability: channel does not match code dimensions");
  }
  double total = 0.0;
  for (size_t w = 0; w < inputs_.size(); ++w) {
    const ComplexMatrix out = channel.apply(inputs_[w].matrix());
    total += (decoder_[w].matrix() * out).trace().real();
  }
  return total / message_count();
}

std::vector<HermitianOperator> code_alice_elements(const Code& code, const DensityMatrix& rho) {
  const auto avg = code.average_input();
  if (rho.dim() != avg.dim()) throw DimensionError("code_to_test: state dimension mismatch");
  const double mismatch = max_abs_entry(avg.matrix() - rho.matrix());
  if (mismatch > 1e-10) {
    std::ostringstream msg;
    msg << "code_to_test: average input differs from rho by " << mismatch;
    throw ValueError(msg.str());
  }
  const HermitianOperator root_inv = inverse_sqrt_on_support(rho.transpose().op());
  std::vector<HermitianOperator> elements;
  elements.reserve(static_cast<size_t>(code.message_count()));
  const double weight = 1.0 / code.message_count();
  for (const auto& s : code.input_states()) {
    const ComplexMatrix e = root_inv.matrix() * s.matrix().transpose() * root_inv.matrix();
    elements.push_back(HermitianOperator::symmetrized(weight * e));
  }
  return elements;
}

HermitianOperator code_to_test(const Code& code, const DensityMatrix& rho) {
  const auto alice = code_alice_elements(code, rho);
  const int n = rho.dim() * code.decoder().front().dim();
  HermitianOperator test = HermitianOperator::zero(n);
  for (size_t w = 0; w < alice.size(); ++w) test += kron(alice[w], code.decoder()[w]);
  return test;
}

}  // namespace qconv
