// Copyright 2026 The qdisc Authors
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

#include "qdisc/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace qdisc {

void apply_gauge(Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mod = std::abs(v[i]);
    if (mod > tol::kGauge) {
      v *= std::conj(v[i]) / mod;
      v[i] = Complex(std::abs(v[i]), 0.0);
      return;
    }
  }
}

PureState::PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  const double n = amplitudes_.norm();
  if (amplitudes_.size() == 0 || !(n > tol::kNorm)) {
    throw DomainError("pure state: zero or empty amplitude vector");
  }
  // Already-unit vectors are left bit-for-bit unchanged so that states
  // survive a serialize/parse cycle exactly.
  if (std::abs(n - 1.0) > 4.0 * std::numeric_limits<double>::epsilon()) amplitudes_ /= n;
  apply_gauge(amplitudes_);
}

PureState PureState::basis(int dim, int index) {
  if (index < 0 || index >= dim) throw DomainError("pure state: basis index out of range");
  Vector v = Vector::Zero(dim);
  v[index] = 1.0;
  return PureState(std::move(v));
}

DensityOperator::DensityOperator(Matrix matrix, double tolerance) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw ShapeError("density operator: matrix must be square and nonempty");
  }
  const double herm = max_abs_entry(matrix - matrix.adjoint());
  if (herm > tolerance) {
    throw ValidityError("density operator: not Hermitian (deviation " + std::to_string(herm) + ")");
  }
  matrix_ = 0.5 * (matrix + matrix.adjoint());
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > tolerance) {
    throw ValidityError("density operator: trace " + std::to_string(tr) + " != 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tolerance) {
    throw ValidityError("density operator: negative eigenvalue " +
                        std::to_string(es.eigenvalues().minCoeff()));
  }
}

DensityOperator DensityOperator::pure(const PureState& psi) {
  return DensityOperator(psi.projector());
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
  return DensityOperator(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

KrausChannel::KrausChannel(std::vector<Matrix> kraus, std::string name)
    : kraus_(std::move(kraus)), name_(std::move(name)) {
  if (kraus_.empty()) throw ShapeError("channel: empty Kraus list");
  dim_ = static_cast<int>(kraus_.front().rows());
  if (dim_ == 0) throw ShapeError("channel: zero-dimensional Kraus operator");
  for (std::size_t i = 0; i < kraus_.size(); ++i) {
    if (kraus_[i].rows() != dim_ || kraus_[i].cols() != dim_) {
      throw ShapeError("channel: Kraus operator " + std::to_string(i) + " is " +
                       std::to_string(kraus_[i].rows()) + "x" + std::to_string(kraus_[i].cols()) +
                       ", expected " + std::to_string(dim_) + "x" + std::to_string(dim_));
    }
  }
  if (kraus_.size() > static_cast<std::size_t>(dim_) * dim_) {
    throw ShapeError("channel: more than d^2 Kraus operators");
  }
  validity_ = validate_channel(kraus_);
}

KrausChannel KrausChannel::identity(int dim) {
  return KrausChannel({Matrix::Identity(dim, dim)}, "identity");
}

void KrausChannel::require_valid() const {
  if (!validity_.is_valid) {
    throw ValidityError("channel '" + name_ + "' is not CPTP: completeness residual " +
                        std::to_string(validity_.completeness_residual) + ", Choi min eigenvalue " +
                        std::to_string(validity_.choi_min_eigenvalue));
  }
}

Matrix KrausChannel::image_columns(const Vector& psi) const {
  Matrix cols(dim_, kraus_count());
  for (int i = 0; i < kraus_count(); ++i) cols.col(i) = kraus_[i] * psi;
  return cols;
}

ChannelValidity validate_channel(std::span<const Matrix> kraus) {
  if (kraus.empty()) throw ShapeError("validate: empty Kraus list");
  const auto rows = kraus.front().rows();
  const auto cols = kraus.front().cols();
  for (std::size_t i = 0; i < kraus.size(); ++i) {
    if (kraus[i].rows() != rows || kraus[i].cols() != cols) {
      throw ShapeError("validate: Kraus operator " + std::to_string(i) + " has mismatched shape");
    }
  }
  Matrix sum = Matrix::Zero(cols, cols);
  for (const auto& k : kraus) sum += k.adjoint() * k;
  ChannelValidity v;
  v.completeness_residual = max_abs_entry(sum - Matrix::Identity(cols, cols));
  Eigen::SelfAdjointEigenSolver<Matrix> es(choi_matrix(kraus), Eigen::EigenvaluesOnly);
  v.choi_min_eigenvalue = es.eigenvalues().minCoeff();
  v.is_valid = v.completeness_residual <= tol::kChannel && v.choi_min_eigenvalue >= -tol::kChannel;
  return v;
}

DensityOperator apply_channel(const KrausChannel& channel, const DensityOperator& input) {
  if (channel.dim() != input.dim()) throw ShapeError("apply: channel and state dimensions differ");
  channel.require_valid();
  Matrix out = Matrix::Zero(channel.dim(), channel.dim());
  for (const auto& k : channel.kraus()) out += k * input.matrix() * k.adjoint();
  // A valid channel changes the trace by at most the completeness residual.
  out /= out.trace().real();
  return DensityOperator(std::move(out), 1e-8);
}

DensityOperator apply_channel(const KrausChannel& channel, const PureState& input) {
  return apply_channel(channel, DensityOperator::pure(input));
}

Projector projector_from_basis(const Matrix& orthonormal_columns) {
  Projector p;
  p.basis = orthonormal_columns;
  p.rank = static_cast<int>(orthonormal_columns.cols());
  p.matrix = orthonormal_columns * orthonormal_columns.adjoint();
  return p;
}

Projector support_projector(const Matrix& rho, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  const auto& evals = es.eigenvalues();
  const Eigen::Index d = rho.rows();
  const double top = evals[d - 1];
  const double cut = rel_tol * std::max(top, 0.0);
  Eigen::Index rank = 0;
  while (rank < d && evals[d - 1 - rank] > cut && evals[d - 1 - rank] > 0.0) ++rank;
  Projector p = projector_from_basis(es.eigenvectors().rightCols(rank));
  if (rank == 0) p.matrix = Matrix::Zero(d, d);
  return p;
}

Projector support_projector(const DensityOperator& rho, double rel_tol) {
  return support_projector(rho.matrix(), rel_tol);
}

Projector column_span_projector(const Matrix& columns, double rel_tol) {
  const Eigen::Index d = columns.rows();
  Eigen::JacobiSVD<Matrix> svd(columns, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  if (s.size() > 0 && s[0] > 0.0) {
    const double cut = rel_tol * s[0] * s[0];
    while (rank < s.size() && s[rank] * s[rank] > cut) ++rank;
  }
  Projector p = projector_from_basis(svd.matrixU().leftCols(rank));
  if (rank == 0) p.matrix = Matrix::Zero(d, d);
  return p;
}

Matrix choi_matrix(std::span<const Matrix> kraus) {
  if (kraus.empty()) return {};
  const auto n = kraus.front().size();
  Matrix choi = Matrix::Zero(n, n);
  for (const auto& k : kraus) {
    const Eigen::Map<const Vector> v(k.data(), k.size());
    choi += v * v.adjoint();
  }
  return choi;
}

Matrix choi_matrix(const KrausChannel& channel) { return choi_matrix(channel.kraus()); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

KrausChannel extend_with_ancilla(const KrausChannel& channel, int ancilla_dim) {
  if (ancilla_dim < 1) throw DomainError("extend_with_ancilla: ancilla_dim must be >= 1");
  if (ancilla_dim == 1) return channel;
  const Matrix id = Matrix::Identity(ancilla_dim, ancilla_dim);
  std::vector<Matrix> kraus;
  kraus.reserve(channel.kraus().size());
  for (const auto& k : channel.kraus()) kraus.push_back(kron(id, k));
  return KrausChannel(std::move(kraus),
                      "ancilla" + std::to_string(ancilla_dim) + "(" + channel.name() + ")");
}

KrausChannel adjoin_unitary(const Matrix& u, const KrausChannel& channel) {
  if (u.rows() != channel.dim() || u.cols() != channel.dim()) {
    throw ShapeError("adjoin_unitary: dimension mismatch");
  }
  if (!is_unitary(u)) throw DomainError("adjoin_unitary: matrix is not unitary");
  std::vector<Matrix> kraus;
  kraus.reserve(channel.kraus().size());
  for (const auto& k : channel.kraus()) kraus.push_back(u.adjoint() * k);
  return KrausChannel(std::move(kraus), channel.name());
}

double max_abs_entry(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_unitary(const Matrix& u, double tolerance) {
  if (u.rows() != u.cols()) return false;
  return max_abs_entry(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) <= tolerance;
}

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix hadamard() {
  Matrix m(2, 2);
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

Matrix rotation_matrix(double theta) {
  Matrix m(2, 2);
  m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return m;
}

std::string format_angle(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

KrausChannel make_replace_channel(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 2)) {
    throw DomainError("replace channel: theta must lie in (0, pi/2)");
  }
  Matrix k1 = Matrix::Zero(2, 2);
  k1(0, 0) = std::cos(theta);
  k1(1, 0) = std::sin(theta);
  Matrix k2 = Matrix::Zero(2, 2);
  k2(1, 1) = 1.0;
  return KrausChannel({k1, k2}, "replace:" + format_angle(theta));
}

KrausChannel make_unitary_channel(const Matrix& u, std::string name) {
  if (!is_unitary(u)) throw DomainError("unitary channel: matrix is not unitary");
  return KrausChannel({u}, std::move(name));
}

KrausChannel make_rotation_channel(double theta) {
  return KrausChannel({rotation_matrix(theta)}, "rotation:" + format_angle(theta));
}

KrausChannel make_phase_channel(double phi) {
  Matrix u = Matrix::Identity(2, 2);
  u(1, 1) = std::polar(1.0, phi);
  return KrausChannel({u}, "phase:" + format_angle(phi));
}

KrausChannel make_amplitude_damping(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("amplitude damping: gamma outside [0,1]");
  Matrix e0 = Matrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - gamma);
  Matrix e1 = Matrix::Zero(2, 2);
  e1(0, 1) = std::sqrt(gamma);
  return KrausChannel({e0, e1}, "amplitude_damping:" + format_angle(gamma));
}

KrausChannel make_depolarizing(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarizing: p outside [0,1]");
  const double a = std::sqrt(1.0 - 0.75 * p);
  const double b = std::sqrt(0.25 * p);
  return KrausChannel({a * Matrix::Identity(2, 2), b * pauli_x(), b * pauli_y(), b * pauli_z()},
                      "depolarizing:" + format_angle(p));
}

}  // namespace qdisc
