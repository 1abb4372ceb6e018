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

#ifndef QDISC_CORE_HPP
#define QDISC_CORE_HPP

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qdisc {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Error hierarchy. Every failure surfaced by the library derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ShapeError : public Error {
 public:
  using Error::Error;
};
class ValidityError : public Error {
 public:
  using Error::Error;
};
class DomainError : public Error {
 public:
  using Error::Error;
};

// Numerical thresholds shared across modules.
namespace tol {
inline constexpr double kNorm = 1e-12;
inline constexpr double kGauge = 1e-12;
inline constexpr double kDensity = 1e-10;
inline constexpr double kChannel = 1e-9;
inline constexpr double kSupportRel = 1e-10;
inline constexpr double kProjector = 1e-9;
inline constexpr double kUnitary = 1e-9;
}  // namespace tol

/// Unit vector in C^d, stored in canonical gauge: the first amplitude with
/// modulus above 1e-12 is real and nonnegative.
class PureState {
 public:
  // Normalizes and gauge-fixes. Throws DomainError on a (numerically) zero
  // vector.
  explicit PureState(Vector amplitudes);

  static PureState basis(int dim, int index);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex operator[](int i) const { return amplitudes_[i]; }

  // |psi><psi|
  Matrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

  // <this|other>
  Complex inner(const PureState& other) const {
    return amplitudes_.dot(other.amplitudes_);
  }

 private:
  Vector amplitudes_;
};

/// Fix the global phase of v so its first non-negligible entry is real >= 0.
void apply_gauge(Vector& v);

/// Positive semidefinite, unit-trace, Hermitian d x d matrix.
class DensityOperator {
 public:
  // Validates the invariants at `tolerance` and throws ValidityError on
  // violation. The stored matrix is Hermitian-symmetrized.
  explicit DensityOperator(Matrix matrix, double tolerance = tol::kDensity);

  static DensityOperator pure(const PureState& psi);
  static DensityOperator maximally_mixed(int dim);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }

 private:
  Matrix matrix_;
};

/// Orthogonal projector with an orthonormal basis of its range.
struct Projector {
  Matrix matrix;
  Matrix basis;  // dim x rank, orthonormal columns
  int rank = 0;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

struct ChannelValidity {
  double completeness_residual = 0.0;
  double choi_min_eigenvalue = 0.0;
  bool is_valid = false;
};

/// Quantum operation on C^d given by Kraus operators (square, dim_out = dim_in).
/// Validity is evaluated once at construction and cached.
class KrausChannel {
 public:
  // Throws ShapeError for an empty list, non-square or mismatched matrices,
  // or more than d^2 operators.
  explicit KrausChannel(std::vector<Matrix> kraus, std::string name = {});

  static KrausChannel identity(int dim);

  int dim() const { return dim_; }
  int kraus_count() const { return static_cast<int>(kraus_.size()); }
  const std::vector<Matrix>& kraus() const { return kraus_; }
  const Matrix& operator[](int i) const { return kraus_[i]; }
  const std::string& name() const { return name_; }
  const ChannelValidity& validity() const { return validity_; }
  bool is_valid() const { return validity_.is_valid; }

  // Throws ValidityError unless the channel is CPTP at the library tolerance.
  void require_valid() const;

  // d x m matrix whose columns are E_i|psi>. Its column span is
  // supp(E(psi)); its squared singular values are the eigenvalues of E(psi).
  Matrix image_columns(const Vector& psi) const;

 private:
  int dim_ = 0;
  std::vector<Matrix> kraus_;
  std::string name_;
  ChannelValidity validity_;
};

ChannelValidity validate_channel(std::span<const Matrix> kraus);

DensityOperator apply_channel(const KrausChannel& channel, const DensityOperator& input);
DensityOperator apply_channel(const KrausChannel& channel, const PureState& input);

// Support of a Hermitian PSD matrix: eigenvectors whose eigenvalue exceeds
// rel_tol times the largest eigenvalue.
Projector support_projector(const Matrix& rho, double rel_tol = tol::kSupportRel);
Projector support_projector(const DensityOperator& rho, double rel_tol = tol::kSupportRel);

// Range of the column span of `columns` with the same relative cut applied
// to squared singular values, so that for columns = [E_i psi] this agrees
// with support_projector(E(psi)).
Projector column_span_projector(const Matrix& columns, double rel_tol = tol::kSupportRel);

Projector projector_from_basis(const Matrix& orthonormal_columns);

// Sum_i vec(E_i) vec(E_i)^dagger with column-stacking vec.
Matrix choi_matrix(std::span<const Matrix> kraus);
Matrix choi_matrix(const KrausChannel& channel);

// Kraus list {I_R (x) E_i}, ancilla R is the slow index.
KrausChannel extend_with_ancilla(const KrausChannel& channel, int ancilla_dim);

// Kraus list {U^dagger E_i}. Throws DomainError if u is not unitary.
KrausChannel adjoin_unitary(const Matrix& u, const KrausChannel& channel);

Matrix kron(const Matrix& a, const Matrix& b);
double max_abs_entry(const Matrix& m);
bool is_unitary(const Matrix& u, double tolerance = tol::kUnitary);

// Test-channel factories.
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix hadamard();
Matrix rotation_matrix(double theta);

// Qubit channel with K1 = |c><0|, K2 = |1><1|, |c> = cos t|0> + sin t|1>.
// Requires 0 < theta < pi/2.
KrausChannel make_replace_channel(double theta);
KrausChannel make_unitary_channel(const Matrix& u, std::string name = {});
// Real plane rotation by theta; name "rotation:<theta>".
KrausChannel make_rotation_channel(double theta);
// diag(1, e^{i phi}); name "phase:<phi>".
KrausChannel make_phase_channel(double phi);
KrausChannel make_amplitude_damping(double gamma);
// rho -> (1-p) rho + p I/2 written with four Pauli Kraus operators.
KrausChannel make_depolarizing(double p);

// Angle formatting used in channel names and CLI output (10 significant digits).
std::string format_angle(double value);

}  // namespace qdisc

#endif  // QDISC_CORE_HPP
