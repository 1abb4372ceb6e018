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

#include "qdisc/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qdisc/bounds.hpp"

namespace qdisc {
namespace {

constexpr double kFeasibilitySlack = 1e-9;
// Below this |(I - P_a) b| the source b is treated as inside supp(source_a).
constexpr double kInSupport = 1e-6;
constexpr double kSameRay = 1e-8;
constexpr double kDropKraus = 1e-14;
constexpr double kCollinearTail = 1e-8;
constexpr double kStallMargin = 1e-12;
constexpr int kMaxRounds = 10000;

Matrix apply_kraus(const std::vector<Matrix>& kraus, const Matrix& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus) out += k * rho * k.adjoint();
  return out;
}

double trace_distance_to_pure(const Matrix& rho, const Vector& t) {
  Matrix diff = rho - t * t.adjoint();
  diff = 0.5 * (diff + diff.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// Orthonormal basis of the orthogonal complement of the columns of q
// (which must be orthonormal).
Matrix complement_basis(const Matrix& q, int dim) {
  if (q.cols() == 0) return Matrix::Identity(dim, dim);
  Eigen::HouseholderQR<Matrix> qr(q);
  const Matrix full = qr.householderQ() * Matrix::Identity(dim, dim);
  return full.rightCols(dim - q.cols());
}

void drop_negligible(std::vector<Matrix>& kraus) {
  std::erase_if(kraus, [](const Matrix& k) { return k.norm() < kDropKraus; });
}

StatePairTransform synthesize(const DensityOperator& source_a, const PureState& source_b,
                              const PureState& target_a, const PureState& target_b,
                              const std::string& where) {
  try {
    return pair_transform(source_a, source_b, target_a, target_b);
  } catch (const InfeasibleTransformError& e) {
    throw SynthesisError(where + ": " + e.what());
  }
}

}  // namespace

KrausChannel StatePairTransform::as_channel() const { return KrausChannel(kraus, "transform"); }

TransformCheck check_transform(const StatePairTransform& t) {
  TransformCheck c;
  const ChannelValidity v = validate_channel(t.kraus);
  c.completeness_residual = v.completeness_residual;
  c.choi_min_eigenvalue = v.choi_min_eigenvalue;
  c.action_error_a =
      trace_distance_to_pure(apply_kraus(t.kraus, t.source_a.matrix()), t.target_a.amplitudes());
  c.action_error_b =
      trace_distance_to_pure(apply_kraus(t.kraus, t.source_b.projector()), t.target_b.amplitudes());
  c.ok = c.completeness_residual <= 1e-9 && c.choi_min_eigenvalue >= -1e-9 &&
         c.action_error_a <= 1e-8 && c.action_error_b <= 1e-8;
  return c;
}

StatePairTransform pair_transform(const DensityOperator& source_a, const PureState& source_b,
                                  const PureState& target_a, const PureState& target_b) {
  const int d = source_a.dim();
  if (source_b.dim() != d || target_a.dim() != d || target_b.dim() != d) {
    throw ShapeError("pair_transform: dimension mismatch");
  }
  const Projector pa = support_projector(source_a);
  const Matrix& u = pa.basis;
  const int r = pa.rank;
  const Vector& b = source_b.amplitudes();
  const Vector& ta = target_a.amplitudes();
  const Vector& tb = target_b.amplitudes();
  const Complex target_ov = ta.dot(tb);
  const Vector ub = u.adjoint() * b;  // <u_i|b>
  const double fid = std::min(ub.norm(), 1.0);
  if (fid > std::abs(target_ov) + kFeasibilitySlack) {
    throw InfeasibleTransformError("pair_transform: source fidelity " + std::to_string(fid) +
                                   " exceeds target overlap " +
                                   std::to_string(std::abs(target_ov)));
  }

  Vector b_perp = b - u * ub;
  b_perp -= u * (u.adjoint() * b_perp);
  const double n = b_perp.norm();

  std::vector<Matrix> kraus;
  if (n < kInSupport) {
    if ((tb - ta * target_ov).norm() > kSameRay) {
      throw InfeasibleTransformError(
          "pair_transform: source_b lies in supp(source_a) but the targets differ");
    }
    for (int k = 0; k < d; ++k) {
      Matrix m = Matrix::Zero(d, d);
      m.col(k) = ta;
      kraus.push_back(std::move(m));
    }
  } else {
    const double n2 = n * n;
    const Vector b_dual = b_perp / n2;
    // c_i = <u_i|b> / <t_a|t_b>; all zero when the target overlap vanishes
    // (then fid is below the slack as well).
    Vector c = Vector::Zero(r);
    if (std::abs(target_ov) > 1e-12) c = ub / target_ov;
    const double tail = std::sqrt(std::max(0.0, 1.0 - c.squaredNorm()));
    for (int j = 0; j < r; ++j) {
      // Dual of u_j with respect to the basis {u_1..u_r, b} of the joint span.
      const Vector u_dual = u.col(j) - (std::conj(ub[j]) / n2) * b_perp;
      kraus.push_back(ta * u_dual.adjoint() + c[j] * tb * b_dual.adjoint());
    }
    kraus.push_back(tail * tb * b_dual.adjoint());
    Matrix span(d, r + 1);
    span << u, b_perp / n;
    const Matrix comp = complement_basis(span, d);
    for (int k = 0; k < comp.cols(); ++k) kraus.push_back(ta * comp.col(k).adjoint());
  }
  drop_negligible(kraus);

  StatePairTransform t{
      .kraus = std::move(kraus),
      .source_a = source_a,
      .source_b = source_b,
      .target_a = target_a,
      .target_b = target_b,
  };
  const TransformCheck check = check_transform(t);
  if (!check.ok) {
    throw SynthesisError("pair_transform: construction inaccurate (residual " +
                         std::to_string(check.completeness_residual) + ", action errors " +
                         std::to_string(check.action_error_a) + ", " +
                         std::to_string(check.action_error_b) + ")");
  }
  return t;
}

std::optional<CollinearInput> collinear_input_search(const KrausChannel& channel,
                                                     const OptimizerConfig& config) {
  const auto found = f1_rank_limited(channel, 1, config);
  if (!found) return std::nullopt;
  const Vector& b = found->witness_input.amplitudes();
  const Matrix cols = channel.image_columns(b);
  Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() > 1 && sv[1] > kCollinearTail) return std::nullopt;
  const Vector c = svd.matrixU().col(0);
  return CollinearInput{
      .b = found->witness_input,
      .c = PureState(c),
      .overlap = std::min(std::abs(c.dot(b)), 1.0),
  };
}

ProtocolPlan plan_2d(const KrausChannel& channel, const FidelityResult& f1,
                     [[maybe_unused]] const OptimizerConfig& config) {
  if (channel.dim() != 2) throw DomainError("plan_2d: channel must act on a qubit");
  if (!(f1.value < 1.0 - kDistinguishableMargin)) {
    throw NotDistinguishableError("plan_2d: channel is not sequentially distinguishable");
  }
  const int n = nmin_exact_2d(f1.value);
  const PureState& b = f1.witness_input;
  const Projector supp = column_span_projector(channel.image_columns(b.amplitudes()));
  if (supp.rank != 1) throw SynthesisError("plan_2d: channel output on the witness is not pure");

  ProtocolPlan plan{
      .channel = channel,
      .scheme = "2d",
      .rounds = {},
      .final_measurement_vector = b,
      .claimed_queries = n,
  };
  plan.rounds.push_back(Round{
      .index = 1,
      .pre_transform = std::nullopt,
      .input_if_E = b,
      .input_if_I = b,
      .predicted_overlap_after = channel_output_overlap(channel, b.amplitudes(), b.amplitudes()),
  });
  if (n == 1) return plan;

  // c = cos(theta) b + sin(theta) b_perp is the channel output on b.
  Vector c = supp.basis.col(0);
  const Complex ov = b.amplitudes().dot(c);
  if (std::abs(ov) > 0.0) c *= std::conj(ov) / std::abs(ov);
  const double cos_t = std::min(std::abs(ov), 1.0);
  const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
  const double theta = std::atan2(sin_t, cos_t);
  const Vector b_perp = (c - cos_t * b.amplitudes()) / sin_t;
  const DensityOperator out_e = apply_channel(channel, b);

  PureState carried = b;
  for (int j = 2; j <= n; ++j) {
    const double k = j - 1;
    const Vector target = j < n ? Vector(std::cos(k * theta) * b.amplitudes() -
                                         std::sin(k * theta) * b_perp)
                                : Vector(sin_t * b.amplitudes() - cos_t * b_perp);
    const PureState next(target);
    StatePairTransform t = synthesize(out_e, carried, b, next, "plan_2d round " + std::to_string(j));
    plan.rounds.push_back(Round{
        .index = j,
        .pre_transform = std::move(t),
        .input_if_E = b,
        .input_if_I = next,
        .predicted_overlap_after =
            channel_output_overlap(channel, b.amplitudes(), next.amplitudes()),
    });
    carried = next;
  }
  plan.final_measurement_vector = carried;
  return plan;
}

ProtocolPlan plan_general(const KrausChannel& channel, const FidelityResult& f1,
                          const Alpha0Result& a0, [[maybe_unused]] const OptimizerConfig& config) {
  if (!(f1.value < 1.0 - kDistinguishableMargin)) {
    throw NotDistinguishableError("plan_general: channel is not sequentially distinguishable");
  }
  if (f1.value <= kSingleQueryFidelity) {
    const PureState& b = f1.witness_input;
    return ProtocolPlan{
        .channel = channel,
        .scheme = "general",
        .rounds = {Round{
            .index = 1,
            .pre_transform = std::nullopt,
            .input_if_E = b,
            .input_if_I = b,
            .predicted_overlap_after =
                channel_output_overlap(channel, b.amplitudes(), b.amplitudes()),
        }},
        .final_measurement_vector = b,
        .claimed_queries = 1,
    };
  }

  const PureState& b = a0.witness_b;
  const PureState& b_prime = a0.witness_b_prime;
  const DensityOperator out_e = apply_channel(channel, b);
  auto overlap_with = [&](const PureState& s) {
    return channel_output_overlap(channel, b.amplitudes(), s.amplitudes());
  };

  ProtocolPlan plan{
      .channel = channel,
      .scheme = "general",
      .rounds = {},
      .final_measurement_vector = b_prime,
      .claimed_queries = 0,
  };
  double q = overlap_with(b);
  plan.rounds.push_back(Round{
      .index = 1,
      .pre_transform = std::nullopt,
      .input_if_E = b,
      .input_if_I = b,
      .predicted_overlap_after = q,
  });

  PureState carried = b;
  while (q > a0.cos_alpha0 + kFeasibilitySlack) {
    const int j = static_cast<int>(plan.rounds.size()) + 1;
    if (j > kMaxRounds) throw SynthesisError("plan_general: round limit reached");
    const std::string where = "plan_general round " + std::to_string(j);
    std::optional<PureState> c;
    try {
      c = lemma2_witness(channel, b, b_prime, std::acos(std::min(q, 1.0)));
    } catch (const DomainError& e) {
      throw SynthesisError(where + ": " + e.what());
    }
    StatePairTransform t = synthesize(out_e, carried, b, *c, where);
    const double next_q = overlap_with(*c);
    if (!(next_q < q - kStallMargin)) {
      throw SynthesisError(where + ": fidelity did not decrease (" + std::to_string(q) + " -> " +
                           std::to_string(next_q) + ")");
    }
    plan.rounds.push_back(Round{
        .index = j,
        .pre_transform = std::move(t),
        .input_if_E = b,
        .input_if_I = *c,
        .predicted_overlap_after = next_q,
    });
    carried = *c;
    q = next_q;
  }

  const int j = static_cast<int>(plan.rounds.size()) + 1;
  StatePairTransform t =
      synthesize(out_e, carried, b, b_prime, "plan_general final round " + std::to_string(j));
  plan.rounds.push_back(Round{
      .index = j,
      .pre_transform = std::move(t),
      .input_if_E = b,
      .input_if_I = b_prime,
      .predicted_overlap_after = overlap_with(b_prime),
  });
  plan.claimed_queries = static_cast<int>(plan.rounds.size());
  return plan;
}

double terminal_leak(const ProtocolPlan& plan) {
  const DensityOperator out = apply_channel(plan.channel, plan.rounds.back().input_if_E);
  const Vector& v = plan.final_measurement_vector.amplitudes();
  return std::max(0.0, v.dot(out.matrix() * v).real());
}

}  // namespace qdisc
