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

#include "qdisc/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace qdisc {
namespace {

using search::RealVector;

constexpr double kUndistinguishable = 1e-6;
constexpr double kClusterValueWindow = 1e-6;
constexpr double kClusterRayDistance = 1e-4;
constexpr std::uint64_t kTagGenericRank = 0x67656e72;
constexpr std::uint64_t kTagF1 = 0x66310000;
constexpr std::uint64_t kTagQ = 0x71660000;
constexpr std::uint64_t kTagRank = 0x726b0000;
constexpr double kSnapTail = 1e-13;

// Rank stratum of the output support searched by one multistart pass.
// Inside a stratum the objective uses the top `rank` left singular vectors
// of [E_1 psi, ..., E_m psi] instead of the relative eigenvalue cut: the cut
// makes the objective jump where a singular value crosses it, and a local
// search would otherwise settle on that artificial edge.
struct Stratum {
  int rank = 0;
  bool constrained = false;  // restricted to {psi : rank supp E(psi) <= rank}
  bool full = false;         // generic support is all of C^d; objective is 1
};

int generic_rank(const KrausChannel& ch, std::uint64_t seed) {
  auto rng = search::make_stream(seed, kTagGenericRank, static_cast<std::uint64_t>(ch.dim()));
  int g = 0;
  for (int k = 0; k < 4; ++k) {
    const Vector psi = search::to_complex(search::random_sphere_point(ch.dim(), rng));
    g = std::max(g, column_span_projector(ch.image_columns(psi)).rank);
  }
  return g;
}

std::vector<Stratum> strata_for(const KrausChannel& ch, std::uint64_t seed) {
  const int d = ch.dim();
  const int g = generic_rank(ch, seed);
  std::vector<Stratum> out;
  out.push_back({.rank = g, .constrained = false, .full = g >= d});
  for (int r = std::min(g, d) - 1; r >= 1; --r) out.push_back({.rank = r, .constrained = true});
  return out;
}

Matrix top_left_singular(const Matrix& cols, int r) {
  Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(std::min<Eigen::Index>(r, svd.matrixU().cols()));
}

double fixed_rank_state_fidelity(const KrausChannel& ch, const Vector& psi, int r) {
  const Matrix u = top_left_singular(ch.image_columns(psi), r);
  return clamp_fidelity((u.adjoint() * psi).norm());
}

double fixed_rank_pair_fidelity(const KrausChannel& ch0, const Vector& psi0, int r0,
                                const KrausChannel& ch1, const Vector& psi1, int r1) {
  const Matrix u0 = top_left_singular(ch0.image_columns(psi0), r0);
  const Matrix u1 = top_left_singular(ch1.image_columns(psi1), r1);
  Eigen::JacobiSVD<Matrix> svd(u0.adjoint() * u1);
  return clamp_fidelity(svd.singularValues()[0]);
}

// Component of the image columns outside their dominant rank-r subspace,
// relative to the Frobenius norm. Vanishes iff rank <= r.
void append_tail(const Matrix& cols, int r, RealVector& out) {
  const double fro = cols.norm();
  const Matrix ur = top_left_singular(cols, r);
  Matrix tail = cols - ur * (ur.adjoint() * cols);
  if (fro > 0.0) tail /= fro;
  const Eigen::Index base = out.size();
  out.conservativeResize(base + 2 * tail.size());
  for (Eigen::Index i = 0; i < tail.size(); ++i) {
    out[base + 2 * i] = tail.data()[i].real();
    out[base + 2 * i + 1] = tail.data()[i].imag();
  }
}

Vector unit(const RealVector& x) {
  Vector v = search::to_complex(x);
  return v / v.norm();
}

void canonicalize_single(RealVector& x) {
  Vector v = unit(x);
  apply_gauge(v);
  x = search::to_real(v);
}

// Unit vector in `support` closest to psi; any basis vector if psi is
// orthogonal to the support.
PureState overlap_state(const Projector& support, const Vector& psi) {
  if (support.rank == 0) return PureState(psi);
  const Vector proj = support.basis * (support.basis.adjoint() * psi);
  if (proj.norm() > 1e-12) return PureState(proj);
  return PureState(Vector(support.basis.col(0)));
}

// Maps a search point to (value, point) under the cut-based support: the
// point is first pulled onto the variety of its numerical rank when it sits
// just below the cut.
using Finalize = std::function<std::pair<double, RealVector>(const RealVector&)>;

// Pooled outcome of one multistart pass per stratum.
struct Assembled {
  double value = 1.0;
  RealVector best_x;
  int best_problem = -1;
  int starts = 0;
  int converged = 0;
  std::vector<std::pair<double, RealVector>> minima;
};

Assembled run_strata(const std::vector<search::Problem>& problems,
                     const std::vector<bool>& trivial, const OptimizerConfig& config,
                     std::uint64_t tag_base, const Finalize& finalize) {
  Assembled a;
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](const RealVector& raw, bool converged, std::size_t s) {
    auto [v, x] = finalize(raw);
    if (converged) {
      ++a.converged;
      a.minima.emplace_back(v, x);
    }
    if (v < best) {
      best = v;
      a.best_x = std::move(x);
      a.best_problem = static_cast<int>(s);
    }
  };
  for (std::size_t s = 0; s < problems.size(); ++s) {
    const auto& p = problems[s];
    if (trivial[s]) {
      auto rng = search::make_stream(config.seed, tag_base + s, 0);
      RealVector x = p.sample(rng);
      p.canonicalize(x);
      ++a.starts;
      consider(x, true, s);
      continue;
    }
    const auto locals = search::multistart(p, config, tag_base + s);
    for (const auto& lr : locals) {
      ++a.starts;
      if (lr.feasible) consider(lr.x, lr.converged, s);
    }
  }
  if (a.converged == 0) {
    throw OptimizerError("fidelity search: no start converged (best value " +
                             std::to_string(std::isfinite(best) ? best : 1.0) + ")",
                         std::isfinite(best) ? best : 1.0);
  }
  a.value = best;
  std::stable_sort(a.minima.begin(), a.minima.end(),
                   [](const auto& l, const auto& r) { return l.first < r.first; });
  return a;
}

// Rank of the image columns under the support cut, and whether the
// discarded singular values are above round-off.
std::pair<int, bool> cut_rank(const Matrix& cols) {
  const int r = column_span_projector(cols).rank;
  RealVector tail(0);
  append_tail(cols, r, tail);
  return {r, tail.norm() > kSnapTail};
}

search::Problem single_state_problem(const KrausChannel& ch, const Stratum& s) {
  search::Problem p;
  const int d = ch.dim();
  const int rank = s.rank;
  p.n = 2 * d;
  p.objective = [&ch, rank](const RealVector& x) {
    return fixed_rank_state_fidelity(ch, unit(x), rank);
  };
  p.sample = [d](std::mt19937_64& rng) { return search::random_sphere_point(d, rng); };
  p.canonicalize = canonicalize_single;
  if (s.constrained) {
    p.residual = [&ch, rank](const RealVector& x) {
      RealVector r(0);
      append_tail(ch.image_columns(unit(x)), rank, r);
      return r;
    };
  }
  return p;
}

std::pair<double, RealVector> finalize_single(const KrausChannel& ch, const RealVector& x0) {
  RealVector x = x0;
  const auto [r, dirty] = cut_rank(ch.image_columns(unit(x)));
  if (dirty) {
    search::Problem p = single_state_problem(ch, {.rank = r, .constrained = true});
    if (auto snapped = search::project(p, x)) x = std::move(*snapped);
  }
  return {channel_state_fidelity(ch, unit(x)), x};
}

// x = (x0, xc) in R^{4d}: psi0 = x0/|x0|, psi1 = q psi0 + sqrt(1-q^2) chi,
// chi the normalized component of xc orthogonal to psi0.
std::pair<Vector, Vector> decode_pair(const RealVector& x, int d, double q) {
  const Vector psi0 = unit(x.head(2 * d));
  if (q >= 1.0) return {psi0, psi0};
  Vector chi = search::to_complex(x.tail(2 * d));
  const double raw = chi.norm();
  if (raw > 0.0) chi /= raw;
  chi -= psi0 * psi0.dot(chi);
  double n = chi.norm();
  if (n > 1e-6) {
    // Second pass restores orthogonality lost to cancellation.
    chi -= psi0 * psi0.dot(chi);
    n = chi.norm();
  } else {
    // Degenerate direction: use the basis vector least aligned with psi0.
    Eigen::Index k = 0;
    psi0.cwiseAbs().minCoeff(&k);
    chi = Vector::Zero(d);
    chi[k] = 1.0;
    chi -= psi0 * psi0.dot(chi);
    n = chi.norm();
  }
  chi /= n;
  return {psi0, q * psi0 + std::sqrt(std::max(0.0, 1.0 - q * q)) * chi};
}

void canonicalize_pair(RealVector& x, int d);

search::Problem pair_problem(const KrausChannel& ch0, const Stratum& s0, const KrausChannel& ch1,
                             const Stratum& s1, double q) {
  const int d = ch0.dim();
  search::Problem p;
  p.n = 4 * d;
  p.objective = [&ch0, &ch1, d, q, r0 = s0.rank, r1 = s1.rank](const RealVector& x) {
    const auto [psi0, psi1] = decode_pair(x, d, q);
    return fixed_rank_pair_fidelity(ch0, psi0, r0, ch1, psi1, r1);
  };
  p.sample = [d](std::mt19937_64& rng) {
    RealVector x(4 * d);
    x.head(2 * d) = search::random_sphere_point(d, rng);
    x.tail(2 * d) = search::random_sphere_point(d, rng);
    return x;
  };
  p.canonicalize = [d](RealVector& x) { canonicalize_pair(x, d); };
  if (s0.constrained || s1.constrained) {
    p.residual = [&ch0, &ch1, d, q, s0, s1](const RealVector& x) {
      const auto [psi0, psi1] = decode_pair(x, d, q);
      RealVector r(0);
      if (s0.constrained) append_tail(ch0.image_columns(psi0), s0.rank, r);
      if (s1.constrained) append_tail(ch1.image_columns(psi1), s1.rank, r);
      return r;
    };
  }
  return p;
}

void canonicalize_pair(RealVector& x, int d) {
  Vector v0 = search::to_complex(x.head(2 * d));
  Vector vc = search::to_complex(x.tail(2 * d));
  v0 /= v0.norm();
  const double nc = vc.norm();
  if (nc > 0.0) vc /= nc;
  // Common phase on both halves leaves (psi0, psi1) fixed up to a global phase.
  for (Eigen::Index i = 0; i < v0.size(); ++i) {
    const double mod = std::abs(v0[i]);
    if (mod > tol::kGauge) {
      const Complex ph = std::conj(v0[i]) / mod;
      v0 *= ph;
      vc *= ph;
      v0[i] = Complex(std::abs(v0[i]), 0.0);
      break;
    }
  }
  x.head(2 * d) = search::to_real(v0);
  x.tail(2 * d) = search::to_real(vc);
}

}  // namespace

double clamp_fidelity(double raw) {
  if (raw > 1.0 + kFidelityClampSlack) {
    throw Error("fidelity: singular value " + std::to_string(raw) + " exceeds 1");
  }
  return std::clamp(raw, 0.0, 1.0);
}

double ray_distance(const Vector& a, const Vector& b) {
  const double ov = std::abs(a.dot(b)) / (a.norm() * b.norm());
  return std::sqrt(std::max(0.0, 1.0 - ov * ov));
}

double max_fidelity(const Projector& s0, const Projector& s1) {
  if (s0.rank == 0 || s1.rank == 0) return 0.0;
  const Matrix m = s0.basis.adjoint() * s1.basis;
  Eigen::JacobiSVD<Matrix> svd(m);
  return clamp_fidelity(svd.singularValues()[0]);
}

FidelityResult max_fidelity_states(const DensityOperator& rho0, const DensityOperator& rho1) {
  if (rho0.dim() != rho1.dim()) throw ShapeError("max_fidelity_states: dimension mismatch");
  const Projector p0 = support_projector(rho0);
  const Projector p1 = support_projector(rho1);
  const Matrix m = p0.basis.adjoint() * p1.basis;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double value = clamp_fidelity(svd.singularValues()[0]);
  Vector a = p0.basis * svd.matrixU().col(0);
  Vector b = p1.basis * svd.matrixV().col(0);
  // Align phases so <a|b> is real nonnegative.
  const Complex ov = a.dot(b);
  if (std::abs(ov) > 0.0) b *= std::conj(ov) / std::abs(ov);
  FidelityResult r{
      .value = value,
      .theta = std::acos(value),
      .witness_input = PureState(a),
      .witness_partner = PureState(b),
      .witness_output_overlap_state = PureState(b),
      .starts = 0,
      .converged_starts = 0,
      .best_gradient_norm = 0.0,
      .minimizers = {},
  };
  return r;
}

double channel_state_fidelity(const KrausChannel& channel, const Vector& psi) {
  const Projector p = column_span_projector(channel.image_columns(psi));
  if (p.rank == 0) return 0.0;
  return clamp_fidelity((p.basis.adjoint() * psi).norm() / psi.norm());
}

double channel_output_overlap(const KrausChannel& channel, const Vector& psi, const Vector& c) {
  const Projector p = column_span_projector(channel.image_columns(psi));
  if (p.rank == 0) return 0.0;
  return clamp_fidelity((p.basis.adjoint() * c).norm() / c.norm());
}

double output_pair_fidelity(const KrausChannel& ch0, const Vector& psi0, const KrausChannel& ch1,
                            const Vector& psi1) {
  return max_fidelity(column_span_projector(ch0.image_columns(psi0)),
                      column_span_projector(ch1.image_columns(psi1)));
}

namespace {

FidelityResult single_state_result(const KrausChannel& channel,
                                   const std::vector<search::Problem>& problems,
                                   const std::vector<bool>& trivial, const Assembled& a) {
  const Vector psi = unit(a.best_x);
  const Projector support = column_span_projector(channel.image_columns(psi));
  FidelityResult r{
      .value = a.value,
      .theta = std::acos(a.value),
      .witness_input = PureState(psi),
      .witness_partner = std::nullopt,
      .witness_output_overlap_state = overlap_state(support, psi),
      .starts = a.starts,
      .converged_starts = a.converged,
      .best_gradient_norm = trivial[a.best_problem]
                                ? 0.0
                                : search::gradient_norm(problems[a.best_problem], a.best_x),
      .minimizers = {},
  };
  for (const auto& [v, x] : a.minima) r.minimizers.push_back({PureState(unit(x)), std::nullopt, v});
  return r;
}

}  // namespace

FidelityResult f1_identity(const KrausChannel& channel, const OptimizerConfig& config) {
  config.validate();
  channel.require_valid();
  const auto strata = strata_for(channel, config.seed);
  std::vector<search::Problem> problems;
  std::vector<bool> trivial;
  for (const auto& s : strata) {
    problems.push_back(single_state_problem(channel, s));
    trivial.push_back(s.full);
  }
  const Assembled a = run_strata(problems, trivial, config, kTagF1, [&channel](const RealVector& x) {
    return finalize_single(channel, x);
  });
  return single_state_result(channel, problems, trivial, a);
}

std::optional<FidelityResult> f1_rank_limited(const KrausChannel& channel, int rank,
                                              const OptimizerConfig& config) {
  config.validate();
  channel.require_valid();
  if (rank < 1) throw DomainError("f1_rank_limited: rank must be >= 1");
  const std::vector<search::Problem> problems{
      single_state_problem(channel, {.rank = rank, .constrained = true})};
  const std::vector<bool> trivial{false};
  try {
    const Assembled a = run_strata(problems, trivial, config, kTagRank + rank,
                                   [&channel](const RealVector& x) {
                                     return finalize_single(channel, x);
                                   });
    return single_state_result(channel, problems, trivial, a);
  } catch (const OptimizerError&) {
    return std::nullopt;
  }
}

Alpha0Result alpha0(const KrausChannel& channel, const FidelityResult& f1,
                    const OptimizerConfig& config) {
  if (!(f1.value < 1.0 - kUndistinguishable)) {
    throw DomainError("alpha0: undefined for F1 = 1 (theta = 0)");
  }
  std::vector<Minimizer> candidates = f1.minimizers;
  if (candidates.empty()) {
    candidates = f1_identity(channel, config).minimizers;
    candidates.push_back({f1.witness_input, std::nullopt, f1.value});
  }
  double best_cos = -1.0;
  std::optional<PureState> best_b;
  std::optional<PureState> best_bp;
  std::vector<Vector> cluster_reps;
  for (const auto& m : candidates) {
    if (m.value > f1.value + kClusterValueWindow) continue;
    const Vector& b = m.input.amplitudes();
    const Projector support = column_span_projector(channel.image_columns(b));
    const Vector residual = b - support.basis * (support.basis.adjoint() * b);
    const double c = std::min(residual.norm(), 1.0);
    bool fresh = true;
    for (const auto& rep : cluster_reps) {
      if (ray_distance(rep, b) < kClusterRayDistance) {
        fresh = false;
        break;
      }
    }
    if (fresh) cluster_reps.push_back(b);
    if (c > best_cos && c > 1e-12) {
      best_cos = c;
      best_b = m.input;
      best_bp = PureState(residual);
    }
  }
  if (!best_b) throw DomainError("alpha0: no minimizer with a nonzero residual off supp E(b)");
  return Alpha0Result{
      .cos_alpha0 = best_cos,
      .alpha0 = std::acos(best_cos),
      .witness_b = *best_b,
      .witness_b_prime = *best_bp,
      .minimizer_cluster_count = static_cast<int>(cluster_reps.size()),
  };
}

FidelityResult q_max_fidelity(const KrausChannel& ch0, const KrausChannel& ch1, double q,
                              const OptimizerConfig& config) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("q_max_fidelity: q must lie in [0, 1]");
  if (ch0.dim() != ch1.dim()) throw ShapeError("q_max_fidelity: channel dimensions differ");
  config.validate();
  ch0.require_valid();
  ch1.require_valid();
  const int d = ch0.dim();
  if (d == 1 && q < 1.0) throw DomainError("q_max_fidelity: q < 1 impossible in dimension 1");

  const auto strata0 = strata_for(ch0, config.seed);
  const auto strata1 = strata_for(ch1, config.seed);
  std::vector<search::Problem> problems;
  std::vector<bool> trivial;
  for (const auto& s0 : strata0) {
    for (const auto& s1 : strata1) {
      problems.push_back(pair_problem(ch0, s0, ch1, s1, q));
      trivial.push_back(s0.full || s1.full);
    }
  }
  const Assembled a =
      run_strata(problems, trivial, config, kTagQ, [&ch0, &ch1, d, q](const RealVector& x0) {
        RealVector x = x0;
        const auto [p0, p1] = decode_pair(x, d, q);
        const auto [r0, dirty0] = cut_rank(ch0.image_columns(p0));
        const auto [r1, dirty1] = cut_rank(ch1.image_columns(p1));
        if (dirty0 || dirty1) {
          const search::Problem p = pair_problem(ch0, {.rank = r0, .constrained = true}, ch1,
                                                 {.rank = r1, .constrained = true}, q);
          if (auto snapped = search::project(p, x)) x = std::move(*snapped);
        }
        const auto [psi0, psi1] = decode_pair(x, d, q);
        return std::pair{output_pair_fidelity(ch0, psi0, ch1, psi1), x};
      });
  const auto [psi0, psi1] = decode_pair(a.best_x, d, q);
  const Projector s0 = column_span_projector(ch0.image_columns(psi0));
  const Projector s1 = column_span_projector(ch1.image_columns(psi1));
  Vector out0 = s0.basis.col(0);
  if (s0.rank > 0 && s1.rank > 0) {
    Eigen::JacobiSVD<Matrix> svd(s0.basis.adjoint() * s1.basis, Eigen::ComputeFullU);
    out0 = s0.basis * svd.matrixU().col(0);
  }
  FidelityResult r{
      .value = a.value,
      .theta = std::acos(a.value),
      .witness_input = PureState(psi0),
      .witness_partner = PureState(psi1),
      .witness_output_overlap_state = PureState(out0),
      .starts = a.starts,
      .converged_starts = a.converged,
      .best_gradient_norm = trivial[a.best_problem]
                                ? 0.0
                                : search::gradient_norm(problems[a.best_problem], a.best_x),
      .minimizers = {},
  };
  for (const auto& [v, x] : a.minima) {
    const auto [m0, m1] = decode_pair(x, d, q);
    r.minimizers.push_back({PureState(m0), PureState(m1), v});
  }
  return r;
}

FidelityResult f1_ea(const KrausChannel& channel, const OptimizerConfig& config) {
  return f1_identity(extend_with_ancilla(channel, channel.dim()), config);
}

PureState lemma2_witness(const KrausChannel& channel, const PureState& b, const PureState& b_prime,
                         double alpha) {
  if (b.dim() != channel.dim() || b_prime.dim() != channel.dim()) {
    throw ShapeError("lemma2_witness: dimension mismatch");
  }
  if (!(alpha >= 0.0 && alpha <= std::numbers::pi / 2 + 1e-12)) {
    throw DomainError("lemma2_witness: alpha must lie in [0, pi/2]");
  }
  for (int i = 0; i < channel.kraus_count(); ++i) {
    const Complex leak = b_prime.amplitudes().dot(channel[i] * b.amplitudes());
    if (std::abs(leak) > 1e-8) {
      throw DomainError("lemma2_witness: b' is not orthogonal to supp E(b)");
    }
  }
  const Complex ov = b.inner(b_prime);
  const double cos_a0 = std::min(std::abs(ov), 1.0);
  if (cos_a0 >= 1.0 - 1e-12) {
    throw DomainError("lemma2_witness: degenerate geometry, cos(alpha0) = 1");
  }
  Vector bp = b_prime.amplitudes();
  if (std::abs(ov) > 0.0) bp *= std::conj(ov) / std::abs(ov);
  const double sin_a0 = std::sqrt(1.0 - cos_a0 * cos_a0);
  const double a0 = std::atan2(sin_a0, cos_a0);
  const double y = std::sin(alpha) / sin_a0;
  const double x = std::sin(a0 - alpha) / sin_a0;
  return PureState(x * b.amplitudes() + y * bp);
}

}  // namespace qdisc
