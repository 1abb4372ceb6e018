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

#ifndef QDISC_FIDELITY_HPP
#define QDISC_FIDELITY_HPP

#include <optional>
#include <vector>

#include "qdisc/core.hpp"
#include "qdisc/search.hpp"

namespace qdisc {

struct Minimizer {
  PureState input;
  std::optional<PureState> partner;
  double value = 1.0;
};

/// Optimized (or closed-form) maximal fidelity with witnesses and solver
/// diagnostics. For state fidelities and F1 the witness is a single input;
/// q-fidelities also carry the partner input.
struct FidelityResult {
  double value = 1.0;
  double theta = 0.0;  // arccos(value)
  PureState witness_input;
  std::optional<PureState> witness_partner;
  // Unit vector in the (first) output support attaining the maximal overlap.
  PureState witness_output_overlap_state;
  int starts = 0;
  int converged_starts = 0;
  double best_gradient_norm = 0.0;
  // Converged local minima, ascending by value.
  std::vector<Minimizer> minimizers;
};

struct Alpha0Result {
  double cos_alpha0 = 0.0;
  double alpha0 = 0.0;
  PureState witness_b;
  PureState witness_b_prime;
  int minimizer_cluster_count = 0;
};

// Singular values of a support-overlap matrix must not exceed 1 by more than
// this before being clamped; larger excess is reported as an Error.
inline constexpr double kFidelityClampSlack = 1e-9;
double clamp_fidelity(double raw);

// F(rho0, rho1) = max |<a|b>| over unit a in supp(rho0), b in supp(rho1).
double max_fidelity(const Projector& support0, const Projector& support1);
FidelityResult max_fidelity_states(const DensityOperator& rho0, const DensityOperator& rho1);

// F(E(psi), psi) = || P_{supp E(psi)} psi ||, without forming E(psi).
double channel_state_fidelity(const KrausChannel& channel, const Vector& psi);
// F(E(psi), |c><c|) for a pure c.
double channel_output_overlap(const KrausChannel& channel, const Vector& psi, const Vector& c);
// F(E0(psi0), E1(psi1)).
double output_pair_fidelity(const KrausChannel& ch0, const Vector& psi0, const KrausChannel& ch1,
                            const Vector& psi1);

// min over pure psi of F(E(psi), psi).
FidelityResult f1_identity(const KrausChannel& channel, const OptimizerConfig& config = {});

// min over psi with rank supp E(psi) <= rank of F(E(psi), psi); nullopt
// when no start reaches that set.
std::optional<FidelityResult> f1_rank_limited(const KrausChannel& channel, int rank,
                                              const OptimizerConfig& config = {});

// Requires f1.value < 1 - 1e-6; throws DomainError otherwise.
Alpha0Result alpha0(const KrausChannel& channel, const FidelityResult& f1,
                    const OptimizerConfig& config = {});

// min F(E0(psi0), E1(psi1)) over pure pairs with |<psi0|psi1>| = q.
FidelityResult q_max_fidelity(const KrausChannel& ch0, const KrausChannel& ch1, double q,
                              const OptimizerConfig& config = {});

// f1_identity of I_R (x) E with dim R = dim Q.
FidelityResult f1_ea(const KrausChannel& channel, const OptimizerConfig& config = {});

// |c> = x|b> + y|b'> with y = sin(alpha)/sin(alpha0), x = sin(alpha0 - alpha)/sin(alpha0),
// cos(alpha0) = |<b|b'>|, b' phase-aligned so <b|b'> >= 0. Requires
// <b'|E_i|b> = 0 for all i and alpha in [0, pi/2].
PureState lemma2_witness(const KrausChannel& channel, const PureState& b, const PureState& b_prime,
                         double alpha);

// Ray distance sqrt(1 - |<a|b>|^2).
double ray_distance(const Vector& a, const Vector& b);

}  // namespace qdisc

#endif  // QDISC_FIDELITY_HPP
