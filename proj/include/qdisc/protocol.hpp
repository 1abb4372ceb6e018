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

// Adaptive discrimination protocols: an unknown operation is queried N
// times, with known intermediate maps between queries, and a final
// two-outcome measurement along final_measurement_vector tells the
// hypotheses apart without error.

#ifndef QDISC_PROTOCOL_HPP
#define QDISC_PROTOCOL_HPP

#include <optional>
#include <string>
#include <vector>

#include "qdisc/core.hpp"
#include "qdisc/fidelity.hpp"
#include "qdisc/search.hpp"

namespace qdisc {

// No CPTP map sends the source pair to the target pair.
class InfeasibleTransformError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A plan could not be completed (infeasible intermediate map, stalled
// fidelity reduction, or inaccurate witnesses).
class SynthesisError : public Error {
 public:
  using Error::Error;
};

// CPTP map with kraus applied to source_a giving |target_a><target_a| and
// applied to |source_b><source_b| giving |target_b><target_b|.
struct StatePairTransform {
  std::vector<Matrix> kraus;
  DensityOperator source_a;
  PureState source_b;
  PureState target_a;
  PureState target_b;

  KrausChannel as_channel() const;
};

struct TransformCheck {
  double completeness_residual = 0.0;
  double choi_min_eigenvalue = 0.0;
  double action_error_a = 0.0;  // trace distance
  double action_error_b = 0.0;
  bool ok = false;  // residual <= 1e-9, choi >= -1e-9, actions <= 1e-8
};

TransformCheck check_transform(const StatePairTransform& t);

// Dual-basis construction. Throws InfeasibleTransformError when
// F(source_a, source_b) > |<target_a|target_b>| + 1e-9, or when source_b lies
// in supp(source_a) and the targets are not the same ray.
StatePairTransform pair_transform(const DensityOperator& source_a, const PureState& source_b,
                                  const PureState& target_a, const PureState& target_b);

struct Round {
  int index = 1;
  // Applied to the carried state before this round's query; absent in round 1.
  std::optional<StatePairTransform> pre_transform;
  // State fed to the query under each hypothesis.
  PureState input_if_E;
  PureState input_if_I;
  // F(E(input_if_E), input_if_I) after the query.
  double predicted_overlap_after = 0.0;
};

struct ProtocolPlan {
  KrausChannel channel;
  std::string scheme;  // "2d" or "general"
  std::vector<Round> rounds;
  // Outcome along this vector means "identity"; the channel branch never
  // produces it.
  PureState final_measurement_vector;
  int claimed_queries = 0;
};

struct CollinearInput {
  PureState b;
  PureState c;  // common direction of every E_i|b>
  double overlap = 0.0;  // |<c|b>|
};

// Input whose Kraus images are all parallel (E(b) pure), choosing the one
// with the smallest |<c|b>|. Absent when the second singular value of
// [E_1 b, ..., E_m b] cannot be driven below 1e-8.
std::optional<CollinearInput> collinear_input_search(const KrausChannel& channel,
                                                     const OptimizerConfig& config = {});

// Qubit scheme: nmin_exact_2d(f1.value) rounds. Requires dim 2 and
// f1.value < 1 - 1e-6.
ProtocolPlan plan_2d(const KrausChannel& channel, const FidelityResult& f1,
                     const OptimizerConfig& config = {});

// Fidelity-reduction scheme for any dimension; at most nmin_upper rounds.
ProtocolPlan plan_general(const KrausChannel& channel, const FidelityResult& f1,
                          const Alpha0Result& a0, const OptimizerConfig& config = {});

// <b'|E(rho)|b'> for the last channel-branch input: the probability that the
// channel branch reports "identity".
double terminal_leak(const ProtocolPlan& plan);

}  // namespace qdisc

#endif  // QDISC_PROTOCOL_HPP
