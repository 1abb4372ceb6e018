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

#ifndef QDISC_SIMULATOR_HPP
#define QDISC_SIMULATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qdisc/core.hpp"
#include "qdisc/fidelity.hpp"
#include "qdisc/protocol.hpp"

namespace qdisc {

enum class Hypothesis { Identity, Channel };

const char* hypothesis_name(Hypothesis h);

struct TraceRecord {
  // F(channel branch, identity branch) after each query.
  std::vector<double> round_overlaps;
  double terminal_error_probability = 0.0;
  Hypothesis hypothesis = Hypothesis::Identity;
};

struct SimulationReport {
  int shots = 0;
  int wrong_guesses = 0;
  double empirical_error = 0.0;
  // Largest per-shot probability of the outcome that leads to a wrong guess.
  double max_terminal_leak = 0.0;
  std::uint64_t seed = 0;
};

// Exact density-operator evolution of both branches; the terminal error is
// taken on the branch selected by `hypothesis`.
TraceRecord run_once(const ProtocolPlan& plan, Hypothesis hypothesis);

// Shot i draws from stream (seed, i): a uniform hypothesis, a Kraus branch
// for every map on the way, and the final outcome. Independent of `threads`.
SimulationReport monte_carlo(const ProtocolPlan& plan, int shots, std::uint64_t seed,
                             int threads = 0);

struct Thm4Row {
  double q = 0.0;
  double bound = 0.0;
  double min_sampled = 1.0;
  bool violated = false;
};

struct Thm4Options {
  int threads = 0;
  // Extra first inputs tried at every q (with a sampled partner, or the
  // input itself at q = 1), e.g. minimizers of F(E(psi), psi).
  std::vector<PureState> anchors;
};

// Samples psi0 Haar-uniform, psi1 = q psi0 + sqrt(1 - q^2) chi with chi
// Haar-uniform orthogonal to psi0, and records the smallest
// F(E0(psi0), E1(psi1)). A row is violated when that minimum falls below
// thm4_lower(q, theta0, theta1) - 1e-6. Sampling can refute the bound but
// never establish it.
std::vector<Thm4Row> verify_thm4(const KrausChannel& ch0, const KrausChannel& ch1, double theta0,
                                 double theta1, const std::vector<double>& q_grid,
                                 int samples_per_q, std::uint64_t seed,
                                 const Thm4Options& options = {});

struct Lemma2Row {
  double alpha = 0.0;
  double witness_fidelity = 0.0;  // F(E(b), c)
  double bound = 0.0;
  double margin = 0.0;  // bound - witness_fidelity
  bool passed = false;  // margin >= -1e-9
};

// theta is taken from the witness b itself, arccos F(E(b), b). Requires
// 0 < theta < pi/2.
std::vector<Lemma2Row> verify_lemma2(const KrausChannel& channel, const FidelityResult& f1,
                                     const Alpha0Result& a0, const std::vector<double>& alpha_grid);

// n equally spaced angles from 0 to pi/2 inclusive.
std::vector<double> alpha_grid(int n);

// Comma-separated tables, one header line, numbers with 10 significant digits.
std::string thm4_csv(const std::vector<Thm4Row>& rows);
std::string lemma2_csv(const std::vector<Lemma2Row>& rows);

}  // namespace qdisc

#endif  // QDISC_SIMULATOR_HPP
