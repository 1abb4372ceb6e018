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

// Shared fixtures for the test binaries: channel families with known
// angles, an independent brute-force oracle for qubit F1, and random states.

#ifndef QDISC_TESTS_TESTING_HPP
#define QDISC_TESTS_TESTING_HPP

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qdisc/core.hpp"

namespace qdisc::testing {

inline constexpr double kPi = 3.14159265358979323846;

// The five angles used for the rotation and replace families.
const std::vector<double>& family_angles();

struct TestChannel {
  KrausChannel channel;
  // arccos F1(E, I) when known in closed form; absent for f1 = 1 channels.
  std::optional<double> theta;
};

std::vector<TestChannel> qubit_rotations();
std::vector<TestChannel> qubit_replace();
// Rotations, replace family, Z, identity, amplitude damping, depolarizing,
// and three qutrit channels.
std::vector<TestChannel> all_test_channels();

// Qutrit channel {|c_theta><0|, |1><1|, |2><2|} with F1 = cos(theta).
KrausChannel qutrit_replace(double theta);
// Qutrit unitary R_theta (+) 1.
KrausChannel qutrit_rotation(double theta);

// min over the Bloch sphere of ||P_supp(E(psi)) psi||: a 400 x 800 grid in
// (polar, azimuth) followed by golden-section refinement around the best
// cells. Supports come from an eigendecomposition of the output density
// matrix, not from the Kraus images.
double bloch_oracle_f1(const KrausChannel& channel);

Vector random_state(int dim, std::mt19937_64& rng);
// Random density operator of the given rank.
Matrix random_density(int dim, int rank, std::mt19937_64& rng);
// Random valid channel with m Kraus operators (isometry slices).
KrausChannel random_channel(int dim, int m, std::mt19937_64& rng);

// Inputs for a state-pair transform. Feasible instances satisfy
// |<target_a|target_b>| >= F(source_a, source_b); infeasible ones fall short
// of it by at least 1e-3.
struct PairInstance {
  Matrix source_a;
  Vector source_b;
  Vector target_a;
  Vector target_b;
  double source_fidelity = 0.0;
};
PairInstance random_pair_instance(int dim, bool feasible, std::mt19937_64& rng);

// Writes text to a fresh file under the system temp directory.
std::string write_temp(const std::string& stem, const std::string& text);

}  // namespace qdisc::testing

#endif  // QDISC_TESTS_TESTING_HPP
