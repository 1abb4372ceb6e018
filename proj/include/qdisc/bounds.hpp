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

#ifndef QDISC_BOUNDS_HPP
#define QDISC_BOUNDS_HPP

#include <optional>
#include <string>

#include "qdisc/core.hpp"
#include "qdisc/fidelity.hpp"
#include "qdisc/search.hpp"

namespace qdisc {

class NotDistinguishableError : public DomainError {
 public:
  using DomainError::DomainError;
};

// F1 below 1 - kDistinguishableMargin counts as sequentially distinguishable.
inline constexpr double kDistinguishableMargin = 1e-6;
// F1 at or below this is treated as exactly zero (theta = pi/2, one query).
inline constexpr double kSingleQueryFidelity = 1e-9;
// Query-count ceilings ignore an excess of this much over an integer, so
// that ratios like pi / (2 * pi/6) do not round up on the last ulp.
inline constexpr double kCeilSlack = 1e-9;

int ceil_count(double x);

// ceil(pi / (2 arccos f1)), exact optimum for qubit channels.
int nmin_exact_2d(double f1_value);
// ceil(pi / (2 theta_sum)). Lower bound for d dimensions and for the
// channel-pair corollaries when fed theta0 + theta1.
int nmin_lower(double theta_sum);
// ceil(ln cos(alpha0) / ln cos(theta)) + 1 for 0 < theta < pi/2.
int nmin_upper(double theta, double cos_alpha0);
// |sin(alpha0 - alpha)| / sin(alpha0) * cos(theta).
double lemma2_bound(double theta, double alpha0, double alpha);
// Lower bound on F_q(E0, E1) from the channel angles; 0 in the guarded cases.
double thm4_lower(double q, double theta0, double theta1);

struct DistinguishabilityReport {
  std::string channel_name;
  int dim = 0;
  double f1 = 1.0;
  double theta = 0.0;
  std::optional<double> cos_alpha0;
  bool distinguishable = false;
  std::optional<int> nmin_exact_2d;
  std::optional<int> nmin_lower;
  std::optional<int> nmin_upper;
  std::optional<double> ea_f1;
  std::optional<int> ea_nmin_lower;
  std::optional<int> ea_nmin_upper;
};

DistinguishabilityReport build_report(const KrausChannel& channel, const OptimizerConfig& config,
                                      bool with_ea);

}  // namespace qdisc

#endif  // QDISC_BOUNDS_HPP
