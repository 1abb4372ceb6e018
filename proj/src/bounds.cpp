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

#include "qdisc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qdisc {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kAngleSlack = 1e-12;

struct UpperParts {
  std::optional<double> cos_alpha0;
  int nmin_upper = 1;
};

UpperParts upper_from(const KrausChannel& channel, const FidelityResult& f1,
                      const OptimizerConfig& config) {
  UpperParts u;
  const Alpha0Result a0 = alpha0(channel, f1, config);
  u.cos_alpha0 = a0.cos_alpha0;
  if (f1.value > kSingleQueryFidelity) u.nmin_upper = nmin_upper(f1.theta, a0.cos_alpha0);
  return u;
}

}  // namespace

int ceil_count(double x) { return std::max(1, static_cast<int>(std::ceil(x - kCeilSlack))); }

int nmin_exact_2d(double f1_value) {
  if (!(f1_value >= 0.0)) throw DomainError("nmin_exact_2d: fidelity must be >= 0");
  if (f1_value >= 1.0) throw NotDistinguishableError("nmin_exact_2d: F1 = 1, not distinguishable");
  return ceil_count(std::numbers::pi / (2.0 * std::acos(f1_value)));
}

int nmin_lower(double theta_sum) {
  if (!(theta_sum > 0.0)) throw NotDistinguishableError("nmin_lower: angle sum must be > 0");
  if (theta_sum > std::numbers::pi + kAngleSlack) {
    throw DomainError("nmin_lower: angle sum exceeds pi");
  }
  return ceil_count(std::numbers::pi / (2.0 * theta_sum));
}

int nmin_upper(double theta, double cos_alpha0) {
  if (!(theta > 0.0 && theta < kHalfPi)) {
    throw DomainError("nmin_upper: theta must lie in (0, pi/2); use the single-query path");
  }
  if (!(cos_alpha0 >= 0.0 && cos_alpha0 < 1.0)) {
    throw DomainError("nmin_upper: cos(alpha0) must lie in [0, 1)");
  }
  if (cos_alpha0 == 0.0) return 1;
  const double ratio = std::max(0.0, std::log(cos_alpha0) / std::log(std::cos(theta)));
  return static_cast<int>(std::ceil(ratio - kCeilSlack)) + 1;
}

double lemma2_bound(double theta, double alpha0, double alpha) {
  if (!(theta > 0.0 && theta < kHalfPi)) throw DomainError("lemma2_bound: theta outside (0, pi/2)");
  if (!(alpha0 > 0.0 && alpha0 < kHalfPi)) {
    throw DomainError("lemma2_bound: alpha0 outside (0, pi/2)");
  }
  if (!(alpha >= 0.0 && alpha <= kHalfPi + kAngleSlack)) {
    throw DomainError("lemma2_bound: alpha outside [0, pi/2]");
  }
  return std::abs(std::sin(alpha0 - alpha)) / std::sin(alpha0) * std::cos(theta);
}

double thm4_lower(double q, double theta0, double theta1) {
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("thm4_lower: q outside [0, 1]");
  if (!(theta0 >= 0.0 && theta0 <= kHalfPi + kAngleSlack) ||
      !(theta1 >= 0.0 && theta1 <= kHalfPi + kAngleSlack)) {
    throw DomainError("thm4_lower: channel angles must lie in [0, pi/2]");
  }
  const double alpha = std::acos(q);
  const double edge = kHalfPi - kAngleSlack;
  if (alpha + theta0 >= edge || alpha + theta1 >= edge || alpha + theta0 + theta1 >= edge) {
    return 0.0;
  }
  return std::cos(alpha + theta0 + theta1);
}

DistinguishabilityReport build_report(const KrausChannel& channel, const OptimizerConfig& config,
                                      bool with_ea) {
  DistinguishabilityReport r;
  r.channel_name = channel.name();
  r.dim = channel.dim();
  const FidelityResult f1 = f1_identity(channel, config);
  r.f1 = f1.value;
  r.theta = f1.theta;
  r.distinguishable = f1.value < 1.0 - kDistinguishableMargin;
  if (r.distinguishable) {
    r.nmin_lower = nmin_lower(f1.theta);
    if (channel.dim() == 2) r.nmin_exact_2d = nmin_exact_2d(f1.value);
    const UpperParts u = upper_from(channel, f1, config);
    r.cos_alpha0 = u.cos_alpha0;
    r.nmin_upper = u.nmin_upper;
  }
  if (with_ea) {
    const KrausChannel extended = extend_with_ancilla(channel, channel.dim());
    const FidelityResult ea = f1_identity(extended, config);
    r.ea_f1 = ea.value;
    if (ea.value < 1.0 - kDistinguishableMargin) {
      r.ea_nmin_lower = nmin_lower(ea.theta);
      r.ea_nmin_upper = upper_from(extended, ea, config).nmin_upper;
    }
  }
  return r;
}

}  // namespace qdisc
