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

#include "qdisc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "qdisc/bounds.hpp"
#include "qdisc/search.hpp"

namespace qdisc {
namespace {

constexpr std::uint64_t kTagShot = 0x73686f74;
constexpr std::uint64_t kTagThm4 = 0x74340000;
constexpr std::uint64_t kTagAnchor = 0x616e0000;
constexpr double kThm4Tolerance = 1e-6;
constexpr double kLemma2Tolerance = 1e-9;

Matrix evolve(const std::vector<Matrix>& kraus, const Matrix& rho) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus) out += k * rho * k.adjoint();
  return 0.5 * (out + out.adjoint());
}

double expectation(const Matrix& rho, const Vector& v) {
  return std::clamp(v.dot(rho * v).real(), 0.0, 1.0);
}

// Samples branch k with probability |K_k psi|^2 and returns the normalized
// post-branch state.
Vector sample_branch(const std::vector<Matrix>& kraus, const Vector& psi,
                     std::mt19937_64& rng) {
  std::vector<Vector> images;
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& k : kraus) {
    images.push_back(k * psi);
    total += images.back().squaredNorm();
    cumulative.push_back(total);
  }
  const double r = std::uniform_real_distribution<double>(0.0, total)(rng);
  std::size_t pick = images.size() - 1;
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    if (cumulative[i] > r) {
      pick = i;
      break;
    }
  }
  return images[pick] / images[pick].norm();
}

struct Shot {
  bool wrong = false;
  double leak = 0.0;
};

Vector orthogonal_partner(const Vector& psi0, double q, std::mt19937_64& rng) {
  if (q >= 1.0) return psi0;
  const int d = static_cast<int>(psi0.size());
  Vector chi;
  double n = 0.0;
  while (n < 1e-6) {
    chi = search::to_complex(search::random_sphere_point(d, rng));
    chi -= psi0 * psi0.dot(chi);
    chi -= psi0 * psi0.dot(chi);
    n = chi.norm();
  }
  chi /= n;
  return q * psi0 + std::sqrt(std::max(0.0, 1.0 - q * q)) * chi;
}

std::string g10(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

const char* hypothesis_name(Hypothesis h) {
  return h == Hypothesis::Identity ? "identity" : "channel";
}

TraceRecord run_once(const ProtocolPlan& plan, Hypothesis hypothesis) {
  TraceRecord t;
  t.hypothesis = hypothesis;
  Matrix rho_e = plan.rounds.front().input_if_E.projector();
  Matrix rho_i = plan.rounds.front().input_if_I.projector();
  for (const auto& r : plan.rounds) {
    if (r.pre_transform) {
      rho_e = evolve(r.pre_transform->kraus, rho_e);
      rho_i = evolve(r.pre_transform->kraus, rho_i);
    }
    rho_e = evolve(plan.channel.kraus(), rho_e);
    t.round_overlaps.push_back(max_fidelity(support_projector(rho_e), support_projector(rho_i)));
  }
  const Vector& v = plan.final_measurement_vector.amplitudes();
  t.terminal_error_probability = hypothesis == Hypothesis::Channel
                                     ? expectation(rho_e, v)
                                     : std::clamp(1.0 - expectation(rho_i, v), 0.0, 1.0);
  return t;
}

SimulationReport monte_carlo(const ProtocolPlan& plan, int shots, std::uint64_t seed,
                             int threads) {
  if (shots < 1) throw DomainError("monte_carlo: shots must be >= 1");
  std::vector<Shot> results(shots);
  const Vector& v = plan.final_measurement_vector.amplitudes();
  search::parallel_for(shots, threads, [&](int i) {
    auto rng = search::make_stream(seed, kTagShot, static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Hypothesis h = unit(rng) < 0.5 ? Hypothesis::Identity : Hypothesis::Channel;
    Vector psi = plan.rounds.front().input_if_E.amplitudes();
    for (const auto& r : plan.rounds) {
      if (r.pre_transform) psi = sample_branch(r.pre_transform->kraus, psi, rng);
      if (h == Hypothesis::Channel) psi = sample_branch(plan.channel.kraus(), psi, rng);
    }
    const double p_identity = std::clamp(std::norm(v.dot(psi)), 0.0, 1.0);
    const Hypothesis guess = unit(rng) < p_identity ? Hypothesis::Identity : Hypothesis::Channel;
    results[i].wrong = guess != h;
    results[i].leak = h == Hypothesis::Channel ? p_identity : 1.0 - p_identity;
  });
  SimulationReport rep;
  rep.shots = shots;
  rep.seed = seed;
  for (const auto& s : results) {
    rep.wrong_guesses += s.wrong ? 1 : 0;
    rep.max_terminal_leak = std::max(rep.max_terminal_leak, s.leak);
  }
  rep.empirical_error = static_cast<double>(rep.wrong_guesses) / shots;
  return rep;
}

std::vector<Thm4Row> verify_thm4(const KrausChannel& ch0, const KrausChannel& ch1, double theta0,
                                 double theta1, const std::vector<double>& q_grid,
                                 int samples_per_q, std::uint64_t seed,
                                 const Thm4Options& options) {
  if (ch0.dim() != ch1.dim()) throw ShapeError("verify_thm4: channel dimensions differ");
  if (samples_per_q < 1) throw DomainError("verify_thm4: samples_per_q must be >= 1");
  ch0.require_valid();
  ch1.require_valid();
  const int d = ch0.dim();
  for (const auto& a : options.anchors) {
    if (a.dim() != d) throw ShapeError("verify_thm4: anchor dimension mismatch");
  }
  std::vector<Thm4Row> rows;
  for (std::size_t qi = 0; qi < q_grid.size(); ++qi) {
    const double q = q_grid[qi];
    Thm4Row row;
    row.q = q;
    row.bound = thm4_lower(q, theta0, theta1);
    const int anchors = static_cast<int>(options.anchors.size());
    std::vector<double> values(samples_per_q + anchors);
    search::parallel_for(static_cast<int>(values.size()), options.threads, [&](int s) {
      Vector psi0;
      std::mt19937_64 rng;
      if (s < samples_per_q) {
        rng = search::make_stream(seed, kTagThm4 + qi, static_cast<std::uint64_t>(s));
        psi0 = search::to_complex(search::random_sphere_point(d, rng));
        psi0 /= psi0.norm();
      } else {
        const int a = s - samples_per_q;
        rng = search::make_stream(seed, kTagAnchor + qi, static_cast<std::uint64_t>(a));
        psi0 = options.anchors[a].amplitudes();
      }
      const Vector psi1 = orthogonal_partner(psi0, q, rng);
      values[s] = output_pair_fidelity(ch0, psi0, ch1, psi1);
    });
    for (double v : values) row.min_sampled = std::min(row.min_sampled, v);
    row.violated = row.min_sampled < row.bound - kThm4Tolerance;
    rows.push_back(row);
  }
  return rows;
}

std::vector<Lemma2Row> verify_lemma2(const KrausChannel& channel, const FidelityResult& f1,
                                     const Alpha0Result& a0, const std::vector<double>& alphas) {
  if (!(f1.value < 1.0 - kDistinguishableMargin)) {
    throw NotDistinguishableError("verify_lemma2: channel is not sequentially distinguishable");
  }
  const PureState& b = a0.witness_b;
  const double theta = std::acos(channel_state_fidelity(channel, b.amplitudes()));
  if (!(theta > 0.0 && theta < std::numbers::pi / 2)) {
    throw DomainError("verify_lemma2: needs 0 < theta < pi/2 (theta = " + format_angle(theta) +
                      ")");
  }
  std::vector<Lemma2Row> rows;
  for (double alpha : alphas) {
    const PureState c = lemma2_witness(channel, b, a0.witness_b_prime, alpha);
    Lemma2Row row;
    row.alpha = alpha;
    row.witness_fidelity = channel_output_overlap(channel, b.amplitudes(), c.amplitudes());
    row.bound = lemma2_bound(theta, a0.alpha0, alpha);
    row.margin = row.bound - row.witness_fidelity;
    row.passed = row.margin >= -kLemma2Tolerance;
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> alpha_grid(int n) {
  if (n < 2) throw DomainError("alpha_grid: need at least 2 points");
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(std::numbers::pi / 2 * k / (n - 1));
  return out;
}

std::string thm4_csv(const std::vector<Thm4Row>& rows) {
  std::string out = "q,bound,min_sampled,violated\n";
  for (const auto& r : rows) {
    out += g10(r.q) + "," + g10(r.bound) + "," + g10(r.min_sampled) + "," +
           (r.violated ? "true" : "false") + "\n";
  }
  return out;
}

std::string lemma2_csv(const std::vector<Lemma2Row>& rows) {
  std::string out = "alpha,bound,witness_fidelity,margin,passed\n";
  for (const auto& r : rows) {
    out += g10(r.alpha) + "," + g10(r.bound) + "," + g10(r.witness_fidelity) + "," +
           g10(r.margin) + "," + (r.passed ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace qdisc
