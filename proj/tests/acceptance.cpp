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


// End-to-end acceptance run: prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qdisc/bounds.hpp"
#include "qdisc/channel_io.hpp"
#include "qdisc/cli.hpp"
#include "qdisc/fidelity.hpp"
#include "qdisc/protocol.hpp"
#include "qdisc/simulator.hpp"
#include "testing.hpp"

namespace {

using namespace qdisc;
using qdisc::testing::kPi;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string fmt(const char* spec, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::vector<testing::TestChannel> qubit_families() {
  auto out = testing::qubit_rotations();
  for (auto& c : testing::qubit_replace()) out.push_back(std::move(c));
  return out;
}

// Plans synthesized for criteria 2 and 6, reused by criterion 3.
std::vector<ProtocolPlan> g_plans;

Outcome oracle_agreement() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& t : qubit_families()) {
    const double opt = f1_identity(t.channel).value;
    const double oracle = testing::bloch_oracle_f1(t.channel);
    worst = std::max(worst, std::abs(opt - oracle));
    if (std::abs(opt - oracle) > 1e-4) {
      o.fail(t.channel.name() + ": optimizer " + fmt("%.8f", opt) + " oracle " +
             fmt("%.8f", oracle));
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 60.0) o.fail("runtime " + fmt("%.1f", secs) + " s");
  if (o.pass) o.detail = "10 channels, max deviation " + fmt("%.2e", worst) + ", " + fmt("%.1f", secs) + " s";
  return o;
}

Outcome exact_2d() {
  Outcome o;
  const std::vector<int> expected = {3, 2, 2, 4, 2};
  const auto& angles = testing::family_angles();
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const int n = nmin_exact_2d(std::cos(angles[i]));
    if (n != expected[i]) o.fail("nmin_exact_2d(cos " + fmt("%.4f", angles[i]) + ") = " + std::to_string(n));
  }
  double worst_leak = 0.0;
  for (const auto& t : qubit_families()) {
    const FidelityResult f1 = f1_identity(t.channel);
    const ProtocolPlan plan = plan_2d(t.channel, f1);
    const int want = nmin_exact_2d(std::cos(*t.theta));
    if (static_cast<int>(plan.rounds.size()) != want) {
      o.fail(t.channel.name() + ": " + std::to_string(plan.rounds.size()) + " rounds, want " +
             std::to_string(want));
    }
    const double leak = terminal_leak(plan);
    worst_leak = std::max(worst_leak, leak);
    if (leak > 1e-9) o.fail(t.channel.name() + ": leak " + fmt("%.2e", leak));
    g_plans.push_back(plan);
  }
  if (o.pass) o.detail = "counts {3,2,2,4,2}, 10 plans, max leak " + fmt("%.1e", worst_leak);
  return o;
}

Outcome perfect_discrimination() {
  Outcome o;
  double slowest = 0.0;
  for (std::size_t i = 0; i < g_plans.size(); ++i) {
    const auto t0 = Clock::now();
    const SimulationReport r = monte_carlo(g_plans[i], 10000, 1000 + i);
    const double secs = seconds_since(t0);
    slowest = std::max(slowest, secs);
    if (r.empirical_error != 0.0) {
      o.fail(g_plans[i].channel.name() + " (" + g_plans[i].scheme + "): " +
             std::to_string(r.wrong_guesses) + " wrong guesses");
    }
    if (secs >= 30.0) o.fail(g_plans[i].channel.name() + ": " + fmt("%.1f", secs) + " s");
  }
  if (o.pass) {
    o.detail = std::to_string(g_plans.size()) + " plans x 10^4 shots, 0 errors, slowest " +
               fmt("%.2f", slowest) + " s";
  }
  return o;
}

Outcome alpha0_identity() {
  Outcome o;
  int checked = 0;
  double worst = 0.0;
  for (const auto& t : testing::all_test_channels()) {
    const FidelityResult f1 = f1_identity(t.channel);
    if (f1.value >= 1.0 - kDistinguishableMargin) continue;
    const double want = std::sqrt(1.0 - f1.value * f1.value);
    const double got = alpha0(t.channel, f1).cos_alpha0;
    worst = std::max(worst, std::abs(got - want));
    if (std::abs(got - want) > 1e-6) {
      o.fail(t.channel.name() + ": cos_alpha0 " + fmt("%.8f", got) + " want " + fmt("%.8f", want));
    }
    ++checked;
  }
  if (o.pass) o.detail = std::to_string(checked) + " channels, max deviation " + fmt("%.1e", worst);
  return o;
}

Outcome lemma2() {
  Outcome o;
  int checked = 0;
  int single_query = 0;
  double worst = 1.0;
  for (const auto& t : testing::all_test_channels()) {
    const FidelityResult f1 = f1_identity(t.channel);
    if (f1.value >= 1.0 - kDistinguishableMargin) continue;
    // At theta = pi/2 the witness b is already orthogonal to E(b); there is
    // no alpha0 > 0 and the bound is vacuous.
    if (f1.value <= kSingleQueryFidelity) {
      ++single_query;
      continue;
    }
    const Alpha0Result a0 = alpha0(t.channel, f1);
    for (const auto& row : verify_lemma2(t.channel, f1, a0, alpha_grid(20))) {
      worst = std::min(worst, row.margin);
      if (!row.passed) {
        o.fail(t.channel.name() + ": alpha " + fmt("%.4f", row.alpha) + " margin " +
               fmt("%.2e", row.margin));
      }
    }
    ++checked;
  }
  if (o.pass) {
    o.detail = std::to_string(checked) + " channels x 20 alphas, min margin " +
               fmt("%.1e", worst) + " (" + std::to_string(single_query) +
               " single-query channel without alpha0 skipped)";
  }
  return o;
}

Outcome sandwich() {
  Outcome o;
  int checked = 0;
  for (const auto& t : testing::all_test_channels()) {
    const FidelityResult f1 = f1_identity(t.channel);
    if (f1.value >= 1.0 - kDistinguishableMargin) continue;
    const Alpha0Result a0 = alpha0(t.channel, f1);
    const ProtocolPlan plan = plan_general(t.channel, f1, a0);
    const int n = static_cast<int>(plan.rounds.size());
    const int lo = nmin_lower(f1.theta);
    const int hi = f1.value <= kSingleQueryFidelity ? 1 : nmin_upper(f1.theta, a0.cos_alpha0);
    if (n < lo || n > hi) {
      o.fail(t.channel.name() + ": " + std::to_string(n) + " rounds outside [" +
             std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    g_plans.push_back(plan);
    ++checked;
  }
  for (const auto& t : testing::qubit_replace()) {
    if (*t.theta < kPi / 4) continue;
    const FidelityResult f1 = f1_identity(t.channel);
    const Alpha0Result a0 = alpha0(t.channel, f1);
    const int lo = nmin_lower(f1.theta);
    const int hi = nmin_upper(f1.theta, a0.cos_alpha0);
    if (lo != hi) {
      o.fail(t.channel.name() + ": bounds " + std::to_string(lo) + " and " + std::to_string(hi) +
             " differ");
    }
    if (std::abs(*t.theta - kPi / 4) < 1e-12 && (lo != 2 || hi != 2)) {
      o.fail("replace pi/4: bounds are not both 2");
    }
  }
  if (o.pass) o.detail = std::to_string(checked) + " general-scheme plans inside [lower, upper]; replace theta >= pi/4 bounds coincide";
  return o;
}

Outcome thm4() {
  Outcome o;
  const auto t0 = Clock::now();
  std::vector<testing::TestChannel> set = qubit_families();
  set.push_back({KrausChannel::identity(2), 0.0});
  std::vector<double> q_grid;
  for (int k = 0; k <= 10; ++k) q_grid.push_back(k / 10.0);
  std::vector<PureState> witnesses;
  for (const auto& t : set) witnesses.push_back(f1_identity(t.channel).witness_input);
  int pairs = 0;
  int violations = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = 0; j < set.size(); ++j) {
      Thm4Options opts;
      opts.anchors = {witnesses[i], witnesses[j]};
      const auto rows = verify_thm4(set[i].channel, set[j].channel, *set[i].theta, *set[j].theta,
                                    q_grid, 500, 7000 + pairs, opts);
      for (const auto& r : rows) {
        if (r.violated) {
          ++violations;
          o.fail(set[i].channel.name() + " vs " + set[j].channel.name() + " at q " +
                 fmt("%.1f", r.q) + ": sampled " + fmt("%.8f", r.min_sampled) + " < bound " +
                 fmt("%.8f", r.bound));
        }
      }
      ++pairs;
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 300.0) o.fail("runtime " + fmt("%.1f", secs) + " s");
  if (o.pass) {
    o.detail = std::to_string(pairs) + " ordered pairs x 11 q x 500 samples, 0 violations, " +
               fmt("%.1f", secs) + " s";
  } else if (violations > 0) {
    o.detail += " (" + std::to_string(violations) + " violations)";
  }
  return o;
}

Outcome transformer() {
  Outcome o;
  std::mt19937_64 rng(20260418);
  int feasible_ok = 0;
  for (int i = 0; i < 200; ++i) {
    const int d = 2 + i % 2;
    const auto p = testing::random_pair_instance(d, true, rng);
    try {
      const auto t = pair_transform(DensityOperator(p.source_a, 1e-9), PureState(p.source_b),
                                    PureState(p.target_a), PureState(p.target_b));
      const TransformCheck c = check_transform(t);
      if (c.ok) {
        ++feasible_ok;
      } else {
        o.fail("feasible instance " + std::to_string(i) + " failed checks (residual " +
               fmt("%.1e", c.completeness_residual) + ", choi " + fmt("%.1e", c.choi_min_eigenvalue) +
               ", actions " + fmt("%.1e", c.action_error_a) + "/" + fmt("%.1e", c.action_error_b) + ")");
      }
    } catch (const std::exception& e) {
      o.fail("feasible instance " + std::to_string(i) + ": " + e.what());
    }
  }
  int rejected = 0;
  for (int i = 0; i < 50; ++i) {
    const int d = 2 + i % 2;
    const auto p = testing::random_pair_instance(d, false, rng);
    try {
      pair_transform(DensityOperator(p.source_a, 1e-9), PureState(p.source_b),
                     PureState(p.target_a), PureState(p.target_b));
      o.fail("infeasible instance " + std::to_string(i) + " was accepted");
    } catch (const InfeasibleTransformError&) {
      ++rejected;
    }
  }
  if (o.pass) {
    o.detail = std::to_string(feasible_ok) + "/200 feasible pass, " + std::to_string(rejected) +
               "/50 infeasible rejected";
  }
  return o;
}

Outcome entanglement_assisted() {
  Outcome o;
  const KrausChannel z = make_unitary_channel(pauli_z(), "Z");
  const double ea_z = f1_ea(z).value;
  if (std::abs(ea_z) > 1e-6) o.fail("f1_ea(Z) = " + fmt("%.3e", ea_z));
  const auto report = build_report(z, OptimizerConfig{}, true);
  if (report.ea_nmin_lower != 1) o.fail("ea lower bound for Z is not 1");
  int checked = 0;
  for (const auto& t : testing::all_test_channels()) {
    const double ea = f1_ea(t.channel).value;
    const double plain = f1_identity(t.channel).value;
    if (ea > plain + 1e-6) {
      o.fail(t.channel.name() + ": ea " + fmt("%.8f", ea) + " > " + fmt("%.8f", plain));
    }
    ++checked;
  }
  if (o.pass) {
    o.detail = "f1_ea(Z) = " + fmt("%.1e", ea_z) + ", ea <= f1 on " + std::to_string(checked) +
               " channels, Z lower bound 1";
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  auto file = [](const KrausChannel& ch) {
    return testing::write_temp("channel.json", channel_to_string(ch));
  };
  const std::string r4 = file(make_replace_channel(kPi / 4));
  const std::string q3 = file(testing::qutrit_replace(kPi / 3));
  const std::string rot = file(make_rotation_channel(kPi / 12));
  const std::string plan = testing::write_temp("plan.json", "");
  const std::vector<std::vector<std::string>> commands = {
      {"validate", r4},
      {"validate", q3, "--json"},
      {"report", r4, "--ea", "--seed", "11"},
      {"report", q3, "--json", "--seed", "11"},
      {"protocol", r4, "--seed", "2"},
      {"protocol", q3, "--json", "--out", plan},
      {"simulate", plan, "--shots", "2000", "--seed", "5"},
      {"simulate", r4, "--shots", "2000", "--seed", "5", "--json"},
      {"verify", r4, "--seed", "4"},
      {"verify", rot, rot, "--mode", "thm4", "--samples", "200", "--seed", "4"},
  };
  std::string plan_first;
  for (const auto& cmd : commands) {
    std::string outputs[2];
    int codes[2];
    for (int rep = 0; rep < 2; ++rep) {
      std::ostringstream out;
      std::ostringstream err;
      codes[rep] = run_cli(cmd, out, err);
      outputs[rep] = out.str() + "\x1f" + err.str();
      if (cmd[0] == "protocol" && cmd.size() > 4) {
        const std::string written = read_text_file(plan);
        if (rep == 0) plan_first = written;
        else if (written != plan_first) o.fail("plan file differs between runs");
      }
    }
    if (codes[0] != codes[1] || outputs[0] != outputs[1]) o.fail(cmd[0] + " output differs");
    if (codes[0] != exit_code::kOk) o.fail(cmd[0] + " exited " + std::to_string(codes[0]));
  }
  if (o.pass) o.detail = std::to_string(commands.size()) + " commands byte-identical across runs";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, oracle_agreement}, {2, exact_2d},   {4, alpha0_identity},
      {5, lemma2},           {6, sandwich},   {3, perfect_discrimination},
      {7, thm4},             {8, transformer}, {9, entanglement_assisted},
      {10, determinism},
  };
  std::vector<std::pair<int, Outcome>> results;
  for (const auto& [id, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    results.emplace_back(id, o);
  }
  std::sort(results.begin(), results.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  int failures = 0;
  for (const auto& [id, o] : results) {
    std::printf("criterion %d: %s %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    failures += o.pass ? 0 : 1;
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
