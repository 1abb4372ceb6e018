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

#include "qdisc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdisc/bounds.hpp"
#include "qdisc/channel_io.hpp"
#include "qdisc/core.hpp"
#include "qdisc/fidelity.hpp"
#include "qdisc/plan_io.hpp"
#include "qdisc/protocol.hpp"
#include "qdisc/simulator.hpp"

namespace qdisc {
namespace {

using nlohmann::json;

// Bad flag values that CLI11 cannot check on its own.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct CliConfig {
  std::string command;
  std::vector<std::string> channel_paths;
  std::string q_grid = "0:1:0.1";
  int shots = 10000;
  std::uint64_t seed = 0;
  int starts = 64;
  int threads = 0;
  int samples = 500;
  int alpha_points = 20;
  bool ea = false;
  bool json_output = false;
  std::string trace_path;
  std::string scheme = "auto";
  std::string mode = "lemma2";
  std::optional<double> theta0;
  std::optional<double> theta1;
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string g10(double v) { return fmt("%.10g", v); }
std::string sci(double v) { return fmt("%.3e", v); }

OptimizerConfig optimizer_config(const CliConfig& c) {
  OptimizerConfig o;
  o.starts = c.starts;
  o.seed = c.seed;
  o.threads = c.threads;
  return o;
}

KrausChannel read_channel(const std::string& path, std::optional<double> max_residual) {
  try {
    return load_channel(path, max_residual);
  } catch (const ShapeError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

template <typename T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

std::vector<double> parse_q_grid(const std::string& spec) {
  std::vector<double> out;
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw UsageError("");
      return v;
    } catch (const std::exception&) {
      throw UsageError("--q: cannot read number '" + s + "'");
    }
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw UsageError("--q: expected start:stop:step");
    const double lo = number(parts[0]);
    const double hi = number(parts[1]);
    const double step = number(parts[2]);
    if (!(step > 0.0) || hi < lo) throw UsageError("--q: need step > 0 and stop >= start");
    const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
    for (int k = 0; k <= n; ++k) out.push_back(std::min(hi, lo + k * step));
  } else {
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(number(part));
  }
  if (out.empty()) throw UsageError("--q: empty grid");
  for (double q : out) {
    if (!(q >= 0.0 && q <= 1.0)) throw UsageError("--q: values must lie in [0, 1]");
  }
  return out;
}

ProtocolPlan synthesize_plan(const KrausChannel& channel, const std::string& scheme,
                             const OptimizerConfig& config) {
  const FidelityResult f1 = f1_identity(channel, config);
  if (!(f1.value < 1.0 - kDistinguishableMargin)) {
    throw NotDistinguishableError("channel '" + channel.name() +
                                  "' is not sequentially distinguishable from the identity (f1 = " +
                                  g10(f1.value) + ")");
  }
  const bool two_d = scheme == "2d" || (scheme == "auto" && channel.dim() == 2);
  if (two_d) return plan_2d(channel, f1, config);
  return plan_general(channel, f1, alpha0(channel, f1, config), config);
}

int cmd_validate(const CliConfig& c, std::ostream& out) {
  const KrausChannel ch = read_channel(c.channel_paths.at(0), std::nullopt);
  const ChannelValidity& v = ch.validity();
  if (c.json_output) {
    emit_json(out, json{{"name", ch.name()},
                        {"dim", ch.dim()},
                        {"kraus_count", ch.kraus_count()},
                        {"completeness_residual", v.completeness_residual},
                        {"choi_min_eigenvalue", v.choi_min_eigenvalue},
                        {"valid", v.is_valid}});
  } else {
    out << "channel " << (ch.name().empty() ? "(unnamed)" : ch.name()) << "\n"
        << "dim " << ch.dim() << ", kraus operators " << ch.kraus_count() << "\n"
        << "completeness residual " << sci(v.completeness_residual) << "\n"
        << "choi min eigenvalue " << sci(v.choi_min_eigenvalue) << "\n"
        << (v.is_valid ? "valid" : "invalid") << "\n";
  }
  return v.is_valid ? exit_code::kOk : exit_code::kDomain;
}

json report_to_json(const DistinguishabilityReport& r) {
  return json{
      {"channel_name", r.channel_name},
      {"dim", r.dim},
      {"f1", r.f1},
      {"theta", r.theta},
      {"cos_alpha0", opt_json(r.cos_alpha0)},
      {"distinguishable", r.distinguishable},
      {"nmin_exact_2d", opt_json(r.nmin_exact_2d)},
      {"nmin_lower", opt_json(r.nmin_lower)},
      {"nmin_upper", opt_json(r.nmin_upper)},
      {"ea_f1", opt_json(r.ea_f1)},
      {"ea_nmin_lower", opt_json(r.ea_nmin_lower)},
      {"ea_nmin_upper", opt_json(r.ea_nmin_upper)},
  };
}

int cmd_report(const CliConfig& c, std::ostream& out) {
  const KrausChannel ch = read_channel(c.channel_paths.at(0), 1e-6);
  const OptimizerConfig config = optimizer_config(c);
  const DistinguishabilityReport r = build_report(ch, config, c.ea);
  if (c.json_output) {
    emit_json(out, report_to_json(r));
    return exit_code::kOk;
  }
  out << "channel = " << (r.channel_name.empty() ? "(unnamed)" : r.channel_name) << "\n"
      << "dim = " << r.dim << "\n"
      << "f1 = " << g10(r.f1) << "\n"
      << "theta = " << g10(r.theta) << "\n";
  if (r.cos_alpha0) out << "cos_alpha0 = " << g10(*r.cos_alpha0) << "\n";
  if (!r.distinguishable) {
    out << "not sequentially distinguishable\n";
  } else {
    out << "sequentially distinguishable\n";
    if (r.nmin_exact_2d) out << "N_exact_2d = " << *r.nmin_exact_2d << "\n";
    if (r.nmin_lower) out << "N_lower = " << *r.nmin_lower << "\n";
    if (r.nmin_upper) out << "N_upper = " << *r.nmin_upper << "\n";
    if (r.dim > 2) {
      const auto col = collinear_input_search(ch, config);
      out << "collinear_input = "
          << (col ? "yes (overlap " + g10(col->overlap) + ")" : std::string("no")) << "\n";
    }
  }
  if (r.ea_f1) {
    out << "ea_f1 = " << g10(*r.ea_f1) << "\n";
    if (r.ea_nmin_lower) out << "ea_N_lower = " << *r.ea_nmin_lower << "\n";
    if (r.ea_nmin_upper) out << "ea_N_upper = " << *r.ea_nmin_upper << "\n";
    if (!r.ea_nmin_lower) out << "not distinguishable with entanglement assistance\n";
  }
  return exit_code::kOk;
}

std::string schedule_text(const ProtocolPlan& plan) {
  std::string s;
  for (const auto& r : plan.rounds) {
    if (!s.empty()) s += ", ";
    s += fmt("%.4f", r.predicted_overlap_after);
  }
  return s;
}

int cmd_protocol(const CliConfig& c, std::ostream& out) {
  const KrausChannel ch = read_channel(c.channel_paths.at(0), 1e-6);
  const ProtocolPlan plan = synthesize_plan(ch, c.scheme, optimizer_config(c));
  if (!c.trace_path.empty()) save_plan(plan, c.trace_path);
  const double leak = terminal_leak(plan);
  if (c.json_output) {
    json schedule = json::array();
    for (const auto& r : plan.rounds) schedule.push_back(r.predicted_overlap_after);
    emit_json(out, json{{"scheme", plan.scheme},
                        {"rounds", plan.claimed_queries},
                        {"overlap_schedule", std::move(schedule)},
                        {"terminal_leak", leak},
                        {"plan_path", c.trace_path.empty() ? json(nullptr) : json(c.trace_path)}});
    return exit_code::kOk;
  }
  out << "scheme " << plan.scheme << "\n"
      << "rounds " << plan.claimed_queries << "\n"
      << "overlap schedule " << schedule_text(plan) << "\n"
      << "terminal leak " << sci(leak) << "\n";
  if (!c.trace_path.empty()) out << "plan written to " << c.trace_path << "\n";
  return exit_code::kOk;
}

int cmd_simulate(const CliConfig& c, std::ostream& out) {
  const std::string& path = c.channel_paths.at(0);
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": syntax error at byte " + std::to_string(e.byte));
  }
  std::optional<ProtocolPlan> plan;
  if (is_plan_document(doc)) {
    try {
      plan = plan_from_json(doc);
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what());
    }
  } else {
    plan = synthesize_plan(read_channel(path, 1e-6), c.scheme, optimizer_config(c));
  }
  const SimulationReport rep = monte_carlo(*plan, c.shots, c.seed, c.threads);
  if (c.json_output) {
    emit_json(out, json{{"shots", rep.shots},
                        {"wrong_guesses", rep.wrong_guesses},
                        {"empirical_error", rep.empirical_error},
                        {"max_terminal_leak", rep.max_terminal_leak},
                        {"seed", rep.seed}});
  } else {
    out << "shots " << rep.shots << "\n"
        << "wrong_guesses " << rep.wrong_guesses << "\n"
        << "empirical_error " << g10(rep.empirical_error) << "\n"
        << "max_terminal_leak " << sci(rep.max_terminal_leak) << "\n"
        << "seed " << rep.seed << "\n";
  }
  return rep.wrong_guesses == 0 ? exit_code::kOk : exit_code::kDomain;
}

double resolve_theta(const std::optional<double>& flag, const KrausChannel& ch,
                     const char* flag_name) {
  if (flag) {
    if (!(*flag >= 0.0 && *flag <= std::numbers::pi / 2)) {
      throw UsageError(std::string(flag_name) + ": angle must lie in [0, pi/2]");
    }
    return *flag;
  }
  if (auto t = analytic_theta(ch.name())) return *t;
  throw DomainError("no analytic angle for channel '" + ch.name() + "'; pass " + flag_name +
                    ". Optimized angles underestimate theta and would make the check unsound");
}

int cmd_verify(const CliConfig& c, std::ostream& out) {
  const KrausChannel ch0 = read_channel(c.channel_paths.at(0), 1e-6);
  const OptimizerConfig config = optimizer_config(c);
  if (c.mode == "lemma2") {
    if (c.channel_paths.size() > 1) throw UsageError("lemma2 mode takes a single channel");
    const FidelityResult f1 = f1_identity(ch0, config);
    if (!(f1.value < 1.0 - kDistinguishableMargin)) {
      throw NotDistinguishableError("lemma2: channel is not sequentially distinguishable");
    }
    const Alpha0Result a0 = alpha0(ch0, f1, config);
    const auto rows = verify_lemma2(ch0, f1, a0, alpha_grid(c.alpha_points));
    const auto failed = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.passed; });
    if (c.json_output) {
      json arr = json::array();
      for (const auto& r : rows) {
        arr.push_back(json{{"alpha", r.alpha},
                           {"bound", r.bound},
                           {"witness_fidelity", r.witness_fidelity},
                           {"margin", r.margin},
                           {"passed", r.passed}});
      }
      emit_json(out, json{{"mode", "lemma2"}, {"rows", std::move(arr)}, {"failures", failed}});
    } else {
      out << lemma2_csv(rows);
    }
    return failed == 0 ? exit_code::kOk : exit_code::kDomain;
  }

  const std::vector<double> grid = parse_q_grid(c.q_grid);
  const KrausChannel ch1 = c.channel_paths.size() > 1 ? read_channel(c.channel_paths[1], 1e-6)
                                                      : KrausChannel::identity(ch0.dim());
  const double t0 = resolve_theta(c.theta0, ch0, "--theta0");
  const double t1 = resolve_theta(c.theta1, ch1, "--theta1");
  Thm4Options options;
  options.threads = c.threads;
  // Minimizers of F(E(psi), psi) are where the bound is tight at q = 1.
  for (const KrausChannel* ch : {&ch0, &ch1}) {
    options.anchors.push_back(f1_identity(*ch, config).witness_input);
  }
  const auto rows = verify_thm4(ch0, ch1, t0, t1, grid, c.samples, c.seed, options);
  const auto violations =
      std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.violated; });
  if (c.json_output) {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back(json{{"q", r.q},
                         {"bound", r.bound},
                         {"min_sampled", r.min_sampled},
                         {"violated", r.violated}});
    }
    emit_json(out, json{{"mode", "thm4"},
                        {"theta0", t0},
                        {"theta1", t1},
                        {"rows", std::move(arr)},
                        {"violations", violations}});
  } else {
    out << "# theta0 " << g10(t0) << ", theta1 " << g10(t1) << ", " << c.samples
        << " samples per q; sampling can refute the bound, not prove it\n"
        << thm4_csv(rows);
  }
  return violations == 0 ? exit_code::kOk : exit_code::kDomain;
}

int dispatch(const CliConfig& c, std::ostream& out) {
  if (c.command == "validate") return cmd_validate(c, out);
  if (c.command == "report") return cmd_report(c, out);
  if (c.command == "protocol") return cmd_protocol(c, out);
  if (c.command == "simulate") return cmd_simulate(c, out);
  return cmd_verify(c, out);
}

void add_common(CLI::App* sub, CliConfig& c) {
  sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  sub->add_option("--starts", c.starts, "Optimizer starts per rank stratum")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads (0: available parallelism)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_flag("--json", c.json_output, "Machine-readable output");
}

}  // namespace

std::optional<double> analytic_theta(const std::string& name) {
  constexpr double kPi = std::numbers::pi;
  if (name == "identity") return 0.0;
  const auto colon = name.find(':');
  if (colon == std::string::npos) return std::nullopt;
  const std::string family = name.substr(0, colon);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(name.substr(colon + 1), &used);
    if (used != name.size() - colon - 1) return std::nullopt;
  } catch (const std::exception&) {
    return std::nullopt;
  }
  // Half the eigenphase arc of a unitary with eigenphases separated by `spread`.
  auto half_arc = [&](double spread) {
    double s = std::fmod(std::abs(spread), 2 * kPi);
    return std::min(s, 2 * kPi - s) / 2;
  };
  if (family == "rotation") return half_arc(2 * value);
  if (family == "phase") return half_arc(value);
  if (family == "replace" && value > 0.0 && value < kPi / 2) return value;
  return std::nullopt;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliConfig c;
  CLI::App app{"Perfect discrimination of quantum operations from the identity", "qdisc"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Check a channel file for CPTP validity");
  validate->add_option("channel", c.channel_paths, "Channel file")->required()->expected(1);
  validate->add_flag("--json", c.json_output, "Machine-readable output");

  auto* report = app.add_subcommand("report", "Fidelities and query-count bounds");
  report->add_option("channel", c.channel_paths, "Channel file")->required()->expected(1);
  report->add_flag("--ea", c.ea, "Also compute entanglement-assisted quantities");
  add_common(report, c);

  auto* protocol = app.add_subcommand("protocol", "Synthesize a discrimination protocol");
  protocol->add_option("channel", c.channel_paths, "Channel file")->required()->expected(1);
  protocol->add_option("--trace,--out", c.trace_path, "Write the plan to this file");
  protocol->add_option("--scheme", c.scheme, "Protocol scheme")
      ->check(CLI::IsMember({"auto", "2d", "general"}))
      ->capture_default_str();
  add_common(protocol, c);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo run of a plan or channel");
  simulate->add_option("input", c.channel_paths, "Plan file or channel file")
      ->required()
      ->expected(1);
  simulate->add_option("--shots", c.shots, "Number of shots")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--scheme", c.scheme, "Scheme when synthesizing from a channel")
      ->check(CLI::IsMember({"auto", "2d", "general"}))
      ->capture_default_str();
  add_common(simulate, c);

  auto* verify = app.add_subcommand("verify", "Check the fidelity bounds on a channel");
  verify->add_option("channels", c.channel_paths, "One or two channel files")
      ->required()
      ->expected(1, 2);
  verify->add_option("--mode", c.mode, "lemma2: witness bound; thm4: q-fidelity lower bound")
      ->check(CLI::IsMember({"lemma2", "thm4"}))
      ->capture_default_str();
  verify->add_option("--q", c.q_grid, "q grid, start:stop:step or comma list")
      ->capture_default_str();
  verify->add_option("--samples", c.samples, "Sampled pairs per q")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify->add_option("--alphas", c.alpha_points, "Points on the alpha grid")
      ->check(CLI::Range(2, 100000))
      ->capture_default_str();
  verify->add_option("--theta0", c.theta0, "Exact angle of the first channel");
  verify->add_option("--theta1", c.theta1, "Exact angle of the second channel");
  add_common(verify, c);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::kOk : exit_code::kUsage;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    return dispatch(c, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_code::kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_code::kParse;
  } catch (const OptimizerError& e) {
    err << "optimizer failure: " << e.what() << " (best value " << g10(e.best_value())
        << "); try more --starts or another --seed\n";
    return exit_code::kNumeric;
  } catch (const SynthesisError& e) {
    err << "synthesis failure: " << e.what() << "\n";
    return exit_code::kNumeric;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kDomain;
  } catch (const ValidityError& e) {
    err << "invalid channel: " << e.what() << "\n";
    return exit_code::kDomain;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kDomain;
  } catch (const Error& e) {
    err << "numeric failure: " << e.what() << "\n";
    return exit_code::kNumeric;
  }
}

}  // namespace qdisc
