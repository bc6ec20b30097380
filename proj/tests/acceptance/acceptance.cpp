// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "coexist/cli.hpp"
#include "coexist/config.hpp"
#include "coexist/experiments.hpp"
#include "coexist/scenario.hpp"
#include "coexist/verify.hpp"
#include "tmpdir.hpp"

using namespace coexist;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_seconds;  // 0 = no runtime bound
  std::function<Outcome()> run;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Outcome from_check(const CheckResult& c) {
  return {c.pass, std::to_string(c.passed_trials) + "/" + std::to_string(c.trials) + " trials, worst " +
                      fmt(c.worst, 3) + " vs tolerance " + fmt(c.tolerance, 3)};
}

RunConfig defaults() {
  RunConfig cfg;
  resolve(cfg);
  return cfg;
}

Outcome scenario_ordering() {
  std::map<std::string, MetricsRecord> m;
  for (const std::string& name : preset_names()) m[name] = run_scenario(preset(name)).metrics;
  const MetricsRecord& b = m.at("baseline");
  const MetricsRecord& n = m.at("no_governance");
  const MetricsRecord& o = m.at("over_governance");
  const bool pass = b.coexistence_index >= 0.9 && b.domination_index <= 0.05 && n.domination_index >= 0.3 &&
                    n.conflict_burden >= 3.0 * b.conflict_burden && o.domination_index <= 0.05 &&
                    o.coexistence_index <= 0.6 && b.coexistence_index > n.coexistence_index &&
                    b.coexistence_index > o.coexistence_index && n.conflict_burden > b.conflict_burden &&
                    n.conflict_burden > o.conflict_burden;
  std::string detail;
  for (const auto& [name, r] : m)
    detail += name + " CI=" + fmt(r.coexistence_index) + " DI=" + fmt(r.domination_index) + " CB=" +
              fmt(r.conflict_burden) + "; ";
  return {pass, detail};
}

Outcome basin_structure() {
  const RunConfig cfg = defaults();
  const BasinGrid grid =
      basin_sweep(cfg.scenario.to_preset(), cfg.experiment.basin, cfg.scenario.to_options(), cfg.experiment.thresholds);
  const BasinSummary s = summarize_basins(grid);
  const double co = s.of(RegimeLabel::Coexistence).fraction;
  const bool all_three = s.of(RegimeLabel::Coexistence).count > 0 && s.of(RegimeLabel::AiDomination).count > 0 &&
                         s.of(RegimeLabel::LowBenefitLockin).count > 0;
  const bool upset = domination_is_upset_in_a0(grid);
  const bool pass = grid.cells.size() == 35 * 35 && all_three && co >= 0.30 && co <= 0.70 && upset;
  return {pass, "coexistence " + fmt(co) + ", domination " + fmt(s.of(RegimeLabel::AiDomination).fraction) +
                    ", lock-in " + fmt(s.of(RegimeLabel::LowBenefitLockin).fraction) + ", failed " +
                    std::to_string(s.failed) + ", up-set " + (upset ? "yes" : "no")};
}

Outcome sensitivity_signal() {
  const RunConfig cfg = defaults();
  const SensitivityReport r = global_sensitivity(cfg.scenario.to_preset(), cfg.experiment.sensitivity.ranges, 500,
                                                 cfg.seed, cfg.scenario.to_options());
  const auto conflict = r.ranking("conflict_burden");
  const auto coexist = r.ranking("coexistence_index");
  bool ok = !conflict.empty() && conflict.front() == "c_asym" && coexist.size() >= 3;
  if (ok) {
    const auto top = std::vector<std::string>(coexist.begin(), coexist.begin() + 3);
    ok = std::count(top.begin(), top.end(), "mu_H") == 1 && std::count(top.begin(), top.end(), "mu_A") == 1;
  }

  // Planted signal: the metric is a steep function of the first parameter
  // plus a small contribution of the others.
  const std::vector<ParameterRange> planted{{"signal", 0.0, 1.0}, {"noise_a", 0.0, 1.0}, {"noise_b", 0.0, 1.0}};
  const SensitivityReport p = global_sensitivity(
      [](const std::vector<double>& x) { return std::vector<double>{std::exp(3.0 * x[0]) + 0.05 * x[1] - 0.05 * x[2]}; },
      planted, {"y"}, 500, cfg.seed);
  const double planted_importance = p.importance[0] ? (*p.importance[0])[0] : 0.0;
  ok = ok && planted_importance >= 0.9;

  std::string detail = "conflict_burden top " + (conflict.empty() ? std::string("-") : conflict.front()) +
                       ", coexistence_index top3";
  for (std::size_t i = 0; i < std::min<std::size_t>(3, coexist.size()); ++i) detail += " " + coexist[i];
  detail += ", planted importance " + fmt(planted_importance);
  return {ok, detail};
}

Outcome shock_ordering() {
  const RunConfig cfg = defaults();
  const ShockExperimentConfig& s = cfg.experiment.shock;
  const ScenarioOptions opts = cfg.scenario.to_options();
  auto recovery = [&](const std::string& name, ShockKind kind) {
    return run_scenario(preset(name), {Shock{s.time, kind, s.magnitude}}, opts).metrics.recovery_time;
  };
  const auto over = recovery("over_governance", ShockKind::Governance);
  const auto base = recovery("baseline", ShockKind::Governance);
  bool pass = over && base && *over > *base;
  std::string detail = "governance shock recovery over_governance " + (over ? fmt(*over) : std::string("none")) +
                       " vs baseline " + (base ? fmt(*base) : std::string("none")) + "; baseline";
  for (ShockKind kind : {ShockKind::Trust, ShockKind::Physical, ShockKind::Governance}) {
    const auto r = recovery("baseline", kind);
    pass = pass && r.has_value();
    detail += " " + to_string(kind) + "=" + (r ? fmt(*r) : std::string("none"));
  }
  return {pass, detail};
}

std::map<std::string, std::string> directory_contents(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().filename() == "manifest.json") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[entry.path().filename().string()] = s.str();
  }
  return files;
}

Outcome determinism() {
  fixture::TempDir tmp("acceptance_determinism");
  const unsigned many = std::max(4u, std::thread::hardware_concurrency());
  const std::vector<std::vector<std::string>> commands = {{"verify"}, {"scenarios"}, {"basin"}, {"sensitivity"}};
  bool pass = true;
  std::string detail;
  for (const auto& cmd : commands) {
    std::vector<std::map<std::string, std::string>> outputs;
    int run_index = 0;
    for (const unsigned threads : {1u, 1u, many}) {
      const fs::path dir = tmp / (cmd[0] + "_" + std::to_string(run_index++));
      std::vector<std::string> args{"coexistd", "--seed", "42", "--threads", std::to_string(threads), "--out",
                                    dir.string()};
      args.insert(args.end(), cmd.begin(), cmd.end());
      std::ostringstream out, err;
      const int code = cli_dispatch(args, out, err);
      if (code != kExitOk) {
        pass = false;
        detail += cmd[0] + " exit " + std::to_string(code) + "; ";
        break;
      }
      outputs.push_back(directory_contents(dir));
    }
    if (outputs.size() != 3) continue;
    const bool same = !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
    pass = pass && same;
    detail += cmd[0] + " " + std::to_string(outputs[0].size()) + " files " + (same ? "identical" : "DIFFER") + "; ";
  }
  return {pass, detail};
}

}  // namespace

int main() {
  VerifySettings vs;
  vs.seed = 42;
  const std::vector<Criterion> criteria = {
      {"monotone_ascent", 60.0, [&] { return from_check(check_ascent_property(vs)); }},
      {"unique_global_convergence", 0.0, [&] { return from_check(check_unique_global_convergence(vs)); }},
      {"spectral_condition_soundness", 0.0, [&] { return from_check(check_spectral_soundness(vs)); }},
      {"governance_monotonicity", 0.0, [&] { return from_check(check_governance_monotonicity(vs)); }},
      {"comparative_statics", 0.0, [&] { return from_check(check_comparative_statics(vs)); }},
      {"boundedness", 0.0, [&] { return from_check(check_boundedness(vs)); }},
      {"gradient_hessian", 0.0, [&] { return from_check(check_derivatives(vs)); }},
      {"equilibrium_certificate", 0.0, [] { return from_check(check_equilibrium_certificate()); }},
      {"scenario_ordering", 10.0, scenario_ordering},
      {"basin_structure", 120.0, basin_structure},
      {"sensitivity_signal", 0.0, sensitivity_signal},
      {"shock_ordering", 0.0, shock_ordering},
      {"determinism", 0.0, determinism},
  };

  const auto suite_start = std::chrono::steady_clock::now();
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0.0 && seconds > c.budget_seconds) {
      o.pass = false;
      o.detail += " (over the " + fmt(c.budget_seconds) + " s budget)";
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << " [" << fmt(seconds, 3) << " s] " << o.detail << std::endl;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - suite_start).count();
  std::cout << "total " << fmt(total, 3) << " s, " << failures << " of " << criteria.size() << " criteria failed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
