#include "coexist/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "coexist/config.hpp"
#include "coexist/dynamics.hpp"
#include "coexist/experiments.hpp"
#include "coexist/manifest.hpp"
#include "coexist/table.hpp"
#include "coexist/verify.hpp"

namespace coexist {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  std::optional<unsigned> threads;
};

struct CommandArgs {
  std::optional<std::string> preset;
  std::optional<int> resolution;
  std::optional<std::size_t> samples;
  std::optional<std::string> parameter;
  std::vector<double> values;
};

class Writer {
 public:
  Writer(fs::path dir, OutputFormat format) : dir_(std::move(dir)), format_(format) {}

  void table(const Table& t, const std::string& stem) {
    const std::string name = stem + (format_ == OutputFormat::Json ? ".json" : ".csv");
    if (format_ == OutputFormat::Json) write_json(t, dir_ / name);
    else write_csv(t, dir_ / name);
    names_.push_back(name);
  }

  const fs::path& dir() const { return dir_; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  fs::path dir_;
  OutputFormat format_;
  std::vector<std::string> names_;
};

Table events_table(const Trajectory& traj) {
  Table t{{"time", "label"}, {}};
  for (const auto& e : traj.events) t.add_row({e.time, e.label});
  return t;
}

std::string describe(const MetricsRecord& m) {
  std::string s = "coexistence_index=" + format_number(m.coexistence_index) +
                  " domination_index=" + format_number(m.domination_index) +
                  " conflict_burden=" + format_number(m.conflict_burden) + " recovery_time=";
  s += m.recovery_time ? format_number(*m.recovery_time) : "NA";
  return s + " (" + to_string(m.recovery_kind) + ")";
}

Vec initial_state(const RunConfig& cfg, int dim) {
  if (cfg.model.x0.empty()) return Vec::Zero(dim);
  return Eigen::Map<const Vec>(cfg.model.x0.data(), static_cast<Eigen::Index>(cfg.model.x0.size()));
}

void run_simulate(const RunConfig& cfg, Writer& w, std::ostream& out) {
  const CoexistenceModel model = build_model(cfg);
  FlowControls fc;
  fc.integrator = cfg.model.integrator;
  const Trajectory traj = integrate_flow(model, initial_state(cfg, model.dim()), cfg.model.horizon, fc);
  w.table(full_trajectory_table(traj, model.dim()), "trajectory");
  out << "simulate: " << traj.size() << " states, t_end=" << format_number(traj.times.back())
      << " J=" << format_number(traj.J_values.back())
      << (traj.termination == Termination::Converged ? " (converged)" : " (horizon reached)") << '\n';
}

void run_equilibrium(const RunConfig& cfg, Writer& w, std::ostream& out) {
  const CoexistenceModel model = build_model(cfg);
  const EquilibriumReport eq = solve_equilibrium(model);
  const SpectralReport sp = check_spectral_condition(model);

  FlowControls fc;
  fc.integrator = cfg.model.integrator;
  const Trajectory flow = integrate_flow(model, initial_state(cfg, model.dim()), cfg.model.horizon, fc);
  const double distance = (flow.terminal() - eq.x_star).norm();

  Table state{{"index", "x_star", "jacobian_eigen_real_part"}, {}};
  for (Eigen::Index i = 0; i < eq.x_star.size(); ++i)
    state.add_row({static_cast<long long>(i), eq.x_star[i], eq.jacobian_eigen_real_parts[i]});
  w.table(state, "equilibrium");

  Table summary{{"quantity", "value"}, {}};
  summary.add_row({std::string("converged"), static_cast<long long>(eq.converged)});
  summary.add_row({std::string("iterations"), static_cast<long long>(eq.iterations)});
  summary.add_row({std::string("residual_norm"), eq.residual_norm});
  summary.add_row({std::string("dominant_real_part"), eq.dominant_real_part});
  summary.add_row({std::string("stability_score"), eq.stability_score()});
  summary.add_row({std::string("equilibrium_distance"), distance});
  summary.add_row({std::string("spectral_lhs"), sp.lhs});
  summary.add_row({std::string("spectral_rhs"), sp.rhs});
  summary.add_row({std::string("spectral_margin"), sp.margin});
  summary.add_row({std::string("spectral_condition_holds"), static_cast<long long>(sp.holds)});
  summary.add_row({std::string("lambda_min_A"), sp.lambda_min_A});
  summary.add_row({std::string("boundedness_radius"),
                   model.saturation().minCoeff() > 0.0 ? Cell(boundedness_radius(model)) : Cell(std::monostate{})});
  w.table(summary, "equilibrium_summary");

  out << "equilibrium: residual=" << format_number(eq.residual_norm)
      << " dominant_real_part=" << format_number(eq.dominant_real_part)
      << " distance=" << format_number(distance) << " spectral_condition=" << (sp.holds ? "holds" : "fails")
      << '\n';
  if (!eq.converged) throw NumericalError("Newton iteration did not converge");
}

void run_scenario_cmd(const RunConfig& cfg, Writer& w, std::ostream& out) {
  const ScenarioRun run = run_scenario(cfg.scenario.to_preset(), cfg.scenario.shocks, cfg.scenario.to_options());
  w.table(reduced_trajectory_table(run.trajectory), "trajectory");
  w.table(scenario_summary_table({{cfg.scenario.preset, run.metrics}}), "scenario_metrics");
  w.table(events_table(run.trajectory), "events");
  out << cfg.scenario.preset << ": " << describe(run.metrics) << " regime="
      << to_string(classify_regime(run.metrics, cfg.experiment.thresholds)) << '\n';
}

void run_scenarios(const RunConfig& cfg, Writer& w, std::ostream& out) {
  const ScenarioOptions opts = cfg.scenario.to_options();
  std::vector<std::pair<std::string, MetricsRecord>> rows;
  for (const std::string& name : preset_names()) {
    const ScenarioRun run = run_scenario(preset(name), {}, opts);
    w.table(reduced_trajectory_table(run.trajectory), "trajectory_" + name);
    rows.emplace_back(name, run.metrics);
    out << name << ": " << describe(run.metrics) << '\n';
  }
  w.table(scenario_summary_table(rows), "scenario_summary");
}

void run_basin(const RunConfig& cfg, Writer& w, std::ostream& out) {
  const ExperimentConfig& e = cfg.experiment;
  const BasinGrid grid =
      basin_sweep(cfg.scenario.to_preset(), e.basin, cfg.scenario.to_options(), e.thresholds, e.threads);
  const BasinSummary summary = summarize_basins(grid);
  w.table(grid_table(grid), "basin_grid");
  w.table(basin_summary_table(summary), "basin_summary");
  for (const auto& r : summary.regimes)
    out << to_string(r.label) << ": " << r.count << " cells, fraction " << format_number(r.fraction) << '\n';
  out << "failed: " << summary.failed << " cells\n";
}

void run_sensitivity(const RunConfig& cfg, Writer& w, std::ostream& out) {
  const ExperimentConfig& e = cfg.experiment;
  const SensitivityReport report = global_sensitivity(cfg.scenario.to_preset(), e.sensitivity.ranges,
                                                      e.sensitivity.samples, cfg.seed, cfg.scenario.to_options(),
                                                      e.threads);
  w.table(sensitivity_table(report), "sensitivity");
  w.table(sensitivity_samples_table(report), "sensitivity_samples");
  for (const auto& metric : report.metrics) {
    out << metric << ":";
    for (const auto& p : report.ranking(metric)) out << ' ' << p;
    out << '\n';
  }
  out << "failed samples: " << report.failures << '\n';
}

void run_oat(const RunConfig& cfg, Writer& w, std::ostream& out) {
  const OatConfig& o = cfg.experiment.oat;
  const std::vector<Shock> shocks = o.use_scenario_shocks ? cfg.scenario.shocks : std::vector<Shock>{};
  const auto points =
      oat_sweep(cfg.scenario.to_preset(), o.parameter, o.values, shocks, cfg.scenario.to_options(), cfg.experiment.threads);
  w.table(oat_table(o.parameter, points), "oat");
  std::size_t failed = 0;
  for (const auto& p : points) failed += p.metrics ? 0 : 1;
  out << "oat " << o.parameter << ": " << points.size() << " values, " << failed << " failed\n";
}

void run_shock(const RunConfig& cfg, Writer& w, std::ostream& out) {
  const ShockExperimentConfig& s = cfg.experiment.shock;
  const ScenarioOptions opts = cfg.scenario.to_options();
  std::vector<ShockRecord> records;
  for (const std::string& name : s.presets) {
    for (ShockKind kind : s.kinds) {
      const Shock shock{s.time, kind, s.magnitude};
      ScenarioRun run = run_scenario(preset(name), {shock}, opts);
      out << name << " " << to_string(kind) << ": " << describe(run.metrics) << '\n';
      records.push_back({name, shock, run.metrics, std::move(run.trajectory)});
    }
  }
  w.table(shock_summary_table(records), "shock_summary");
  w.table(shock_trajectory_table(records), "shock_trajectories");
}

bool run_verify(const RunConfig& cfg, Writer& w, std::ostream& out) {
  VerifySettings vs;
  vs.seed = cfg.seed;
  vs.threads = cfg.experiment.threads;
  const auto checks = run_verification_suite(vs);
  w.table(verify_table(checks), "verify_report");
  bool all = true;
  for (const auto& c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << " (" << c.passed_trials << "/" << c.trials
        << " trials, worst " << format_number(c.worst) << ", tolerance " << format_number(c.tolerance) << ")\n";
    all = all && c.pass;
  }
  return all;
}

json load_raw_config(const std::string& path) {
  if (path.empty()) return json(nullptr);
  json j = read_json_file(path);
  // A manifest carries its resolved configuration.
  if (j.is_object() && j.contains("artifact_version") && j.contains("config")) return j["config"];
  return j;
}

fs::path output_directory(const Globals& g, const RunConfig& cfg) {
  if (g.out) return *g.out;
  if (const char* env = std::getenv(kOutputEnvVar); env && *env) return env;
  if (cfg.output.directory) return *cfg.output.directory;
  return kDefaultOutputDirectory;
}

std::string command_line(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) {
    if (!s.empty()) s += ' ';
    s += a;
  }
  return s;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Human-AI coexistence model: simulations, experiments and property checks", "coexistd"};
  app.require_subcommand(1);
  Globals g;
  CommandArgs c;
  app.add_option("-c,--config", g.config_path, "JSON configuration file (or a run manifest)")->check(CLI::ExistingFile);
  app.add_option("-o,--out", g.out, "Output directory (overrides " + std::string(kOutputEnvVar) + " and the config)");
  app.add_option("-s,--seed", g.seed, "Master seed");
  app.add_option("-f,--format", g.format, "Output table format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("-j,--threads", g.threads, "Worker threads (0 = hardware concurrency)");

  using Runner = std::function<bool(const RunConfig&, Writer&, std::ostream&)>;
  std::vector<std::pair<CLI::App*, Runner>> commands;
  auto add = [&](const std::string& name, const std::string& help, Runner run) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    commands.emplace_back(sub, std::move(run));
    return sub;
  };
  auto always = [](auto fn) {
    return [fn](const RunConfig& cfg, Writer& w, std::ostream& out) {
      fn(cfg, w, out);
      return true;
    };
  };

  add("simulate", "Integrate the full-model gradient flow", always(run_simulate));
  add("equilibrium", "Solve for the full-model equilibrium and report its stability", always(run_equilibrium));
  add("scenario", "Run one reduced scenario", always(run_scenario_cmd))
      ->add_option("-p,--preset", c.preset, "Scenario preset")
      ->check(CLI::IsMember(preset_names()));
  add("scenarios", "Run all presets and write the summary table", always(run_scenarios));
  add("basin", "Sweep initial AI and governance states and classify regimes", always(run_basin))
      ->add_option("-r,--resolution", c.resolution, "Grid points per axis")
      ->check(CLI::PositiveNumber);
  add("sensitivity", "Latin hypercube sensitivity analysis", always(run_sensitivity))
      ->add_option("-n,--samples", c.samples, "Number of samples");
  CLI::App* oat = add("oat", "One-at-a-time parameter sweep", always(run_oat));
  oat->add_option("-p,--parameter", c.parameter, "Parameter to sweep");
  oat->add_option("-v,--values", c.values, "Comma-separated parameter values")->delimiter(',');
  add("shock", "Apply trust, physical and governance shocks to the presets", always(run_shock));
  add("verify", "Run the executable property checks", run_verify);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(rev);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const auto started = std::chrono::steady_clock::now();
  RunConfig cfg;
  fs::path dir;
  try {
    json j = load_raw_config(g.config_path);
    if (g.seed) j["seed"] = *g.seed;
    if (g.format) j["output"]["format"] = *g.format;
    if (g.threads) j["experiment"]["threads"] = *g.threads;
    if (c.preset) j["scenario"]["preset"] = *c.preset;
    if (c.resolution) {
      j["experiment"]["basin"]["a0_points"] = *c.resolution;
      j["experiment"]["basin"]["g0_points"] = *c.resolution;
    }
    if (c.samples) j["experiment"]["sensitivity"]["samples"] = *c.samples;
    if (c.parameter) j["experiment"]["oat"]["parameter"] = *c.parameter;
    if (!c.values.empty()) j["experiment"]["oat"]["values"] = c.values;
    cfg = parse_config(j);
    dir = output_directory(g, cfg);
    cfg.output.directory = dir.string();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto selected = std::find_if(commands.begin(), commands.end(), [](const auto& p) { return p.first->parsed(); });
  const std::string name = selected->first->get_name();
  try {
    fs::create_directories(dir);
    Writer w(dir, cfg.output.format);
    const bool ok = selected->second(cfg, w, out);

    RunManifest manifest;
    manifest.command = command_line(args);
    manifest.seed = cfg.seed;
    manifest.config = to_json(cfg);
    for (const auto& f : w.names()) manifest.outputs.push_back(describe_output(dir, f));
    manifest.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_manifest(manifest, dir);
    out << "wrote " << w.names().size() << " files and manifest.json to " << dir.string() << '\n';
    if (!ok) {
      err << "error: " << name << " reported failures\n";
      return kExitRuntime;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << name << " failed: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 0; i < argc; ++i) args.emplace_back(argv[i]);
  if (args.empty()) args.emplace_back("coexistd");
  return cli_dispatch(args, out, err);
}

}  // namespace coexist
