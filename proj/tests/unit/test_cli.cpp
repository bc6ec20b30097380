#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "json.hpp"

#include "coexist/cli.hpp"
#include "coexist/config.hpp"
#include "coexist/manifest.hpp"
#include "coexist/table.hpp"
#include "tmpdir.hpp"

using namespace coexist;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "coexistd");
  std::ostringstream out, err;
  Run r;
  r.code = cli_dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const std::string& value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old;
    ::setenv(name, value.c_str(), 1);
  }
  ~ScopedEnv() {
    if (old_) ::setenv(name_, old_->c_str(), 1);
    else ::unsetenv(name_);
  }

 private:
  const char* name_;
  std::optional<std::string> old_;
};

}  // namespace

TEST_CASE("usage errors exit 1 with usage text on the error stream") {
  const Run unknown_command = run({"frobnicate"});
  CHECK(unknown_command.code == kExitUsage);
  CHECK(unknown_command.err.find("Usage") != std::string::npos);
  CHECK(unknown_command.out.empty());

  const Run unknown_flag = run({"verify", "--bogus"});
  CHECK(unknown_flag.code == kExitUsage);
  CHECK(unknown_flag.err.find("Usage") != std::string::npos);

  const Run none = run({});
  CHECK(none.code == kExitUsage);

  const Run bad_format = run({"--format", "xml", "scenarios"});
  CHECK(bad_format.code == kExitUsage);

  const Run missing_file = run({"--config", "/nonexistent/cfg.json", "scenarios"});
  CHECK(missing_file.code == kExitUsage);
}

TEST_CASE("help exits 0") {
  const Run help = run({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("basin") != std::string::npos);
}

TEST_CASE("invalid configuration exits 1 naming the key") {
  fixture::TempDir dir("cli_badcfg");
  write_file(dir / "bad.json", R"({"model": {"n_humans": 0}})");
  const Run r = run({"--config", (dir / "bad.json").string(), "--out", (dir / "out").string(), "simulate"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("model.n_humans") != std::string::npos);

  write_file(dir / "typo.json", R"({"experimnet": {}})");
  const Run t = run({"--config", (dir / "typo.json").string(), "--out", (dir / "out").string(), "scenarios"});
  CHECK(t.code == kExitUsage);
  CHECK(t.err.find("experimnet") != std::string::npos);

  const Run oat = run({"--out", (dir / "out").string(), "oat", "--parameter", "nope"});
  CHECK(oat.code == kExitUsage);
}

TEST_CASE("scenarios writes a three-row summary") {
  fixture::TempDir dir("cli_scenarios");
  const Run r = run({"scenarios", "--out", dir.path().string()});
  REQUIRE(r.code == kExitOk);
  const CsvData d = read_csv(dir / "scenario_summary.csv");
  CHECK(d.header == std::vector<std::string>{"scenario", "coexistence_index", "domination_index", "conflict_burden",
                                             "recovery_time", "recovery_kind"});
  REQUIRE(d.rows.size() == 3);
  CHECK(d.rows[0][0] == "baseline");
  CHECK(d.rows[1][0] == "no_governance");
  CHECK(d.rows[2][0] == "over_governance");
  CHECK(fs::exists(dir / "trajectory_baseline.csv"));
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("basin with a config file writes the grid and a manifest with matching digests") {
  fixture::TempDir dir("cli_basin");
  write_file(dir / "default.cfg", R"({"experiment": {"basin": {"a0_points": 4, "g0_points": 3}}})");
  const Run r = run({"basin", "--config", (dir / "default.cfg").string(), "--out", (dir / "out").string()});
  REQUIRE(r.code == kExitOk);
  const std::string grid = slurp(dir / "out" / "basin_grid.csv");
  CHECK(std::count(grid.begin(), grid.end(), '\n') == 13);

  const nlohmann::json m = nlohmann::json::parse(slurp(dir / "out" / "manifest.json"));
  CHECK(m["artifact_version"] == kArtifactVersion);
  CHECK(m["seed"] == 42);
  CHECK(m["config"]["experiment"]["basin"]["a0_points"] == 4);
  CHECK(m["config"]["experiment"]["basin"]["g0_max"].is_number());
  CHECK(m["duration_seconds"].get<double>() >= 0.0);
  REQUIRE(m["outputs"].size() == 2);
  for (const auto& f : m["outputs"]) {
    const fs::path p = dir / "out" / f["file"].get<std::string>();
    CHECK(f["sha256"] == sha256_file(p));
    CHECK(f["bytes"] == fs::file_size(p));
  }
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("a manifest used as config reproduces the outputs byte for byte") {
  fixture::TempDir dir("cli_replay");
  REQUIRE(run({"--seed", "9", "sensitivity", "--samples", "100", "--out", (dir / "a").string()}).code == kExitOk);
  REQUIRE(run({"--config", (dir / "a" / "manifest.json").string(), "--out", (dir / "b").string(), "sensitivity"})
              .code == kExitOk);
  for (const std::string f : {"sensitivity.csv", "sensitivity_samples.csv"})
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  const nlohmann::json ma = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  const nlohmann::json mb = nlohmann::json::parse(slurp(dir / "b" / "manifest.json"));
  CHECK(ma["outputs"] == mb["outputs"]);
  CHECK(mb["seed"] == 9);
}

TEST_CASE("verify --seed 42 twice gives identical reports") {
  fixture::TempDir dir("cli_verify");
  const Run a = run({"verify", "--seed", "42", "--out", (dir / "a").string()});
  const Run b = run({"verify", "--seed", "42", "--out", (dir / "b").string()});
  REQUIRE(a.code == kExitOk);
  REQUIRE(b.code == kExitOk);
  CHECK(slurp(dir / "a" / "verify_report.csv") == slurp(dir / "b" / "verify_report.csv"));
  CHECK(a.out.find("PASS ") != std::string::npos);
  CHECK(a.out.find("FAIL ") == std::string::npos);
}

TEST_CASE("output directory precedence: --out, then the environment, then the config") {
  fixture::TempDir dir("cli_outdir");
  write_file(dir / "cfg.json", R"({"output": {"directory": ")" + (dir / "from_config").string() + R"("}})");
  const std::string cfg = (dir / "cfg.json").string();
  {
    ScopedEnv env(kOutputEnvVar, (dir / "from_env").string());
    REQUIRE(run({"--config", cfg, "--out", (dir / "from_flag").string(), "oat", "-v", "0.1,0.2"}).code == kExitOk);
    CHECK(fs::exists(dir / "from_flag" / "oat.csv"));
    REQUIRE(run({"--config", cfg, "oat", "-v", "0.1,0.2"}).code == kExitOk);
    CHECK(fs::exists(dir / "from_env" / "oat.csv"));
  }
  ::unsetenv(kOutputEnvVar);
  REQUIRE(run({"--config", cfg, "oat", "-v", "0.1,0.2"}).code == kExitOk);
  CHECK(fs::exists(dir / "from_config" / "oat.csv"));
  const CsvData d = read_csv(dir / "from_config" / "oat.csv");
  CHECK(d.rows.size() == 2);
}

TEST_CASE("json format writes mirrors instead of CSV") {
  fixture::TempDir dir("cli_json");
  REQUIRE(run({"--format", "json", "scenario", "--preset", "no_governance", "--out", dir.path().string()}).code ==
          kExitOk);
  CHECK(fs::exists(dir / "scenario_metrics.json"));
  CHECK(!fs::exists(dir / "scenario_metrics.csv"));
  const nlohmann::json t = nlohmann::json::parse(slurp(dir / "trajectory.json"));
  REQUIRE(t.is_array());
  CHECK(t[0].contains("H"));
}

TEST_CASE("equilibrium reports a converged, stable baseline analogue") {
  fixture::TempDir dir("cli_equilibrium");
  REQUIRE(run({"equilibrium", "--out", dir.path().string()}).code == kExitOk);
  const CsvData d = read_csv(dir / "equilibrium_summary.csv");
  std::map<std::string, std::string> v;
  for (const auto& row : d.rows) v[row[0]] = row[1];
  CHECK(v["converged"] == "1");
  CHECK(std::stod(v["residual_norm"]) <= 1e-10);
  CHECK(std::stod(v["dominant_real_part"]) < 0.0);
  CHECK(read_csv(dir / "equilibrium.csv").rows.size() == 20);
}

TEST_CASE("simulate writes the full-model layout") {
  fixture::TempDir dir("cli_simulate");
  REQUIRE(run({"simulate", "--out", dir.path().string()}).code == kExitOk);
  const CsvData d = read_csv(dir / "trajectory.csv");
  REQUIRE(d.header.size() == 22);
  CHECK(d.header.front() == "t");
  CHECK(d.header[1] == "x_0");
  CHECK(d.header.back() == "J");
  CHECK(!d.rows.empty());
}
