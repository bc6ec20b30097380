#include <doctest.h>

#include <fstream>
#include <functional>
#include <set>

#include "coexist/config.hpp"
#include "coexist/error.hpp"
#include "coexist/instances.hpp"
#include "tmpdir.hpp"

using namespace coexist;
using nlohmann::json;

namespace {

std::string config_error_key(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

RunConfig resolved_defaults() {
  RunConfig cfg;
  resolve(cfg);
  return cfg;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Every object key of the document must be declared in the schema, and
// every declared property must appear in the document.
void compare_with_schema(const json& doc, const json& schema, const std::string& path,
                         std::vector<std::string>& problems) {
  if (schema.contains("properties") && doc.is_object()) {
    const json& props = schema["properties"];
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      if (!props.contains(it.key())) {
        problems.push_back("undeclared " + path + it.key());
        continue;
      }
      compare_with_schema(it.value(), props[it.key()], path + it.key() + ".", problems);
    }
    for (auto it = props.begin(); it != props.end(); ++it)
      if (!doc.contains(it.key()) && it.key() != "directory") problems.push_back("missing " + path + it.key());
    if (schema.value("additionalProperties", true) != false) problems.push_back("open object " + path);
  }
  if (schema.contains("items") && doc.is_array())
    for (const json& item : doc) compare_with_schema(item, schema["items"], path + "[].", problems);
}

}  // namespace

TEST_CASE("empty text and empty file give the resolved defaults") {
  const RunConfig expected = resolved_defaults();
  CHECK(parse_config_text("") == expected);
  CHECK(parse_config_text("  \n\t ") == expected);
  CHECK(parse_config_text("{}") == expected);

  fixture::TempDir dir("config_empty");
  write_file(dir / "empty.json", "");
  CHECK(load_config(dir / "empty.json") == expected);
  CHECK(expected.seed == 42);
  CHECK(expected.model.n_humans == 4);
  CHECK(expected.model.human_profiles.size() == 4);
  CHECK(expected.experiment.basin.a0_points == 35);
  CHECK(expected.experiment.sensitivity.samples == 500);
}

TEST_CASE("n_humans = 0 is rejected naming the field") {
  CHECK(config_error_key(R"({"model": {"n_humans": 0}})") == "model.n_humans");
  CHECK(config_error_key(R"({"model": {"n_ai": -1}})") == "model.n_ai");
}

TEST_CASE("unknown keys are rejected with their dotted path") {
  CHECK(config_error_key(R"({"sead": 1})") == "sead");
  CHECK(config_error_key(R"({"model": {"n_humanz": 3}})") == "model.n_humanz");
  CHECK(config_error_key(R"({"model": {"layers": {"social": {"wieght": 1}}}})") == "model.layers.social.wieght");
  CHECK(config_error_key(R"({"scenario": {"parameters": {"mu_X": 1}}})") == "scenario.parameters.mu_X");
  CHECK(config_error_key(R"({"experiment": {"basin": {"points": 3}}})") == "experiment.basin.points");
}

TEST_CASE("type and range violations name the key") {
  CHECK(config_error_key(R"({"seed": "abc"})") == "seed");
  CHECK(config_error_key(R"({"seed": -3})") == "seed");
  CHECK(config_error_key(R"({"output": {"format": "xml"}})") == "output.format");
  CHECK(config_error_key(R"({"scenario": {"preset": "nope"}})") == "scenario.preset");
  CHECK(config_error_key(R"({"experiment": {"sensitivity": {"samples": 10}}})") == "experiment.sensitivity.samples");
  CHECK(config_error_key(R"({"experiment": {"basin": {"a0_points": 1}}})") == "experiment.basin.a0_points");
  CHECK(config_error_key(R"({"experiment": {"oat": {"parameter": "bogus"}}})") == "experiment.oat.parameter");
  CHECK(config_error_key(R"({"model": {"integrator": {"method": "euler"}}})") == "model.integrator.method");
}

TEST_CASE("syntax errors report line and column") {
  const std::string key = config_error_key("{\n  \"seed\": ,\n}");
  CHECK(key.rfind("<config>:2:", 0) == 0);

  fixture::TempDir dir("config_syntax");
  write_file(dir / "bad.json", "{\n\n  \"model\": {\"n_ai\": 2,,}\n}");
  try {
    load_config(dir / "bad.json");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    const std::string expected_prefix = (dir / "bad.json").string() + ":3:";
    CHECK(e.key().rfind(expected_prefix, 0) == 0);
  }
}

TEST_CASE("missing config file is a ConfigError") {
  CHECK_THROWS_AS(load_config("/nonexistent/coexist/config.json"), ConfigError);
}

TEST_CASE("scenario preset key loads the named preset before inline overrides") {
  const RunConfig cfg = parse_config_text(R"({"scenario": {"preset": "over_governance"}})");
  CHECK(cfg.scenario.parameters == preset("over_governance").params);

  const RunConfig inline_cfg =
      parse_config_text(R"({"scenario": {"preset": "no_governance", "parameters": {"mu_H": 0.7}}})");
  ReducedParameters expected = preset("no_governance").params;
  expected.mu_H = 0.7;
  CHECK(inline_cfg.scenario.parameters == expected);
}

TEST_CASE("shocks parse with kinds and magnitudes") {
  const RunConfig cfg = parse_config_text(
      R"({"scenario": {"shocks": [{"time": 30, "kind": "trust", "magnitude": 0.4},
                                   {"time": 60, "kind": "governance", "magnitude": 0.2}]}})");
  REQUIRE(cfg.scenario.shocks.size() == 2);
  CHECK(cfg.scenario.shocks[0].kind == ShockKind::Trust);
  CHECK(cfg.scenario.shocks[1].time == 60.0);
  CHECK(cfg.scenario.shocks[1].magnitude == 0.2);
  CHECK(config_error_key(R"({"scenario": {"shocks": [{"time": 30, "kind": "meteor"}]}})") ==
        "scenario.shocks[0].kind");
}

TEST_CASE("resolution is idempotent and to_json round-trips") {
  RunConfig cfg = parse_config_text(R"({"seed": 7, "model": {"n_humans": 3, "n_ai": 3, "resources": 2}})");
  RunConfig again = cfg;
  resolve(again);
  CHECK(again == cfg);
  CHECK(cfg.model.human_profiles.size() == 3);
  CHECK(cfg.model.ai_profiles[0].demand.size() == 2);
  CHECK(parse_config(to_json(cfg)) == cfg);
}

TEST_CASE("shipped preset files round-trip through save then load") {
  fixture::TempDir dir("config_presets");
  for (const std::string name : {"baseline", "no_governance", "over_governance"}) {
    CAPTURE(name);
    const auto path = std::filesystem::path(COEXIST_SOURCE_DIR) / "presets" / (name + ".json");
    const RunConfig loaded = load_config(path);
    CHECK(loaded.scenario.preset == name);
    CHECK(loaded.scenario.parameters == preset(name).params);
    CHECK(loaded.scenario.initial == preset(name).initial);
    const auto saved = dir / (name + ".json");
    save_config(loaded, saved);
    const RunConfig reloaded = load_config(saved);
    CHECK(reloaded == loaded);
    CHECK(to_json(reloaded) == to_json(loaded));
  }
}

TEST_CASE("default model section builds the baseline full-model analogue") {
  const RunConfig cfg = resolved_defaults();
  const CoexistenceModel built = build_model(cfg);
  const CoexistenceModel reference = baseline_analogue();
  REQUIRE(built.dim() == reference.dim());
  CHECK((built.A_sys() - reference.A_sys()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((built.support() - reference.support()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((built.saturation() - reference.saturation()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("published schema declares exactly the keys of a resolved config") {
  std::ifstream in(std::filesystem::path(COEXIST_SOURCE_DIR) / "schema" / "config.schema.json");
  REQUIRE(in.good());
  const json schema = json::parse(in);
  RunConfig cfg = resolved_defaults();
  cfg.output.directory = "out";
  cfg.scenario.shocks.push_back(Shock{});
  std::vector<std::string> problems;
  compare_with_schema(to_json(cfg), schema, "", problems);
  for (const auto& p : problems) MESSAGE(p);
  CHECK(problems.empty());
}
