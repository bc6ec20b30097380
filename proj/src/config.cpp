#include "coexist/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "coexist/error.hpp"
#include "coexist/instances.hpp"
#include "coexist/seed.hpp"

namespace coexist {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string indexed(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

// Strict accessor over one JSON object: typed reads, and unknown keys
// reported by finish().
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }
  Reader(const Reader&) = delete;

  const std::string& path() const { return path_; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void read(const std::string& key, double& out) {
    if (const json* v = find(key)) out = as_double(*v, join(path_, key));
  }
  void read(const std::string& key, int& out) {
    if (const json* v = find(key)) out = static_cast<int>(as_integer(*v, join(path_, key), -1'000'000, 1'000'000));
  }
  void read(const std::string& key, unsigned& out) {
    if (const json* v = find(key)) out = static_cast<unsigned>(as_integer(*v, join(path_, key), 0, 4096));
  }
  void read(const std::string& key, std::size_t& out) {
    if (const json* v = find(key))
      out = static_cast<std::size_t>(as_integer(*v, join(path_, key), 0, 1'000'000'000'000));
  }
  void read(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(join(path_, key), "expected true or false");
      out = v->get<bool>();
    }
  }
  void read(const std::string& key, std::string& out) {
    if (const json* v = find(key)) out = as_string(*v, join(path_, key));
  }
  void read(const std::string& key, std::vector<double>& out) {
    if (const json* v = find(key)) out = as_double_array(*v, join(path_, key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(join(path_, it.key()), "unknown key");
  }

  static double as_double(const json& v, const std::string& key) {
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    return v.get<double>();
  }
  static long long as_integer(const json& v, const std::string& key, long long lo, long long hi) {
    if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
    if (v.is_number_unsigned() && v.get<unsigned long long>() > static_cast<unsigned long long>(hi))
      throw ConfigError(key, "integer out of range");
    const long long x = v.get<long long>();
    if (x < lo || x > hi) throw ConfigError(key, "integer out of range");
    return x;
  }
  static std::string as_string(const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError(key, "expected a string");
    return v.get<std::string>();
  }
  static std::vector<double> as_double_array(const json& v, const std::string& key) {
    if (!v.is_array()) throw ConfigError(key, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_double(v[i], indexed(key, i)));
    return out;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Topology topology_from(const std::string& s, const std::string& key) {
  if (s == "complete") return Topology::Complete;
  if (s == "ring") return Topology::Ring;
  if (s == "random") return Topology::Random;
  throw ConfigError(key, "unknown topology '" + s + "' (complete, ring, random)");
}

IntegratorMethod method_from(const std::string& s, const std::string& key) {
  if (s == "dormand_prince45") return IntegratorMethod::DormandPrince45;
  if (s == "rk4") return IntegratorMethod::RK4;
  throw ConfigError(key, "unknown integrator method '" + s + "' (dormand_prince45, rk4)");
}

std::string to_string(IntegratorMethod m) {
  return m == IntegratorMethod::RK4 ? "rk4" : "dormand_prince45";
}

TrustShockMode trust_mode_from(const std::string& s, const std::string& key) {
  if (s == "reduce_viability") return TrustShockMode::ReduceViability;
  if (s == "suppress_mutualism") return TrustShockMode::SuppressMutualism;
  throw ConfigError(key, "unknown trust shock mode '" + s + "' (reduce_viability, suppress_mutualism)");
}

ShockKind shock_kind_from(const std::string& s, const std::string& key) {
  try {
    return shock_kind_from_string(s);
  } catch (const DomainError& e) {
    throw ConfigError(key, e.what());
  }
}

void parse_integrator(Reader& parent, const std::string& key, IntegratorControls& c) {
  const json* v = parent.find(key);
  if (!v) return;
  Reader r(*v, join(parent.path(), key));
  std::string method = to_string(c.method);
  r.read("method", method);
  c.method = method_from(method, join(r.path(), "method"));
  r.read("abs_tol", c.abs_tol);
  r.read("rel_tol", c.rel_tol);
  r.read("min_step", c.min_step);
  if (const json* ms = r.find("max_step"))
    c.max_step = ms->is_null() ? std::numeric_limits<double>::infinity()
                               : Reader::as_double(*ms, join(r.path(), "max_step"));
  r.read("initial_step", c.initial_step);
  r.read("fixed_step", c.fixed_step);
  r.read("max_steps", c.max_steps);
  r.finish();
}

json integrator_json(const IntegratorControls& c) {
  json j;
  j["method"] = to_string(c.method);
  j["abs_tol"] = c.abs_tol;
  j["rel_tol"] = c.rel_tol;
  j["min_step"] = c.min_step;
  j["max_step"] = std::isinf(c.max_step) ? json(nullptr) : json(c.max_step);
  j["initial_step"] = c.initial_step;
  j["fixed_step"] = c.fixed_step;
  j["max_steps"] = c.max_steps;
  return j;
}

std::vector<ProfileConfig> parse_profiles(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError(key, "expected an array of profiles");
  std::vector<ProfileConfig> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Reader r(v[i], indexed(key, i));
    ProfileConfig p;
    r.read("demand", p.demand);
    r.read("supply", p.supply);
    r.finish();
    out.push_back(std::move(p));
  }
  return out;
}

void parse_layer(Reader& parent, const std::string& key, LayerConfig& layer) {
  const json* v = parent.find(key);
  if (!v) return;
  Reader r(*v, join(parent.path(), key));
  std::string topo = to_string(layer.topology);
  r.read("topology", topo);
  layer.topology = topology_from(topo, join(r.path(), "topology"));
  r.read("weight", layer.weight);
  r.read("edge_probability", layer.edge_probability);
  r.finish();
}

void parse_model(Reader& root, ModelConfig& m) {
  const json* v = root.find("model");
  if (!v) return;
  Reader r(*v, "model");
  r.read("n_humans", m.n_humans);
  r.read("n_ai", m.n_ai);
  r.read("resources", m.resources);
  if (const json* p = r.find("human_profiles")) m.human_profiles = parse_profiles(*p, "model.human_profiles");
  if (const json* p = r.find("ai_profiles")) m.ai_profiles = parse_profiles(*p, "model.ai_profiles");
  if (const json* c = r.find("contact")) {
    if (c->is_number()) {
      m.contact_level = c->get<double>();
      m.contact.clear();
    } else {
      if (!c->is_array()) throw ConfigError("model.contact", "expected a number or a matrix");
      m.contact.clear();
      for (std::size_t i = 0; i < c->size(); ++i)
        m.contact.push_back(Reader::as_double_array((*c)[i], indexed("model.contact", i)));
    }
  }
  r.read("epsilon", m.epsilon);
  if (const json* l = r.find("layers")) {
    Reader lr(*l, "model.layers");
    parse_layer(lr, "physical", m.physical);
    parse_layer(lr, "psychological", m.psychological);
    parse_layer(lr, "social", m.social);
    lr.finish();
  }
  if (const json* w = r.find("weights")) {
    Reader wr(*w, "model.weights");
    wr.read("alpha", m.weights.alpha);
    wr.read("beta", m.weights.beta);
    wr.read("gamma", m.weights.gamma);
    wr.read("delta", m.weights.delta);
    wr.read("lambda", m.weights.lambda);
    wr.finish();
  }
  for (auto [name, ref] : {std::pair<const char*, double*>{"alpha_P", &m.alpha_P},
                           {"alpha_Psi", &m.alpha_Psi}, {"alpha_S", &m.alpha_S}, {"alpha_R", &m.alpha_R},
                           {"tau_P", &m.tau_P}, {"tau_Psi", &m.tau_Psi}, {"tau_S", &m.tau_S},
                           {"beta_P", &m.beta_P}, {"beta_Psi", &m.beta_Psi}, {"beta_S", &m.beta_S},
                           {"beta_R", &m.beta_R}, {"governance", &m.governance},
                           {"reversibility", &m.reversibility}, {"conflict", &m.conflict},
                           {"development", &m.development}, {"development_cost", &m.development_cost},
                           {"ai_cooperation", &m.ai_cooperation}, {"saturation", &m.saturation},
                           {"support", &m.support}, {"horizon", &m.horizon}})
    r.read(name, *ref);
  r.read("x0", m.x0);
  parse_integrator(r, "integrator", m.integrator);
  r.finish();
}

void parse_scenario(Reader& root, ScenarioConfig& s) {
  const json* v = root.find("scenario");
  if (!v) return;
  Reader r(*v, "scenario");
  if (const json* p = r.find("preset")) {
    s.preset = Reader::as_string(*p, "scenario.preset");
    try {
      const ScenarioPreset& base = preset(s.preset);
      s.parameters = base.params;
      s.initial = base.initial;
      s.horizon = base.horizon;
    } catch (const DomainError& e) {
      throw ConfigError("scenario.preset", e.what());
    }
  }
  if (const json* p = r.find("parameters")) {
    Reader pr(*p, "scenario.parameters");
    for (std::string_view name : kReducedParameterNames) pr.read(std::string(name), parameter_ref(s.parameters, name));
    pr.finish();
  }
  if (const json* p = r.find("initial")) {
    Reader ir(*p, "scenario.initial");
    ir.read("H", s.initial.H);
    ir.read("A", s.initial.A);
    ir.read("g", s.initial.g);
    ir.read("C", s.initial.C);
    ir.finish();
  }
  r.read("horizon", s.horizon);
  if (const json* p = r.find("shocks")) {
    if (!p->is_array()) throw ConfigError("scenario.shocks", "expected an array of shocks");
    s.shocks.clear();
    for (std::size_t i = 0; i < p->size(); ++i) {
      Reader sr((*p)[i], indexed("scenario.shocks", i));
      Shock sh;
      sr.read("time", sh.time);
      std::string kind = to_string(sh.kind);
      sr.read("kind", kind);
      sh.kind = shock_kind_from(kind, join(sr.path(), "kind"));
      sr.read("magnitude", sh.magnitude);
      sr.finish();
      s.shocks.push_back(sh);
    }
  }
  std::string mode = to_string(s.trust_mode);
  r.read("trust_mode", mode);
  s.trust_mode = trust_mode_from(mode, "scenario.trust_mode");
  r.read("trust_suppression_duration", s.trust_suppression_duration);
  if (const json* p = r.find("metrics")) {
    Reader mr(*p, "scenario.metrics");
    mr.read("C_ref", s.metrics.C_ref);
    mr.read("tail_fraction", s.metrics.tail_fraction);
    mr.read("band", s.metrics.band);
    mr.read("dwell", s.metrics.dwell);
    mr.read("pre_window", s.metrics.pre_window);
    mr.finish();
  }
  parse_integrator(r, "integrator", s.integrator);
  r.finish();
}

void parse_experiment(Reader& root, ExperimentConfig& e) {
  const json* v = root.find("experiment");
  if (!v) return;
  Reader r(*v, "experiment");
  if (const json* p = r.find("basin")) {
    Reader br(*p, "experiment.basin");
    br.read("a0_min", e.basin.a0_min);
    br.read("a0_max", e.basin.a0_max);
    br.read("g0_min", e.basin.g0_min);
    if (br.find("g0_max")) {
      br.read("g0_max", e.basin.g0_max);
      e.basin_g0_max_from_cap = false;
    }
    br.read("a0_points", e.basin.a0_points);
    br.read("g0_points", e.basin.g0_points);
    br.read("H0_fraction", e.basin.H0_fraction);
    br.read("C0_fraction", e.basin.C0_fraction);
    br.finish();
  }
  if (const json* p = r.find("thresholds")) {
    Reader tr(*p, "experiment.thresholds");
    tr.read("coexistence", e.thresholds.coexistence);
    tr.read("domination", e.thresholds.domination);
    tr.finish();
  }
  if (const json* p = r.find("sensitivity")) {
    Reader sr(*p, "experiment.sensitivity");
    sr.read("samples", e.sensitivity.samples);
    if (const json* rg = sr.find("ranges")) {
      if (!rg->is_array()) throw ConfigError("experiment.sensitivity.ranges", "expected an array of ranges");
      e.sensitivity.ranges.clear();
      for (std::size_t i = 0; i < rg->size(); ++i) {
        Reader rr((*rg)[i], indexed("experiment.sensitivity.ranges", i));
        ParameterRange range;
        rr.read("name", range.name);
        rr.read("lo", range.lo);
        rr.read("hi", range.hi);
        rr.finish();
        e.sensitivity.ranges.push_back(range);
      }
    }
    sr.finish();
  }
  if (const json* p = r.find("oat")) {
    Reader orr(*p, "experiment.oat");
    orr.read("parameter", e.oat.parameter);
    orr.read("values", e.oat.values);
    orr.read("use_scenario_shocks", e.oat.use_scenario_shocks);
    orr.finish();
  }
  if (const json* p = r.find("shock")) {
    Reader sr(*p, "experiment.shock");
    sr.read("time", e.shock.time);
    sr.read("magnitude", e.shock.magnitude);
    if (const json* ps = sr.find("presets")) {
      if (!ps->is_array()) throw ConfigError("experiment.shock.presets", "expected an array of preset names");
      e.shock.presets.clear();
      for (std::size_t i = 0; i < ps->size(); ++i)
        e.shock.presets.push_back(Reader::as_string((*ps)[i], indexed("experiment.shock.presets", i)));
    }
    if (const json* ks = sr.find("kinds")) {
      if (!ks->is_array()) throw ConfigError("experiment.shock.kinds", "expected an array of shock kinds");
      e.shock.kinds.clear();
      for (std::size_t i = 0; i < ks->size(); ++i) {
        const std::string key = indexed("experiment.shock.kinds", i);
        e.shock.kinds.push_back(shock_kind_from(Reader::as_string((*ks)[i], key), key));
      }
    }
    sr.finish();
  }
  r.read("threads", e.threads);
  r.finish();
}

void parse_output(Reader& root, OutputConfig& o) {
  const json* v = root.find("output");
  if (!v) return;
  Reader r(*v, "output");
  if (const json* d = r.find("directory")) o.directory = Reader::as_string(*d, "output.directory");
  std::string format = to_string(o.format);
  r.read("format", format);
  if (format == "csv") o.format = OutputFormat::Csv;
  else if (format == "json") o.format = OutputFormat::Json;
  else throw ConfigError("output.format", "expected csv or json");
  r.finish();
}

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(key, message);
}

void validate_integrator(const IntegratorControls& c, const std::string& key) {
  require(c.abs_tol > 0.0, join(key, "abs_tol"), "must be positive");
  require(c.rel_tol >= 0.0, join(key, "rel_tol"), "must be nonnegative");
  require(c.min_step > 0.0, join(key, "min_step"), "must be positive");
  require(c.max_step >= c.min_step, join(key, "max_step"), "must be at least min_step");
  require(c.initial_step > 0.0, join(key, "initial_step"), "must be positive");
  require(c.fixed_step > 0.0, join(key, "fixed_step"), "must be positive");
  require(c.max_steps > 0, join(key, "max_steps"), "must be positive");
}

void validate_profiles(const std::vector<ProfileConfig>& ps, int count, int k, const std::string& key) {
  require(static_cast<int>(ps.size()) == count, key, "expected " + std::to_string(count) + " profiles");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (auto [field, v] : {std::pair<const char*, const std::vector<double>*>{"demand", &ps[i].demand},
                            {"supply", &ps[i].supply}}) {
      const std::string fk = join(indexed(key, i), field);
      require(static_cast<int>(v->size()) == k, fk, "expected " + std::to_string(k) + " entries");
      for (double x : *v) require(std::isfinite(x) && x >= 0.0, fk, "entries must be finite and nonnegative");
    }
  }
}

Vec to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

SupplyDemandProfile to_profile(const ProfileConfig& p) { return {to_vec(p.demand), to_vec(p.supply)}; }

ProfileConfig to_config(const SupplyDemandProfile& p) {
  return {std::vector<double>(p.demand.data(), p.demand.data() + p.demand.size()),
          std::vector<double>(p.supply.data(), p.supply.data() + p.supply.size())};
}

}  // namespace

std::string to_string(Topology t) {
  switch (t) {
    case Topology::Complete: return "complete";
    case Topology::Ring: return "ring";
    case Topology::Random: return "random";
  }
  return "complete";
}

std::string to_string(OutputFormat f) { return f == OutputFormat::Json ? "json" : "csv"; }

std::string to_string(TrustShockMode m) {
  return m == TrustShockMode::SuppressMutualism ? "suppress_mutualism" : "reduce_viability";
}

ScenarioPreset ScenarioConfig::to_preset() const {
  return ScenarioPreset{preset, parameters, initial, horizon};
}

ScenarioOptions ScenarioConfig::to_options() const {
  ScenarioOptions o;
  o.integrator = integrator;
  o.metrics = metrics;
  o.trust_mode = trust_mode;
  o.trust_suppression_duration = trust_suppression_duration;
  return o;
}

RunConfig parse_config(const json& j) {
  RunConfig cfg;
  if (!j.is_null()) {
    Reader root(j, "");
    if (const json* s = root.find("seed"))
      cfg.seed = static_cast<std::uint64_t>([&] {
        if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0))
          throw ConfigError("seed", "expected a nonnegative integer");
        return s->get<unsigned long long>();
      }());
    parse_model(root, cfg.model);
    parse_scenario(root, cfg.scenario);
    parse_experiment(root, cfg.experiment);
    parse_output(root, cfg.output);
    root.finish();
  }
  resolve(cfg);
  validate(cfg);
  return cfg;
}

json parse_json_text(const std::string& text, const std::string& source) {
  if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) return json(nullptr);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line and column.
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    const auto cut = what.find("parse error");
    if (cut != std::string::npos) what = what.substr(cut);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col), what);
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open configuration file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path.string());
}

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  return parse_config(parse_json_text(text, source));
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_json_file(path)); }

void resolve(RunConfig& cfg) {
  ModelConfig& m = cfg.model;
  if (m.human_profiles.empty() || m.ai_profiles.empty()) {
    const bool builtin = m.n_humans == 4 && m.n_ai == 2 && m.resources == 3;
    std::mt19937_64 rng(derive_seed(cfg.seed, "profiles", 0));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto draw = [&] {
      std::vector<double> v(static_cast<std::size_t>(std::max(m.resources, 0)));
      for (double& x : v) x = u(rng);
      return v;
    };
    const ProfileSet builtin_set = baseline_analogue_profiles();
    if (m.human_profiles.empty() && m.n_humans >= 1) {
      for (int i = 0; i < m.n_humans; ++i)
        m.human_profiles.push_back(builtin ? to_config(builtin_set.humans[static_cast<std::size_t>(i)])
                                           : ProfileConfig{draw(), draw()});
    }
    if (m.ai_profiles.empty() && m.n_ai >= 1) {
      for (int i = 0; i < m.n_ai; ++i)
        m.ai_profiles.push_back(builtin ? to_config(builtin_set.ais[static_cast<std::size_t>(i)])
                                        : ProfileConfig{draw(), draw()});
    }
  }

  ExperimentConfig& e = cfg.experiment;
  if (e.basin_g0_max_from_cap) {
    e.basin.g0_max = cfg.scenario.parameters.g_cap;
    e.basin_g0_max_from_cap = false;
  }
  if (e.sensitivity.ranges.empty()) e.sensitivity.ranges = default_sensitivity_ranges(cfg.scenario.parameters);
  if (e.oat.values.empty()) {
    double top = 1.0;
    try {
      const double v = parameter_value(cfg.scenario.parameters, e.oat.parameter);
      if (v > 0.0) top = 2.0 * v;
    } catch (const DomainError&) {
      // reported by validate()
    }
    e.oat.values = linear_axis(0.0, top, 21);
  }
}

void validate(const RunConfig& cfg) {
  const ModelConfig& m = cfg.model;
  require(m.n_humans >= 1, "model.n_humans", "must be at least 1");
  require(m.n_ai >= 1, "model.n_ai", "must be at least 1");
  require(m.resources >= 1, "model.resources", "must be at least 1");
  validate_profiles(m.human_profiles, m.n_humans, m.resources, "model.human_profiles");
  validate_profiles(m.ai_profiles, m.n_ai, m.resources, "model.ai_profiles");
  if (m.contact.empty()) {
    require(m.contact_level >= 0.0 && m.contact_level <= 1.0, "model.contact", "must lie in [0, 1]");
  } else {
    require(static_cast<int>(m.contact.size()) == m.n_humans, "model.contact", "expected n_humans rows");
    for (std::size_t i = 0; i < m.contact.size(); ++i) {
      require(static_cast<int>(m.contact[i].size()) == m.n_ai, indexed("model.contact", i), "expected n_ai entries");
      for (double a : m.contact[i]) require(a >= 0.0 && a <= 1.0, indexed("model.contact", i), "entries must lie in [0, 1]");
    }
  }
  require(m.epsilon > 0.0, "model.epsilon", "must be positive");
  for (auto [name, layer] : {std::pair<const char*, const LayerConfig*>{"physical", &m.physical},
                             {"psychological", &m.psychological}, {"social", &m.social}}) {
    const std::string key = join("model.layers", name);
    require(layer->weight >= 0.0, join(key, "weight"), "must be nonnegative");
    require(layer->edge_probability >= 0.0 && layer->edge_probability <= 1.0, join(key, "edge_probability"),
            "must lie in [0, 1]");
  }
  for (auto [name, v] : {std::pair<const char*, double>{"alpha", m.weights.alpha}, {"beta", m.weights.beta},
                         {"gamma", m.weights.gamma}, {"delta", m.weights.delta}, {"lambda", m.weights.lambda}})
    require(v >= 0.0, join("model.weights", name), "must be nonnegative");
  for (auto [name, v] : {std::pair<const char*, double>{"alpha_P", m.alpha_P}, {"alpha_Psi", m.alpha_Psi},
                         {"alpha_S", m.alpha_S}, {"alpha_R", m.alpha_R}})
    require(v > 0.0, join("model", name), "must be positive");
  for (auto [name, v] : {std::pair<const char*, double>{"tau_P", m.tau_P}, {"tau_Psi", m.tau_Psi},
                         {"tau_S", m.tau_S}, {"beta_P", m.beta_P}, {"beta_Psi", m.beta_Psi},
                         {"beta_S", m.beta_S}, {"beta_R", m.beta_R}, {"governance", m.governance},
                         {"reversibility", m.reversibility}, {"conflict", m.conflict},
                         {"development_cost", m.development_cost}, {"ai_cooperation", m.ai_cooperation},
                         {"saturation", m.saturation}})
    require(v >= 0.0, join("model", name), "must be nonnegative");
  require(std::isfinite(m.development), "model.development", "must be finite");
  require(std::isfinite(m.support), "model.support", "must be finite");
  const int d = 3 * (m.n_humans + m.n_ai) + m.n_ai;
  require(m.x0.empty() || static_cast<int>(m.x0.size()) == d, "model.x0",
          "expected " + std::to_string(d) + " entries");
  require(m.horizon > 0.0, "model.horizon", "must be positive");
  validate_integrator(m.integrator, "model.integrator");

  const ScenarioConfig& s = cfg.scenario;
  try {
    s.parameters.validate();
  } catch (const DomainError& e) {
    throw ConfigError("scenario.parameters", e.what());
  }
  for (auto [name, v] : {std::pair<const char*, double>{"H", s.initial.H}, {"A", s.initial.A},
                         {"g", s.initial.g}, {"C", s.initial.C}})
    require(std::isfinite(v) && v >= 0.0, join("scenario.initial", name), "must be finite and nonnegative");
  require(s.horizon > 0.0, "scenario.horizon", "must be positive");
  for (std::size_t i = 0; i < s.shocks.size(); ++i) {
    const std::string key = indexed("scenario.shocks", i);
    require(s.shocks[i].time > 0.0 && s.shocks[i].time < s.horizon, join(key, "time"), "must lie inside (0, horizon)");
    require(s.shocks[i].magnitude > 0.0 && s.shocks[i].magnitude <= 1.0, join(key, "magnitude"), "must lie in (0, 1]");
  }
  require(s.trust_suppression_duration > 0.0, "scenario.trust_suppression_duration", "must be positive");
  require(s.metrics.C_ref > 0.0, "scenario.metrics.C_ref", "must be positive");
  require(s.metrics.tail_fraction > 0.0 && s.metrics.tail_fraction <= 1.0, "scenario.metrics.tail_fraction",
          "must lie in (0, 1]");
  require(s.metrics.band > 0.0, "scenario.metrics.band", "must be positive");
  require(s.metrics.dwell >= 0.0, "scenario.metrics.dwell", "must be nonnegative");
  require(s.metrics.pre_window > 0.0, "scenario.metrics.pre_window", "must be positive");
  validate_integrator(s.integrator, "scenario.integrator");

  const ExperimentConfig& e = cfg.experiment;
  require(e.basin.a0_points >= 2, "experiment.basin.a0_points", "must be at least 2");
  require(e.basin.g0_points >= 2, "experiment.basin.g0_points", "must be at least 2");
  require(e.basin.a0_min >= 0.0 && e.basin.a0_max > e.basin.a0_min, "experiment.basin.a0_max",
          "axis must be nonnegative and increasing");
  require(e.basin.g0_min >= 0.0 && e.basin.g0_max > e.basin.g0_min, "experiment.basin.g0_max",
          "axis must be nonnegative and increasing");
  require(e.basin.H0_fraction >= 0.0, "experiment.basin.H0_fraction", "must be nonnegative");
  require(e.basin.C0_fraction >= 0.0, "experiment.basin.C0_fraction", "must be nonnegative");
  require(e.thresholds.coexistence >= 0.0 && e.thresholds.coexistence <= 1.0, "experiment.thresholds.coexistence",
          "must lie in [0, 1]");
  require(e.thresholds.domination >= 0.0 && e.thresholds.domination <= 1.0, "experiment.thresholds.domination",
          "must lie in [0, 1]");
  require(e.sensitivity.samples >= 100, "experiment.sensitivity.samples", "must be at least 100");
  for (std::size_t i = 0; i < e.sensitivity.ranges.size(); ++i) {
    const ParameterRange& r = e.sensitivity.ranges[i];
    const std::string key = indexed("experiment.sensitivity.ranges", i);
    require(std::find(kReducedParameterNames.begin(), kReducedParameterNames.end(), r.name) !=
                kReducedParameterNames.end(),
            join(key, "name"), "unknown parameter '" + r.name + "'");
    require(std::isfinite(r.lo) && std::isfinite(r.hi) && r.hi > r.lo, key, "needs finite lo < hi");
  }
  require(std::find(kReducedParameterNames.begin(), kReducedParameterNames.end(), e.oat.parameter) !=
              kReducedParameterNames.end(),
          "experiment.oat.parameter", "unknown parameter '" + e.oat.parameter + "'");
  require(!e.oat.values.empty(), "experiment.oat.values", "must not be empty");
  for (double v : e.oat.values) require(std::isfinite(v), "experiment.oat.values", "must be finite");
  require(e.shock.magnitude > 0.0 && e.shock.magnitude <= 1.0, "experiment.shock.magnitude", "must lie in (0, 1]");
  require(e.shock.time > 0.0, "experiment.shock.time", "must be positive");
  require(!e.shock.presets.empty(), "experiment.shock.presets", "must not be empty");
  for (std::size_t i = 0; i < e.shock.presets.size(); ++i) {
    const auto names = preset_names();
    require(std::find(names.begin(), names.end(), e.shock.presets[i]) != names.end(),
            indexed("experiment.shock.presets", i), "unknown preset '" + e.shock.presets[i] + "'");
  }
  require(!e.shock.kinds.empty(), "experiment.shock.kinds", "must not be empty");
}

json to_json(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;

  const ModelConfig& m = cfg.model;
  json& jm = j["model"];
  jm["n_humans"] = m.n_humans;
  jm["n_ai"] = m.n_ai;
  jm["resources"] = m.resources;
  auto profiles = [](const std::vector<ProfileConfig>& ps) {
    json arr = json::array();
    for (const auto& p : ps) arr.push_back({{"demand", p.demand}, {"supply", p.supply}});
    return arr;
  };
  jm["human_profiles"] = profiles(m.human_profiles);
  jm["ai_profiles"] = profiles(m.ai_profiles);
  jm["contact"] = m.contact.empty() ? json(m.contact_level) : json(m.contact);
  jm["epsilon"] = m.epsilon;
  for (auto [name, layer] : {std::pair<const char*, const LayerConfig*>{"physical", &m.physical},
                             {"psychological", &m.psychological}, {"social", &m.social}})
    jm["layers"][name] = {{"topology", to_string(layer->topology)},
                          {"weight", layer->weight},
                          {"edge_probability", layer->edge_probability}};
  jm["weights"] = {{"alpha", m.weights.alpha}, {"beta", m.weights.beta}, {"gamma", m.weights.gamma},
                   {"delta", m.weights.delta}, {"lambda", m.weights.lambda}};
  for (auto [name, v] : {std::pair<const char*, double>{"alpha_P", m.alpha_P}, {"alpha_Psi", m.alpha_Psi},
                         {"alpha_S", m.alpha_S}, {"alpha_R", m.alpha_R}, {"tau_P", m.tau_P},
                         {"tau_Psi", m.tau_Psi}, {"tau_S", m.tau_S}, {"beta_P", m.beta_P},
                         {"beta_Psi", m.beta_Psi}, {"beta_S", m.beta_S}, {"beta_R", m.beta_R},
                         {"governance", m.governance}, {"reversibility", m.reversibility},
                         {"conflict", m.conflict}, {"development", m.development},
                         {"development_cost", m.development_cost}, {"ai_cooperation", m.ai_cooperation},
                         {"saturation", m.saturation}, {"support", m.support}, {"horizon", m.horizon}})
    jm[name] = v;
  jm["x0"] = m.x0;
  jm["integrator"] = integrator_json(m.integrator);

  const ScenarioConfig& s = cfg.scenario;
  json& js = j["scenario"];
  js["preset"] = s.preset;
  for (std::string_view name : kReducedParameterNames)
    js["parameters"][std::string(name)] = parameter_value(s.parameters, name);
  js["initial"] = {{"H", s.initial.H}, {"A", s.initial.A}, {"g", s.initial.g}, {"C", s.initial.C}};
  js["horizon"] = s.horizon;
  js["shocks"] = json::array();
  for (const Shock& sh : s.shocks)
    js["shocks"].push_back({{"time", sh.time}, {"kind", to_string(sh.kind)}, {"magnitude", sh.magnitude}});
  js["trust_mode"] = to_string(s.trust_mode);
  js["trust_suppression_duration"] = s.trust_suppression_duration;
  js["metrics"] = {{"C_ref", s.metrics.C_ref},
                   {"tail_fraction", s.metrics.tail_fraction},
                   {"band", s.metrics.band},
                   {"dwell", s.metrics.dwell},
                   {"pre_window", s.metrics.pre_window}};
  js["integrator"] = integrator_json(s.integrator);

  const ExperimentConfig& e = cfg.experiment;
  json& je = j["experiment"];
  je["basin"] = {{"a0_min", e.basin.a0_min},         {"a0_max", e.basin.a0_max},
                 {"g0_min", e.basin.g0_min},         {"g0_max", e.basin.g0_max},
                 {"a0_points", e.basin.a0_points},   {"g0_points", e.basin.g0_points},
                 {"H0_fraction", e.basin.H0_fraction}, {"C0_fraction", e.basin.C0_fraction}};
  je["thresholds"] = {{"coexistence", e.thresholds.coexistence}, {"domination", e.thresholds.domination}};
  je["sensitivity"]["samples"] = e.sensitivity.samples;
  je["sensitivity"]["ranges"] = json::array();
  for (const auto& r : e.sensitivity.ranges)
    je["sensitivity"]["ranges"].push_back({{"name", r.name}, {"lo", r.lo}, {"hi", r.hi}});
  je["oat"] = {{"parameter", e.oat.parameter},
               {"values", e.oat.values},
               {"use_scenario_shocks", e.oat.use_scenario_shocks}};
  json kinds = json::array();
  for (ShockKind k : e.shock.kinds) kinds.push_back(to_string(k));
  je["shock"] = {{"time", e.shock.time}, {"magnitude", e.shock.magnitude}, {"presets", e.shock.presets},
                 {"kinds", kinds}};
  je["threads"] = e.threads;

  json& jo = j["output"];
  if (cfg.output.directory) jo["directory"] = *cfg.output.directory;
  jo["format"] = to_string(cfg.output.format);
  return j;
}

void save_config(const RunConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << to_json(cfg).dump(2) << '\n';
  if (!out) throw Error("write failed for " + path.string());
}

CoexistenceModel build_model(const RunConfig& cfg) {
  const ModelConfig& m = cfg.model;
  const AgentPopulation pop = AgentPopulation::make(m.n_humans, m.n_ai);
  const int N = pop.agents(), d = pop.dim();

  std::vector<SupplyDemandProfile> humans, ais;
  for (const auto& p : m.human_profiles) humans.push_back(to_profile(p));
  for (const auto& p : m.ai_profiles) ais.push_back(to_profile(p));
  ContactNetwork contact{Mat::Constant(m.n_humans, m.n_ai, m.contact_level)};
  if (!m.contact.empty())
    for (int i = 0; i < m.n_humans; ++i)
      for (int j = 0; j < m.n_ai; ++j)
        contact.contact(i, j) = m.contact[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  MutualisticNetwork net = effective_weights(compatibility_matrix(humans, ais, m.epsilon), contact);
  net.W_A = Mat::Constant(m.n_ai, m.n_ai, m.ai_cooperation);
  net.W_A.diagonal().setZero();

  LayerOperators layers;
  const LayerConfig* cfgs[3] = {&m.physical, &m.psychological, &m.social};
  Mat* targets[3] = {&layers.L_P, &layers.L_Psi, &layers.L_S};
  for (std::size_t i = 0; i < 3; ++i)
    *targets[i] = build_layer_laplacian(make_adjacency(cfgs[i]->topology, N, cfgs[i]->weight,
                                                       cfgs[i]->edge_probability,
                                                       derive_seed(cfg.seed, "layers", i)));
  layers.G_R = m.governance * Mat::Identity(m.n_ai, m.n_ai);

  CoexistenceParameters p;
  p.weights = m.weights;
  p.alpha_P = m.alpha_P;
  p.alpha_Psi = m.alpha_Psi;
  p.alpha_S = m.alpha_S;
  p.alpha_R = m.alpha_R;
  p.tau_P = m.tau_P;
  p.tau_Psi = m.tau_Psi;
  p.tau_S = m.tau_S;
  p.beta_P = m.beta_P;
  p.beta_Psi = m.beta_Psi;
  p.beta_S = m.beta_S;
  p.beta_R = m.beta_R;
  p.G_rev = m.reversibility * Mat::Identity(d, d);
  p.K = m.conflict * Mat::Identity(d, d);
  p.u_dev = Vec::Constant(m.n_ai, m.development);
  p.D_r = m.development_cost * Mat::Identity(m.n_ai, m.n_ai);
  p.nu = Vec::Constant(d, m.saturation);
  p.b = Vec::Constant(d, m.support);
  return assemble_model(pop, p, layers, net);
}

}  // namespace coexist
