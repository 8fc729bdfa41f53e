#include "isac/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "isac/error.hpp"

namespace isac {

using nlohmann::json;

namespace {

constexpr std::pair<ExperimentKind, std::string_view> kKinds[] = {
    {ExperimentKind::optimize, "optimize"},       {ExperimentKind::montecarlo, "montecarlo"},
    {ExperimentKind::alpha_sweep, "alpha-sweep"}, {ExperimentKind::snr_sweep, "snr-sweep"},
    {ExperimentKind::node_sweep, "node-sweep"},   {ExperimentKind::evaluate, "evaluate"},
};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

// Reads the members of one JSON object, rejecting anything not consumed.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.contains(key)) fail(child(key), "unknown key");
    }
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) fail(child(key), "expected a number");
      out = v->get<double>();
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) fail(child(key), "expected an integer");
      out = v->get<int>();
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) fail(child(key), "expected true or false");
      out = v->get<bool>();
    }
  }

  template <typename T>
  void list(const std::string& key, std::vector<T>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) fail(child(key), "expected an array");
      out.clear();
      for (std::size_t k = 0; k < v->size(); ++k) {
        const json& e = (*v)[k];
        const bool ok = std::is_integral_v<T> ? e.is_number_integer() : e.is_number();
        if (!ok) fail(child(key) + "[" + std::to_string(k) + "]", "expected a number");
        out.push_back(e.get<T>());
      }
    }
  }

  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_scenario(const json& obj, Scenario& s) {
  ObjectReader r(obj, "scenario");
  r.number("carrier_frequency", s.carrier_frequency);
  r.number("element_spacing", s.element_spacing);
  r.integer("antennas_per_node", s.antennas_per_node);
  r.integer("node_count", s.node_count);
  r.number("region_radius", s.region_radius);
  if (const json* c = r.find("region_center")) {
    if (!c->is_array() || c->size() != 2 || !(*c)[0].is_number() || !(*c)[1].is_number()) {
      fail("scenario.region_center", "expected [x, y]");
    }
    s.region_center = {(*c)[0].get<double>(), (*c)[1].get<double>()};
  }
  r.number("grid_resolution", s.grid_resolution);
  r.number("snr_db", s.snr_db);
  r.integer("snapshot_count", s.snapshot_count);
  r.number("alpha", s.alpha);
  r.finish();
}

void read_ga(const json& obj, GaParams& g) {
  ObjectReader r(obj, "ga");
  r.integer("population", g.population);
  r.number("crossover_probability", g.crossover_probability);
  r.number("mutation_probability", g.mutation_probability);
  r.number("eta_c", g.eta_c);
  r.number("eta_m", g.eta_m);
  r.integer("elite_count", g.elite_count);
  r.integer("tournament_size", g.tournament_size);
  r.integer("max_generations", g.max_generations);
  r.finish();
}

void read_experiment(const json& obj, ExperimentSettings& e) {
  ObjectReader r(obj, "experiment");
  if (const json* k = r.find("kind")) {
    if (!k->is_string()) fail("experiment.kind", "expected a string");
    try {
      e.kind = parse_kind(k->get<std::string>());
    } catch (const ConfigError& err) {
      fail("experiment.kind", err.what());
    }
  }
  if (const json* s = r.find("seed")) {
    if (!s->is_number_unsigned()) fail("experiment.seed", "expected a non-negative 64-bit integer");
    e.seed = s->get<std::uint64_t>();
  }
  r.integer("random_deployment_count", e.random_deployment_count);
  r.integer("trials_per_point", e.trials_per_point);
  r.boolean("compute_rmse", e.compute_rmse);
  r.list("alpha_values", e.alpha_values);
  r.list("snr_values", e.snr_values);
  r.list("node_counts", e.node_counts);
  r.finish();
}

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& err) {
    throw ConfigError(path.string() + ": " + err.what());
  }
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKinds) {
    if (k == kind) return name;
  }
  return "unknown";
}

ExperimentKind parse_kind(std::string_view text) {
  for (const auto& [k, name] : kKinds) {
    if (name == text) return k;
  }
  throw ConfigError("unknown experiment kind '" + std::string(text) + "'");
}

void ExperimentConfig::validate() const {
  try {
    scenario.validate();
    ga.validate();
  } catch (const InvalidArgument& err) {
    throw ConfigError(err.what());
  }
  const auto& e = experiment;
  if (e.random_deployment_count < 1) fail("experiment.random_deployment_count", "must be >= 1");
  if (e.trials_per_point < 1) fail("experiment.trials_per_point", "must be >= 1");
  auto non_empty = [&](bool empty, const char* field) {
    if (empty) fail(field, "must be non-empty for this experiment kind");
  };
  if (e.kind == ExperimentKind::alpha_sweep) non_empty(e.alpha_values.empty(), "experiment.alpha_values");
  if (e.kind == ExperimentKind::snr_sweep) non_empty(e.snr_values.empty(), "experiment.snr_values");
  if (e.kind == ExperimentKind::node_sweep) non_empty(e.node_counts.empty(), "experiment.node_counts");
  for (double a : e.alpha_values) {
    if (!(a >= 0.0)) fail("experiment.alpha_values", "entries must be >= 0");
  }
  for (int j : e.node_counts) {
    if (j < 1) fail("experiment.node_counts", "entries must be >= 1");
  }
}

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig cfg;
  ObjectReader root(doc, "");
  if (const json* s = root.find("scenario")) read_scenario(*s, cfg.scenario);
  if (const json* g = root.find("ga")) read_ga(*g, cfg.ga);
  if (const json* e = root.find("experiment")) read_experiment(*e, cfg.experiment);
  root.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  try {
    return parse_config(parse_file(path));
  } catch (const ConfigError& err) {
    const std::string msg = err.what();
    if (msg.rfind(path.string(), 0) == 0) throw;
    throw ConfigError(path.string() + ": " + msg);
  }
}

json to_json(const ExperimentConfig& c) {
  const auto& s = c.scenario;
  const auto& g = c.ga;
  const auto& e = c.experiment;
  return json{
      {"scenario",
       {{"carrier_frequency", s.carrier_frequency},
        {"element_spacing", s.element_spacing},
        {"antennas_per_node", s.antennas_per_node},
        {"node_count", s.node_count},
        {"region_radius", s.region_radius},
        {"region_center", {s.region_center.x, s.region_center.y}},
        {"grid_resolution", s.grid_resolution},
        {"snr_db", s.snr_db},
        {"snapshot_count", s.snapshot_count},
        {"alpha", s.alpha}}},
      {"ga",
       {{"population", g.population},
        {"crossover_probability", g.crossover_probability},
        {"mutation_probability", g.mutation_probability},
        {"eta_c", g.eta_c},
        {"eta_m", g.eta_m},
        {"elite_count", g.elite_count},
        {"tournament_size", g.tournament_size},
        {"max_generations", g.max_generations}}},
      {"experiment",
       {{"kind", std::string(to_string(e.kind))},
        {"seed", e.seed},
        {"random_deployment_count", e.random_deployment_count},
        {"trials_per_point", e.trials_per_point},
        {"compute_rmse", e.compute_rmse},
        {"alpha_values", e.alpha_values},
        {"snr_values", e.snr_values},
        {"node_counts", e.node_counts}}},
  };
}

Deployment parse_deployment(const json& doc) {
  Deployment dep;
  ObjectReader root(doc, "");
  const json* poses = root.find("poses");
  if (poses == nullptr || !poses->is_array()) fail("poses", "expected an array of poses");
  for (std::size_t j = 0; j < poses->size(); ++j) {
    const std::string path = "poses[" + std::to_string(j) + "]";
    ObjectReader r((*poses)[j], path);
    NodePose p;
    for (auto [key, field] : {std::pair{"x", &p.x}, std::pair{"y", &p.y}, std::pair{"theta", &p.theta}}) {
      const json* v = r.find(key);
      if (v == nullptr) fail(path + "." + key, "missing");
      if (!v->is_number()) fail(path + "." + key, "expected a number");
      *field = v->get<double>();
    }
    r.finish();
    dep.poses.push_back(p);
  }
  root.finish();
  return dep;
}

Deployment load_deployment(const std::filesystem::path& path) {
  try {
    return parse_deployment(parse_file(path));
  } catch (const ConfigError& err) {
    const std::string msg = err.what();
    if (msg.rfind(path.string(), 0) == 0) throw;
    throw ConfigError(path.string() + ": " + msg);
  }
}

json to_json(const Deployment& d) {
  json poses = json::array();
  for (const auto& p : d.poses) poses.push_back({{"x", p.x}, {"y", p.y}, {"theta", p.theta}});
  return json{{"poses", poses}};
}

}  // namespace isac
