#include "isac/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "isac/error.hpp"
#include "isac/random.hpp"

namespace isac {

using nlohmann::json;

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string CsvTable::render() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

bool ResultBundle::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const InvariantCheck& c) { return c.passed; });
}

const CsvTable* ResultBundle::table(const std::string& name) const {
  for (const auto& t : tables) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

json checks_json(const std::vector<InvariantCheck>& checks) {
  json arr = json::array();
  for (const auto& c : checks) arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return arr;
}

void check(ResultBundle& b, std::string name, bool passed, std::string detail = {}) {
  b.checks.push_back({std::move(name), passed, std::move(detail)});
}

json point_json(const Point2& p) { return json::array({p.x, p.y}); }

json report_json(const CorrelationReport& r, const CoverageGrid& grid) {
  return {{"max_weighted_correlation", r.max_value},
          {"arg_pair", {r.i, r.j}},
          {"arg_points", {point_json(grid.points[r.i]), point_json(grid.points[r.j])}}};
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void finalize(ResultBundle& b, const ExperimentConfig& cfg, const Stopwatch& clock) {
  b.summary["kind"] = std::string(to_string(cfg.experiment.kind));
  b.summary["seed"] = cfg.experiment.seed;
  b.summary["wall_time_s"] = clock.seconds();
  b.summary["checks"] = checks_json(b.checks);
  b.summary["status"] = b.ok() ? "ok" : "failed";
}

bool has_midpoint(const Scenario& s) { return s.node_count == 3; }

Deployment optimized_for(const ExperimentConfig& cfg, const Scenario& scenario, const CommandInputs& in,
                         json& summary) {
  if (in.optimized) {
    const auto bad = infeasible_nodes(*in.optimized, scenario);
    if (!bad.empty()) throw ConfigError("optimized deployment is infeasible for this scenario");
    summary["optimized_source"] = "file";
    return *in.optimized;
  }
  const GaResult ga = optimize_deployment(scenario, cfg.ga, cfg.experiment.seed);
  summary["optimized_source"] = "ga";
  summary["ga_evaluations"] = ga.evaluations;
  return decode(ga.best);
}

struct EnsembleStats {
  double best = 0.0, worst = 0.0, mean = 0.0;
};

EnsembleStats stats_of(const std::vector<double>& v) {
  EnsembleStats s;
  s.best = *std::min_element(v.begin(), v.end());
  s.worst = *std::max_element(v.begin(), v.end());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  return s;
}

}  // namespace

void write_bundle(const ResultBundle& bundle, const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_text(out_dir / "config-echo.json", to_json(config).dump(2) + "\n");
  write_text(out_dir / "summary.json", bundle.summary.dump(2) + "\n");
  for (const auto& t : bundle.tables) write_text(out_dir / (t.name + ".csv"), t.render());
  for (const auto& [name, doc] : bundle.documents) write_text(out_dir / (name + ".json"), doc.dump(2) + "\n");
}

std::uint64_t rmse_seed(std::uint64_t master) { return derive_seed(master, {stream_tag::kRmse}); }

std::vector<Deployment> random_ensemble(const Scenario& scenario, int count, std::uint64_t seed) {
  std::vector<Deployment> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) {
    Rng rng = derive_stream(seed, {stream_tag::kRandomDeployment, static_cast<std::uint64_t>(scenario.node_count),
                                   static_cast<std::uint64_t>(k)});
    out.push_back(random_deployment(scenario, rng));
  }
  return out;
}

GaResult optimize_deployment(const Scenario& scenario, const GaParams& params, std::uint64_t seed,
                             const GaObserver* observer) {
  Rng rng = derive_stream(seed, {stream_tag::kGa, static_cast<std::uint64_t>(scenario.node_count)});
  return run_ga(scenario, params, rng, observer);
}

DeploymentScore score_deployment(const FitnessEvaluator& evaluator, std::string id, const Deployment& deployment,
                                 int trials, std::uint64_t seed, bool with_rmse) {
  DeploymentScore s;
  s.id = std::move(id);
  s.deployment = deployment;
  const GridCodebook cb = evaluator.codebook(deployment);
  s.correlation = max_weighted_correlation(cb);
  if (with_rmse) s.localization = rmse_map(cb, evaluator.scenario(), trials, rmse_seed(seed));
  return s;
}

ResultBundle cmd_optimize(const ExperimentConfig& cfg) {
  Stopwatch clock;
  ResultBundle b;
  const GaResult ga = optimize_deployment(cfg.scenario, cfg.ga, cfg.experiment.seed);
  const Deployment best = decode(ga.best);
  const FitnessEvaluator eval(cfg.scenario);
  const CorrelationReport rep = eval.report(best);

  CsvTable trace{"convergence", {"generation", "best_fitness"}, {}};
  for (std::size_t g = 0; g < ga.trace.size(); ++g) trace.rows.push_back({std::to_string(g), format_double(ga.trace[g])});
  b.tables.push_back(std::move(trace));
  b.documents.emplace_back("deployment", to_json(best));

  bool monotone = true;
  for (std::size_t g = 1; g < ga.trace.size(); ++g) monotone = monotone && ga.trace[g] <= ga.trace[g - 1];
  check(b, "trace_non_increasing", monotone);
  check(b, "trace_length", ga.trace.size() == static_cast<std::size_t>(cfg.ga.max_generations) + 1,
        std::to_string(ga.trace.size()) + " entries");
  check(b, "best_feasible", is_feasible(ga.best, cfg.scenario));
  check(b, "best_fitness_reproducible", rep.max_value == ga.best_fitness);

  b.summary["best_fitness"] = ga.best_fitness;
  b.summary["evaluations"] = ga.evaluations;
  b.summary["correlation"] = report_json(rep, eval.grid());
  b.summary["deployment"] = to_json(best);
  finalize(b, cfg, clock);
  return b;
}

ResultBundle cmd_montecarlo(const ExperimentConfig& cfg, const CommandInputs& in) {
  Stopwatch clock;
  ResultBundle b;
  const auto& ex = cfg.experiment;
  const FitnessEvaluator eval(cfg.scenario);
  const bool rmse = ex.compute_rmse;

  std::vector<DeploymentScore> rows;
  rows.push_back(score_deployment(eval, "optimized", optimized_for(cfg, cfg.scenario, in, b.summary),
                                  ex.trials_per_point, ex.seed, rmse));
  if (has_midpoint(cfg.scenario)) {
    rows.push_back(score_deployment(eval, "midpoint", midpoint_baseline(cfg.scenario), ex.trials_per_point, ex.seed, rmse));
  }
  const auto randoms = random_ensemble(cfg.scenario, ex.random_deployment_count, ex.seed);
  for (std::size_t k = 0; k < randoms.size(); ++k) {
    rows.push_back(score_deployment(eval, "random-" + std::to_string(k), randoms[k], ex.trials_per_point, ex.seed, rmse));
  }

  CsvTable scatter{"scatter", {"deployment_id", "max_rho", "max_rmse"}, {}};
  std::vector<double> rho, err;
  for (const auto& r : rows) {
    scatter.rows.push_back({r.id, format_double(r.correlation.max_value),
                            r.localization ? format_double(r.localization->max_rmse) : std::string("")});
    if (r.id.starts_with("random-")) {
      rho.push_back(r.correlation.max_value);
      if (r.localization) err.push_back(r.localization->max_rmse);
    }
  }
  b.tables.push_back(std::move(scatter));

  const double opt_rho = rows.front().correlation.max_value;
  const double min_rho = std::min_element(rows.begin(), rows.end(), [](const auto& l, const auto& r) {
                           return l.correlation.max_value < r.correlation.max_value;
                         })->correlation.max_value;
  check(b, "optimized_has_min_max_rho", opt_rho <= min_rho, "optimized " + format_double(opt_rho));
  check(b, "midpoint_row_once",
        !has_midpoint(cfg.scenario) ||
            std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.id == "midpoint"; }) == 1);

  b.summary["optimized"] = {{"max_rho", opt_rho}, {"deployment", to_json(rows.front().deployment)}};
  if (rows.front().localization) b.summary["optimized"]["max_rmse"] = rows.front().localization->max_rmse;
  if (has_midpoint(cfg.scenario)) {
    b.summary["midpoint"] = {{"max_rho", rows[1].correlation.max_value}};
    if (rows[1].localization) b.summary["midpoint"]["max_rmse"] = rows[1].localization->max_rmse;
  }
  if (rmse && rho.size() >= 2) {
    try {
      b.summary["gamma"] = pearson(rho, err);
    } catch (const UndefinedCorrelation&) {
      b.summary["gamma"] = nullptr;
    }
    const double opt_rmse = rows.front().localization->max_rmse;
    const auto beaten = std::count_if(err.begin(), err.end(), [&](double e) { return opt_rmse < e; });
    b.summary["optimized_rmse_beats_fraction"] = static_cast<double>(beaten) / static_cast<double>(err.size());
  }
  finalize(b, cfg, clock);
  return b;
}

ResultBundle cmd_alpha_sweep(const ExperimentConfig& cfg, const CommandInputs&) {
  Stopwatch clock;
  ResultBundle b;
  const auto& ex = cfg.experiment;
  if (!ex.compute_rmse) throw ConfigError("experiment.compute_rmse: alpha-sweep requires MUSIC RMSE");
  const CoverageGrid grid = coverage_grid(cfg.scenario);
  const auto randoms = random_ensemble(cfg.scenario, ex.random_deployment_count, ex.seed);

  std::vector<GridCodebook> books;
  std::vector<double> err;
  books.reserve(randoms.size());
  for (const auto& dep : randoms) {
    GridCodebook cb;
    cb.grid = grid;
    cb.steering = steering_matrix(dep, cfg.scenario, grid);
    err.push_back(rmse_map(cb, cfg.scenario, ex.trials_per_point, rmse_seed(ex.seed)).max_rmse);
    books.push_back(std::move(cb));
  }

  CsvTable curve{"alpha_gamma", {"alpha", "gamma"}, {}};
  CsvTable points{"alpha_points", {"alpha", "deployment_id", "max_rho", "max_rmse"}, {}};
  json gammas = json::array();
  double peak_alpha = ex.alpha_values.front();
  double peak_gamma = -2.0;
  for (double alpha : ex.alpha_values) {
    const Eigen::MatrixXd weights = distance_weight_table(grid, alpha);
    std::vector<double> rho;
    for (std::size_t k = 0; k < books.size(); ++k) {
      books[k].distance_weights = weights;
      books[k].alpha = alpha;
      rho.push_back(max_weighted_correlation(books[k]).max_value);
      points.rows.push_back({format_double(alpha), "random-" + std::to_string(k), format_double(rho.back()),
                             format_double(err[k])});
    }
    const double gamma = pearson(rho, err);
    curve.rows.push_back({format_double(alpha), format_double(gamma)});
    gammas.push_back({{"alpha", alpha}, {"gamma", gamma}});
    if (gamma > peak_gamma) {
      peak_gamma = gamma;
      peak_alpha = alpha;
    }
  }
  b.tables.push_back(std::move(curve));
  b.tables.push_back(std::move(points));
  b.summary["gamma"] = gammas;
  b.summary["peak_alpha"] = peak_alpha;
  b.summary["peak_gamma"] = peak_gamma;
  finalize(b, cfg, clock);
  return b;
}

ResultBundle cmd_snr_sweep(const ExperimentConfig& cfg, const CommandInputs& in) {
  Stopwatch clock;
  ResultBundle b;
  const auto& ex = cfg.experiment;
  const CoverageGrid grid = coverage_grid(cfg.scenario);
  const std::uint64_t seed = rmse_seed(ex.seed);

  std::vector<std::pair<std::string, GridCodebook>> named;
  auto add = [&](std::string id, const Deployment& dep) {
    GridCodebook cb;
    cb.grid = grid;
    cb.steering = steering_matrix(dep, cfg.scenario, grid);
    named.emplace_back(std::move(id), std::move(cb));
  };
  add("optimized", optimized_for(cfg, cfg.scenario, in, b.summary));
  if (has_midpoint(cfg.scenario)) add("midpoint", midpoint_baseline(cfg.scenario));
  const auto randoms = random_ensemble(cfg.scenario, ex.random_deployment_count, ex.seed);
  for (std::size_t k = 0; k < randoms.size(); ++k) add("random-" + std::to_string(k), randoms[k]);

  CsvTable table{"snr_rmse", {"snr_db", "strategy", "max_rmse"}, {}};
  json per_snr = json::array();
  for (double snr : ex.snr_values) {
    Scenario s = cfg.scenario;
    s.snr_db = snr;
    std::vector<double> rnd;
    json entry{{"snr_db", snr}};
    for (const auto& [id, cb] : named) {
      const double m = rmse_map(cb, s, ex.trials_per_point, seed).max_rmse;
      if (id.starts_with("random-")) {
        rnd.push_back(m);
      } else {
        table.rows.push_back({format_double(snr), id, format_double(m)});
        entry[id] = m;
      }
    }
    const EnsembleStats st = stats_of(rnd);
    table.rows.push_back({format_double(snr), "random-best", format_double(st.best)});
    table.rows.push_back({format_double(snr), "random-mean", format_double(st.mean)});
    table.rows.push_back({format_double(snr), "random-worst", format_double(st.worst)});
    entry["random_mean"] = st.mean;
    if (entry.contains("midpoint")) entry["gap_midpoint_minus_optimized"] = entry["midpoint"].get<double>() - entry["optimized"].get<double>();
    per_snr.push_back(entry);
  }
  b.tables.push_back(std::move(table));
  b.summary["per_snr"] = per_snr;
  finalize(b, cfg, clock);
  return b;
}

ResultBundle cmd_node_sweep(const ExperimentConfig& cfg, const CommandInputs&) {
  Stopwatch clock;
  ResultBundle b;
  const auto& ex = cfg.experiment;
  CsvTable table{"node_sweep", {"J", "stat", "metric", "value"}, {}};
  json per_j = json::array();
  for (int nodes : ex.node_counts) {
    Scenario s = cfg.scenario;
    s.node_count = nodes;
    const FitnessEvaluator eval(s);
    const std::string j = std::to_string(nodes);
    const GaResult ga = optimize_deployment(s, cfg.ga, ex.seed);
    const DeploymentScore opt = score_deployment(eval, "optimized", decode(ga.best), ex.trials_per_point, ex.seed,
                                                 ex.compute_rmse);
    std::vector<double> rho, err;
    for (const auto& dep : random_ensemble(s, ex.random_deployment_count, ex.seed)) {
      const DeploymentScore sc = score_deployment(eval, "random", dep, ex.trials_per_point, ex.seed, ex.compute_rmse);
      rho.push_back(sc.correlation.max_value);
      if (sc.localization) err.push_back(sc.localization->max_rmse);
    }
    json entry{{"J", nodes}};
    auto emit = [&](const char* metric, const std::vector<double>& v, double optimized) {
      const EnsembleStats st = stats_of(v);
      table.rows.push_back({j, "best", metric, format_double(st.best)});
      table.rows.push_back({j, "worst", metric, format_double(st.worst)});
      table.rows.push_back({j, "mean", metric, format_double(st.mean)});
      table.rows.push_back({j, "optimized", metric, format_double(optimized)});
      entry[metric] = {{"best", st.best}, {"worst", st.worst}, {"mean", st.mean}, {"optimized", optimized}};
      return st;
    };
    const EnsembleStats rho_st = emit("max_rho", rho, opt.correlation.max_value);
    check(b, "optimized_max_rho_le_ensemble_best_J" + j, opt.correlation.max_value <= rho_st.best,
          format_double(opt.correlation.max_value) + " vs " + format_double(rho_st.best));
    if (ex.compute_rmse) emit("max_rmse", err, opt.localization->max_rmse);
    per_j.push_back(entry);
  }
  b.tables.push_back(std::move(table));
  b.summary["per_node_count"] = per_j;
  finalize(b, cfg, clock);
  return b;
}

ResultBundle cmd_evaluate(const ExperimentConfig& cfg, const CommandInputs& in) {
  Stopwatch clock;
  ResultBundle b;
  if (!in.deployment) throw ConfigError("evaluate: a deployment file is required");
  const Deployment& dep = *in.deployment;
  const auto bad = infeasible_nodes(dep, cfg.scenario);
  if (!bad.empty()) {
    std::string list;
    for (int k : bad) list += (list.empty() ? "" : ", ") + (k < 0 ? std::string("node count") : "node " + std::to_string(k));
    throw ConfigError("infeasible deployment: " + list);
  }
  const FitnessEvaluator eval(cfg.scenario);
  const auto ex = cfg.experiment;
  const DeploymentScore sc = score_deployment(eval, "evaluated", dep, ex.trials_per_point, ex.seed, ex.compute_rmse);
  b.summary["best_fitness"] = sc.correlation.max_value;
  b.summary["correlation"] = report_json(sc.correlation, eval.grid());
  b.summary["deployment"] = to_json(dep);
  if (sc.localization) {
    const auto& loc = *sc.localization;
    CsvTable t{"per_point_rmse", {"x", "y", "rmse"}, {}};
    for (std::size_t i = 0; i < eval.grid().size(); ++i) {
      t.rows.push_back({format_double(eval.grid().points[i].x), format_double(eval.grid().points[i].y),
                        format_double(loc.per_point_rmse[i])});
    }
    b.tables.push_back(std::move(t));
    b.summary["max_rmse"] = loc.max_rmse;
    b.summary["trials_per_point"] = loc.trials_per_point;
    check(b, "max_rmse_is_grid_maximum",
          loc.max_rmse == *std::max_element(loc.per_point_rmse.begin(), loc.per_point_rmse.end()));
  }
  CsvTable corr{"correlation", {"max_rho", "i", "j"}, {}};
  corr.rows.push_back({format_double(sc.correlation.max_value), std::to_string(sc.correlation.i), std::to_string(sc.correlation.j)});
  b.tables.push_back(std::move(corr));
  finalize(b, cfg, clock);
  return b;
}

ResultBundle run_command(const ExperimentConfig& cfg, const CommandInputs& in) {
  switch (cfg.experiment.kind) {
    case ExperimentKind::optimize: return cmd_optimize(cfg);
    case ExperimentKind::montecarlo: return cmd_montecarlo(cfg, in);
    case ExperimentKind::alpha_sweep: return cmd_alpha_sweep(cfg, in);
    case ExperimentKind::snr_sweep: return cmd_snr_sweep(cfg, in);
    case ExperimentKind::node_sweep: return cmd_node_sweep(cfg, in);
    case ExperimentKind::evaluate: return cmd_evaluate(cfg, in);
  }
  throw ConfigError("unknown experiment kind");
}

}  // namespace isac
