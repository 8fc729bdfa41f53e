#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "isac/config.hpp"
#include "isac/correlation.hpp"
#include "isac/ga.hpp"
#include "isac/music.hpp"

namespace isac {

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double value);

struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render() const;
};

struct InvariantCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Everything one command produces. Only the summary carries wall time, so
/// CSV bytes are reproducible for a given config and seed.
struct ResultBundle {
  nlohmann::json summary = nlohmann::json::object();
  std::vector<CsvTable> tables;
  std::vector<std::pair<std::string, nlohmann::json>> documents;  // extra JSON files
  std::vector<InvariantCheck> checks;

  bool ok() const;
  const CsvTable* table(const std::string& name) const;
};

/// Writes config-echo.json, summary.json, every table as <name>.csv and
/// every document as <name>.json into out_dir (created if needed).
void write_bundle(const ResultBundle& bundle, const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Scores of one deployment under one scenario.
struct DeploymentScore {
  std::string id;
  Deployment deployment;
  CorrelationReport correlation;
  std::optional<LocalizationStats> localization;
};

/// Seed shared by every MUSIC evaluation of a run (common random numbers).
std::uint64_t rmse_seed(std::uint64_t master);

/// Deployment k of the random ensemble for J nodes draws from
/// derive_stream(seed, {random-deployment tag, J, k}).
std::vector<Deployment> random_ensemble(const Scenario& scenario, int count, std::uint64_t seed);

/// GA run whose stream is derive_stream(seed, {ga tag, J}).
GaResult optimize_deployment(const Scenario& scenario, const GaParams& params, std::uint64_t seed,
                             const GaObserver* observer = nullptr);

DeploymentScore score_deployment(const FitnessEvaluator& evaluator, std::string id, const Deployment& deployment,
                                 int trials, std::uint64_t seed, bool with_rmse);

/// Supplying `optimized` skips the GA run inside montecarlo, alpha-sweep and
/// snr-sweep; evaluate requires `deployment`.
struct CommandInputs {
  std::optional<Deployment> optimized;
  std::optional<Deployment> deployment;
};

ResultBundle cmd_optimize(const ExperimentConfig& config);
ResultBundle cmd_montecarlo(const ExperimentConfig& config, const CommandInputs& inputs = {});
ResultBundle cmd_alpha_sweep(const ExperimentConfig& config, const CommandInputs& inputs = {});
ResultBundle cmd_snr_sweep(const ExperimentConfig& config, const CommandInputs& inputs = {});
ResultBundle cmd_node_sweep(const ExperimentConfig& config, const CommandInputs& inputs = {});
ResultBundle cmd_evaluate(const ExperimentConfig& config, const CommandInputs& inputs);

ResultBundle run_command(const ExperimentConfig& config, const CommandInputs& inputs = {});

}  // namespace isac
