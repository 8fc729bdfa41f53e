#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "isac/ga.hpp"
#include "isac/geometry.hpp"

namespace isac {

enum class ExperimentKind { optimize, montecarlo, alpha_sweep, snr_sweep, node_sweep, evaluate };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_kind(std::string_view text);

struct ExperimentSettings {
  ExperimentKind kind = ExperimentKind::optimize;
  std::uint64_t seed = 1;
  int random_deployment_count = 200;
  int trials_per_point = 50;
  bool compute_rmse = true;
  std::vector<double> alpha_values{0.01, 0.02, 0.05, 0.1, 0.2};
  std::vector<double> snr_values{-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
  std::vector<int> node_counts{2, 3, 4, 5};
};

struct ExperimentConfig {
  Scenario scenario;
  GaParams ga;
  ExperimentSettings experiment;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Missing keys keep their defaults; unknown keys and type mismatches are
/// ConfigErrors naming the dotted field path.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

/// {"poses": [{"x": .., "y": .., "theta": ..}, ...]}
Deployment parse_deployment(const nlohmann::json& doc);
Deployment load_deployment(const std::filesystem::path& path);
nlohmann::json to_json(const Deployment& deployment);

}  // namespace isac
