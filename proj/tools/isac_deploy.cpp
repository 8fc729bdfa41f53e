// isac-deploy: node placement optimization and MUSIC Monte Carlo harness.
//
//   isac-deploy <command> [--config cfg.json] [--out dir] [--seed n] [--threads n] [--deployment dep.json]
//
// Exit codes: 0 all run invariants held, 1 an invariant failed, 2 usage or
// input error. Failures are reported on stderr as a single JSON object.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "isac/config.hpp"
#include "isac/error.hpp"
#include "isac/experiment.hpp"
#include "isac/parallel.hpp"

namespace {

int report_error(const std::string& message) {
  std::cerr << nlohmann::json{{"status", "error"}, {"error", message}}.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust cooperative antenna-node deployment: GA optimizer and MUSIC Monte Carlo harness"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string deployment_path;

  const std::pair<const char*, const char*> commands[] = {
      {"optimize", "Run the GA and write the convergence trace and best deployment"},
      {"montecarlo", "Score optimized, midpoint and random deployments"},
      {"alpha-sweep", "Pearson correlation between max RMSE and max weighted correlation per exponent"},
      {"snr-sweep", "Max RMSE of optimized, midpoint and random deployments across SNR"},
      {"node-sweep", "Random-ensemble and GA statistics across node counts"},
      {"evaluate", "Score a deployment read from --deployment"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON experiment configuration (defaults apply when omitted)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory (default: results/<command>)");
    sub->add_option("--seed", seed, "Master seed; overrides experiment.seed");
    sub->add_option("--threads", threads, "Worker threads (default: $ISAC_DEPLOY_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    auto* dep = sub->add_option("--deployment", deployment_path,
                                std::string(name) == "evaluate"
                                    ? "Deployment JSON to evaluate"
                                    : "Use this deployment as the optimized one instead of running the GA");
    dep->check(CLI::ExistingFile);
    if (std::string(name) == "evaluate") dep->required();
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    if (threads) {
      isac::set_threads(*threads);
    } else if (auto env = isac::threads_from_env()) {
      isac::set_threads(*env);
    }

    isac::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = isac::load_config(config_path);
    cfg.experiment.kind = isac::parse_kind(command);
    if (seed) cfg.experiment.seed = *seed;
    cfg.validate();

    isac::CommandInputs inputs;
    if (!deployment_path.empty()) {
      auto dep = isac::load_deployment(deployment_path);
      if (cfg.experiment.kind == isac::ExperimentKind::evaluate) {
        inputs.deployment = std::move(dep);
      } else {
        inputs.optimized = std::move(dep);
      }
    }

    const isac::ResultBundle bundle = isac::run_command(cfg, inputs);
    const std::string dir = out_dir.empty() ? "results/" + command : out_dir;
    isac::write_bundle(bundle, cfg, dir);

    if (!bundle.ok()) {
      nlohmann::json failed = nlohmann::json::array();
      for (const auto& c : bundle.checks) {
        if (!c.passed) failed.push_back({{"name", c.name}, {"detail", c.detail}});
      }
      std::cerr << nlohmann::json{{"status", "failed"}, {"failed_checks", failed}, {"out", dir}}.dump() << "\n";
      return 1;
    }
    std::cout << bundle.summary.dump(2) << "\n";
    return 0;
  } catch (const std::exception& err) {
    return report_error(err.what());
  }
}
