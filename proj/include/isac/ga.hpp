#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "isac/correlation.hpp"
#include "isac/geometry.hpp"
#include "isac/random.hpp"

namespace isac {

/// Real-coded deployment: [x1, y1, theta1, ..., xJ, yJ, thetaJ].
struct Chromosome {
  std::vector<double> genes;

  std::size_t node_count() const { return genes.size() / 3; }
  friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

enum class GeneKind { clamp, wrap };

struct GeneBounds {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<GeneKind> kind;

  /// Position genes: the bounding square of the region disk (clamp).
  /// Orientation genes: [0, 2pi) (wrap).
  static GeneBounds for_scenario(const Scenario& scenario);
};

struct GaParams {
  int population = 100;
  double crossover_probability = 0.8;
  double mutation_probability = 0.2;
  double eta_c = 15.0;
  double eta_m = 20.0;
  int elite_count = 4;
  int tournament_size = 3;
  int max_generations = 500;

  void validate() const;
};

struct GaResult {
  Chromosome best;
  double best_fitness = 0.0;
  std::vector<double> trace;  // trace[0] initial population, trace[g + 1] after generation g
  long evaluations = 0;
};

/// Optional hooks for inspecting a run. Called on the driving thread.
struct GaObserver {
  /// Parents and children of every crossover event, before projection.
  std::function<void(const Chromosome& parent_a, const Chromosome& parent_b, const Chromosome& child_1,
                     const Chromosome& child_2, bool recombined)>
      on_crossover;
  /// Population and fitness after evaluation; generation 0 is the initial one.
  std::function<void(int generation, std::span<const Chromosome> population,
                     std::span<const double> fitness)>
      on_generation;
};

Chromosome encode(const Deployment& deployment);
Deployment decode(const Chromosome& chromosome);

/// Clamps position genes to the bounding square, scales them radially into
/// the region disk, and wraps orientation genes.
void project_to_region(Chromosome& chromosome, const Scenario& scenario);

bool is_feasible(const Chromosome& chromosome, const Scenario& scenario);

/// Min-max objective with the grid and distance-weight table built once.
/// Thread-safe for concurrent calls.
class FitnessEvaluator {
 public:
  explicit FitnessEvaluator(const Scenario& scenario);

  double operator()(const Chromosome& chromosome) const;
  CorrelationReport report(const Deployment& deployment) const;
  GridCodebook codebook(const Deployment& deployment) const;

  const Scenario& scenario() const { return scenario_; }
  const CoverageGrid& grid() const { return grid_; }
  const Eigen::MatrixXd& weights() const { return weights_; }

 private:
  Scenario scenario_;
  CoverageGrid grid_;
  Eigen::MatrixXd weights_;
};

double fitness(const Chromosome& chromosome, const Scenario& scenario);

/// Winner among already-sampled indices: minimum fitness, lowest index on ties.
std::size_t tournament_winner(std::span<const double> fitness, std::span<const std::size_t> sampled);

/// Samples k indices uniformly with replacement and returns the winner.
std::size_t tournament_pick(std::span<const double> fitness, int k, Rng& rng);

const Chromosome& tournament_select(std::span<const Chromosome> population, std::span<const double> fitness,
                                    int k, Rng& rng);

/// SBX spread factor for a uniform draw u in [0, 1).
double sbx_beta(double u, double eta_c);

/// Gene-wise SBX with one spread factor per gene; no projection.
std::pair<Chromosome, Chromosome> sbx_recombine(const Chromosome& a, const Chromosome& b,
                                                std::span<const double> betas);

/// One crossover gate draw per pair; on success one u per gene. Children are
/// returned before projection; parents are copied when the gate fails.
std::pair<Chromosome, Chromosome> sbx_children(const Chromosome& a, const Chromosome& b, double eta_c,
                                               double p_c, Rng& rng, bool* recombined = nullptr);

/// sbx_children followed by project_to_region on both children.
std::pair<Chromosome, Chromosome> sbx_crossover(const Chromosome& a, const Chromosome& b, double eta_c,
                                                double p_c, const Scenario& scenario, Rng& rng);

/// Polynomial-mutation step for gene z on [lower, upper] and draw u.
double polynomial_delta(double z, double lower, double upper, double eta_m, double u);

/// Per gene: one gate draw, then one u when mutating. Clamp-kind genes end
/// in [L, U], wrap-kind genes in [L, U) by wrapping.
Chromosome polynomial_mutation(const Chromosome& chromosome, double eta_m, double p_m,
                               const GeneBounds& bounds, Rng& rng);

/// Generational GA with tournament selection, SBX, polynomial mutation and
/// N_e elites. Random draws happen on the calling thread in a fixed order
/// (initialization, then per generation: tournaments, crossovers, mutations);
/// offspring fitness is evaluated in parallel.
GaResult run_ga(const Scenario& scenario, const GaParams& params, Rng& rng,
                const GaObserver* observer = nullptr);

}  // namespace isac
