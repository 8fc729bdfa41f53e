#include "isac/ga.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <random>
#include <string>

#include "isac/error.hpp"

namespace isac {

GeneBounds GeneBounds::for_scenario(const Scenario& s) {
  GeneBounds b;
  const auto n = static_cast<std::size_t>(s.node_count);
  b.lower.reserve(3 * n);
  b.upper.reserve(3 * n);
  b.kind.reserve(3 * n);
  for (std::size_t j = 0; j < n; ++j) {
    b.lower.insert(b.lower.end(), {s.region_center.x - s.region_radius, s.region_center.y - s.region_radius, 0.0});
    b.upper.insert(b.upper.end(), {s.region_center.x + s.region_radius, s.region_center.y + s.region_radius, kTwoPi});
    b.kind.insert(b.kind.end(), {GeneKind::clamp, GeneKind::clamp, GeneKind::wrap});
  }
  return b;
}

void GaParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidArgument(std::string("ga: ") + what);
  };
  require(population >= 2, "population must be >= 2");
  require(crossover_probability >= 0.0 && crossover_probability <= 1.0, "crossover_probability must lie in [0, 1]");
  require(mutation_probability >= 0.0 && mutation_probability <= 1.0, "mutation_probability must lie in [0, 1]");
  require(eta_c > 0.0 && std::isfinite(eta_c), "eta_c must be > 0");
  require(eta_m > 0.0 && std::isfinite(eta_m), "eta_m must be > 0");
  require(elite_count >= 0 && elite_count < population, "elite_count must satisfy 0 <= N_e < P");
  require((population - elite_count) % 2 == 0, "population - elite_count must be even");
  require(tournament_size >= 1, "tournament_size must be >= 1");
  require(max_generations >= 0, "max_generations must be >= 0");
}

Chromosome encode(const Deployment& deployment) {
  Chromosome c;
  c.genes.reserve(3 * deployment.poses.size());
  for (const auto& p : deployment.poses) c.genes.insert(c.genes.end(), {p.x, p.y, p.theta});
  return c;
}

Deployment decode(const Chromosome& chromosome) {
  if (chromosome.genes.size() % 3 != 0) throw InvalidArgument("decode: gene count is not a multiple of 3");
  Deployment d;
  d.poses.reserve(chromosome.node_count());
  for (std::size_t j = 0; j < chromosome.node_count(); ++j) {
    d.poses.push_back({chromosome.genes[3 * j], chromosome.genes[3 * j + 1], chromosome.genes[3 * j + 2]});
  }
  return d;
}

void project_to_region(Chromosome& c, const Scenario& s) {
  const double r = s.region_radius;
  const double r2 = r * r;
  for (std::size_t j = 0; j < c.node_count(); ++j) {
    double& x = c.genes[3 * j];
    double& y = c.genes[3 * j + 1];
    double dx = std::clamp(x - s.region_center.x, -r, r);
    double dy = std::clamp(y - s.region_center.y, -r, r);
    if (dx * dx + dy * dy > r2) {
      double scale = r / std::hypot(dx, dy);
      double px = dx * scale, py = dy * scale;
      while (px * px + py * py > r2) {
        scale = std::nextafter(scale, 0.0);
        px = dx * scale;
        py = dy * scale;
      }
      dx = px;
      dy = py;
    }
    x = s.region_center.x + dx;
    y = s.region_center.y + dy;
    c.genes[3 * j + 2] = wrap_angle(c.genes[3 * j + 2]);
  }
}

bool is_feasible(const Chromosome& c, const Scenario& s) {
  if (c.genes.size() != 3 * static_cast<std::size_t>(s.node_count)) return false;
  const double r2 = s.region_radius * s.region_radius;
  for (std::size_t j = 0; j < c.node_count(); ++j) {
    const double dx = c.genes[3 * j] - s.region_center.x;
    const double dy = c.genes[3 * j + 1] - s.region_center.y;
    const double th = c.genes[3 * j + 2];
    if (!(dx * dx + dy * dy <= r2) || !(th >= 0.0 && th < kTwoPi)) return false;
  }
  return true;
}

FitnessEvaluator::FitnessEvaluator(const Scenario& scenario)
    : scenario_(scenario), grid_(coverage_grid(scenario)), weights_(distance_weight_table(grid_, scenario.alpha)) {
  scenario_.validate();
}

GridCodebook FitnessEvaluator::codebook(const Deployment& deployment) const {
  return build_codebook(deployment, scenario_, grid_, weights_);
}

CorrelationReport FitnessEvaluator::report(const Deployment& deployment) const {
  return max_weighted_correlation(codebook(deployment));
}

double FitnessEvaluator::operator()(const Chromosome& chromosome) const {
  return report(decode(chromosome)).max_value;
}

double fitness(const Chromosome& chromosome, const Scenario& scenario) {
  return FitnessEvaluator(scenario)(chromosome);
}

std::size_t tournament_winner(std::span<const double> fitness, std::span<const std::size_t> sampled) {
  if (sampled.empty()) throw InvalidArgument("tournament: empty sample");
  std::size_t best = sampled.front();
  for (std::size_t idx : sampled) {
    if (fitness[idx] < fitness[best] || (fitness[idx] == fitness[best] && idx < best)) best = idx;
  }
  return best;
}

std::size_t tournament_pick(std::span<const double> fitness, int k, Rng& rng) {
  if (k < 1) throw InvalidArgument("tournament: k must be >= 1");
  if (fitness.empty()) throw InvalidArgument("tournament: empty population");
  std::uniform_int_distribution<std::size_t> pick(0, fitness.size() - 1);
  std::vector<std::size_t> sampled(static_cast<std::size_t>(k));
  for (auto& s : sampled) s = pick(rng);
  return tournament_winner(fitness, sampled);
}

const Chromosome& tournament_select(std::span<const Chromosome> population, std::span<const double> fitness,
                                    int k, Rng& rng) {
  if (population.size() != fitness.size()) throw InvalidArgument("tournament: population/fitness size mismatch");
  return population[tournament_pick(fitness, k, rng)];
}

double sbx_beta(double u, double eta_c) {
  const double e = 1.0 / (eta_c + 1.0);
  return u <= 0.5 ? std::pow(2.0 * u, e) : std::pow(1.0 / (2.0 - 2.0 * u), e);
}

std::pair<Chromosome, Chromosome> sbx_recombine(const Chromosome& a, const Chromosome& b,
                                                std::span<const double> betas) {
  if (a.genes.size() != b.genes.size() || betas.size() != a.genes.size()) {
    throw InvalidArgument("sbx: gene length mismatch");
  }
  std::pair<Chromosome, Chromosome> out{a, b};
  for (std::size_t q = 0; q < a.genes.size(); ++q) {
    const double ca = a.genes[q], cb = b.genes[q], beta = betas[q];
    out.first.genes[q] = 0.5 * ((1.0 + beta) * ca + (1.0 - beta) * cb);
    out.second.genes[q] = 0.5 * ((1.0 - beta) * ca + (1.0 + beta) * cb);
  }
  return out;
}

std::pair<Chromosome, Chromosome> sbx_children(const Chromosome& a, const Chromosome& b, double eta_c,
                                               double p_c, Rng& rng, bool* recombined) {
  if (a.genes.size() != b.genes.size()) throw InvalidArgument("sbx: gene length mismatch");
  const bool cross = uniform01(rng) < p_c;
  if (recombined) *recombined = cross;
  if (!cross) return {a, b};
  std::vector<double> betas(a.genes.size());
  for (auto& beta : betas) beta = sbx_beta(uniform01(rng), eta_c);
  return sbx_recombine(a, b, betas);
}

std::pair<Chromosome, Chromosome> sbx_crossover(const Chromosome& a, const Chromosome& b, double eta_c,
                                                double p_c, const Scenario& scenario, Rng& rng) {
  auto children = sbx_children(a, b, eta_c, p_c, rng);
  project_to_region(children.first, scenario);
  project_to_region(children.second, scenario);
  return children;
}

namespace {

double wrap_into(double z, double lo, double hi) {
  const double span = hi - lo;
  double r = std::fmod(z - lo, span);
  if (r < 0.0) r += span;
  if (r >= span) r = 0.0;
  return lo + r < hi ? lo + r : lo;
}

}  // namespace

double polynomial_delta(double z, double lower, double upper, double eta_m, double u) {
  const double span = upper - lower;
  const double d1 = (z - lower) / span;
  const double d2 = (upper - z) / span;
  const double m = 1.0 / (eta_m + 1.0);
  if (u <= 0.5) {
    return std::pow(2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta_m + 1.0), m) - 1.0;
  }
  return 1.0 - std::pow(2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, eta_m + 1.0), m);
}

Chromosome polynomial_mutation(const Chromosome& chromosome, double eta_m, double p_m, const GeneBounds& bounds,
                               Rng& rng) {
  const std::size_t n = chromosome.genes.size();
  if (bounds.lower.size() != n || bounds.upper.size() != n || bounds.kind.size() != n) {
    throw InvalidArgument("polynomial_mutation: bounds do not match chromosome");
  }
  Chromosome out = chromosome;
  for (std::size_t q = 0; q < n; ++q) {
    if (!(uniform01(rng) < p_m)) continue;
    const double lo = bounds.lower[q], hi = bounds.upper[q];
    double z = out.genes[q];
    z += polynomial_delta(z, lo, hi, eta_m, uniform01(rng)) * (hi - lo);
    if (bounds.kind[q] == GeneKind::clamp) {
      z = std::clamp(z, lo, hi);
    } else {
      z = wrap_into(z, lo, hi);
    }
    out.genes[q] = z;
  }
  return out;
}

namespace {

Chromosome random_chromosome(const Scenario& s, Rng& rng) { return encode(random_deployment(s, rng)); }

std::vector<double> evaluate_all(const FitnessEvaluator& eval, std::span<const Chromosome> pop) {
  std::vector<double> f(pop.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(pop.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t m = 0; m < n; ++m) {
    try {
      f[static_cast<std::size_t>(m)] = eval(pop[static_cast<std::size_t>(m)]);
    } catch (...) {
#pragma omp critical(isac_ga_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return f;
}

std::size_t argmin(std::span<const double> f) {
  return static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
}

}  // namespace

GaResult run_ga(const Scenario& scenario, const GaParams& params, Rng& rng, const GaObserver* observer) {
  scenario.validate();
  params.validate();
  const FitnessEvaluator eval(scenario);
  const GeneBounds bounds = GeneBounds::for_scenario(scenario);
  const auto pop_size = static_cast<std::size_t>(params.population);
  const auto elites = static_cast<std::size_t>(params.elite_count);
  const std::size_t offspring = pop_size - elites;

  std::vector<Chromosome> pop;
  pop.reserve(pop_size);
  for (std::size_t m = 0; m < pop_size; ++m) pop.push_back(random_chromosome(scenario, rng));
  std::vector<double> fit = evaluate_all(eval, pop);

  GaResult result;
  result.evaluations = static_cast<long>(pop_size);
  std::size_t b = argmin(fit);
  result.best = pop[b];
  result.best_fitness = fit[b];
  result.trace.reserve(static_cast<std::size_t>(params.max_generations) + 1);
  result.trace.push_back(result.best_fitness);
  if (observer && observer->on_generation) observer->on_generation(0, pop, fit);

  std::vector<std::size_t> order(pop_size);
  for (int g = 0; g < params.max_generations; ++g) {
    // Parent pool.
    std::vector<std::size_t> parents(offspring);
    for (auto& p : parents) p = tournament_pick(fit, params.tournament_size, rng);

    // Crossover on consecutive pairs, then mutation; projection after each.
    std::vector<Chromosome> children;
    children.reserve(offspring);
    for (std::size_t k = 0; k < offspring; k += 2) {
      const Chromosome& pa = pop[parents[k]];
      const Chromosome& pb = pop[parents[k + 1]];
      bool crossed = false;
      auto [c1, c2] = sbx_children(pa, pb, params.eta_c, params.crossover_probability, rng, &crossed);
      if (observer && observer->on_crossover) observer->on_crossover(pa, pb, c1, c2, crossed);
      project_to_region(c1, scenario);
      project_to_region(c2, scenario);
      children.push_back(std::move(c1));
      children.push_back(std::move(c2));
    }
    for (auto& c : children) {
      c = polynomial_mutation(c, params.eta_m, params.mutation_probability, bounds, rng);
      project_to_region(c, scenario);
    }

    // Elites keep their cached fitness.
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return fit[l] < fit[r]; });
    std::vector<Chromosome> next;
    std::vector<double> next_fit;
    next.reserve(pop_size);
    next_fit.reserve(pop_size);
    for (std::size_t e = 0; e < elites; ++e) {
      next.push_back(pop[order[e]]);
      next_fit.push_back(fit[order[e]]);
    }
    const std::vector<double> child_fit = evaluate_all(eval, children);
    result.evaluations += static_cast<long>(children.size());
    for (std::size_t k = 0; k < offspring; ++k) {
      next.push_back(std::move(children[k]));
      next_fit.push_back(child_fit[k]);
    }
    pop = std::move(next);
    fit = std::move(next_fit);

    b = argmin(fit);
    if (fit[b] < result.best_fitness) {
      result.best = pop[b];
      result.best_fitness = fit[b];
    }
    result.trace.push_back(result.best_fitness);
    if (observer && observer->on_generation) observer->on_generation(g + 1, pop, fit);
  }
  return result;
}

}  // namespace isac
