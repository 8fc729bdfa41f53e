#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "oracles.hpp"

#include "isac/error.hpp"
#include "isac/ga.hpp"

using namespace isac;
using doctest::Approx;

namespace {

Scenario small_scenario() {
  Scenario s;
  s.region_radius = 3.0;
  return s;
}

GaParams small_params() {
  GaParams p;
  p.population = 20;
  p.elite_count = 2;
  p.max_generations = 25;
  return p;
}

}  // namespace

TEST_CASE("encode/decode and projection") {
  Scenario s;
  const Deployment d = midpoint_baseline(s);
  CHECK(decode(encode(d)) == d);
  CHECK_THROWS_AS(decode(Chromosome{{1.0, 2.0}}), InvalidArgument);

  Chromosome far{{100.0, -100.0, -1.0, 0.1, 0.2, 7.0, -3.0, 9.0, 2.0}};
  project_to_region(far, s);
  CHECK(is_feasible(far, s));
  CHECK(far.genes[0] > 0.0);
  CHECK(far.genes[1] < 0.0);
  CHECK(far.genes[0] == Approx(-far.genes[1]));
  CHECK(far.genes[3] == 0.1);  // already inside: untouched
  CHECK(far.genes[4] == 0.2);
  CHECK(far.genes[5] == Approx(7.0 - kTwoPi));
  CHECK(far.genes[2] == Approx(kTwoPi - 1.0));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-30, 30);
  for (int k = 0; k < 2000; ++k) {
    Chromosome c{{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)}};
    project_to_region(c, s);
    CHECK(is_feasible(c, s));
  }
}

TEST_CASE("fitness matches the exhaustive pair scan") {
  const Scenario s = small_scenario();
  Rng rng(2);
  for (int k = 0; k < 5; ++k) {
    const Chromosome c = encode(random_deployment(s, rng));
    const double f = fitness(c, s);
    CHECK(f == oracle::pair_scan(build_codebook(decode(c), s)).max_value);
    CHECK(f == fitness(c, s));
  }
  Scenario full;
  const Chromosome stacked = encode(Deployment{{{0.0, 0.5, 0.0}, {0.0, 0.5, 0.0}, {0.0, 0.5, 0.0}}});
  const FitnessEvaluator eval(full);
  CHECK(eval(stacked) > eval(encode(midpoint_baseline(full))));
}

TEST_CASE("tournament selection") {
  const std::vector<double> f{5.0, 1.0, 3.0};
  const std::vector<std::size_t> forced{0, 2};
  CHECK(tournament_winner(f, forced) == 2);
  const std::vector<double> tied{2.0, 1.0, 1.0};
  const std::vector<std::size_t> both{2, 1};
  CHECK(tournament_winner(tied, both) == 1);

  SUBCASE("k = 1 picks members uniformly") {
    Rng rng(3);
    std::vector<double> flat(4, 0.0);
    std::map<std::size_t, int> counts;
    for (int k = 0; k < 40000; ++k) ++counts[tournament_pick(flat, 1, rng)];
    for (std::size_t i = 0; i < 4; ++i) CHECK(counts[i] == doctest::Approx(10000).epsilon(0.05));
  }
  SUBCASE("winner is never worse than any sampled candidate") {
    Rng rng(4);
    std::vector<double> fit(30);
    for (std::size_t i = 0; i < fit.size(); ++i) fit[i] = std::sin(static_cast<double>(i) * 1.7);
    std::uniform_int_distribution<std::size_t> pick(0, fit.size() - 1);
    for (int k = 0; k < 500; ++k) {
      std::vector<std::size_t> sample(5);
      for (auto& x : sample) x = pick(rng);
      const auto w = tournament_winner(fit, sample);
      for (auto x : sample) CHECK(fit[w] <= fit[x]);
    }
  }
  Rng rng(5);
  CHECK_THROWS_AS(tournament_pick(f, 0, rng), InvalidArgument);
  std::vector<Chromosome> pop{Chromosome{{1}}, Chromosome{{2}}, Chromosome{{3}}};
  CHECK(tournament_select(pop, f, 200, rng).genes[0] == 2.0);
}

TEST_CASE("SBX crossover") {
  SUBCASE("u = 1/2 reproduces the parents") {
    CHECK(sbx_beta(0.5, 15.0) == 1.0);
    const Chromosome a{{1.5, -2.0, 0.3}}, b{{-0.7, 4.0, 6.0}};
    const std::vector<double> betas(3, sbx_beta(0.5, 15.0));
    const auto [c1, c2] = sbx_recombine(a, b, betas);
    CHECK(c1 == a);
    CHECK(c2 == b);
  }
  SUBCASE("u = 0.2, eta_c = 15 on parents (0, 1)") {
    const double beta = sbx_beta(0.2, 15.0);
    CHECK(beta == Approx(0.9443407908363889).epsilon(1e-15));
    const std::vector<double> betas{beta};
    const auto [c1, c2] = sbx_recombine(Chromosome{{0.0}}, Chromosome{{1.0}}, betas);
    CHECK(c1.genes[0] == Approx(0.027829604581805556).epsilon(1e-13));
    CHECK(c2.genes[0] == Approx(0.9721703954181944).epsilon(1e-15));
  }
  SUBCASE("upper branch of beta") {
    CHECK(sbx_beta(0.9, 2.0) == Approx(std::pow(1.0 / 0.2, 1.0 / 3.0)));
    CHECK(sbx_beta(0.0, 2.0) == 0.0);
  }
  SUBCASE("gene sums are conserved for any draw") {
    Rng rng(6);
    std::uniform_real_distribution<double> g(-10, 10);
    for (int k = 0; k < 500; ++k) {
      Chromosome a{{g(rng), g(rng), g(rng)}}, b{{g(rng), g(rng), g(rng)}};
      const auto [c1, c2] = sbx_children(a, b, 15.0, 1.0, rng);
      for (int q = 0; q < 3; ++q) CHECK(c1.genes[q] + c2.genes[q] == Approx(a.genes[q] + b.genes[q]).epsilon(1e-12));
    }
  }
  SUBCASE("p_c = 0 copies the parents") {
    Rng rng(7);
    const Chromosome a{{1, 2, 3}}, b{{4, 5, 6}};
    bool crossed = true;
    const auto [c1, c2] = sbx_children(a, b, 15.0, 0.0, rng, &crossed);
    CHECK_FALSE(crossed);
    CHECK(c1 == a);
    CHECK(c2 == b);
  }
  SUBCASE("projected crossover output is feasible") {
    const Scenario s;
    Rng rng(8);
    for (int k = 0; k < 300; ++k) {
      const Chromosome a = encode(random_deployment(s, rng)), b = encode(random_deployment(s, rng));
      const auto [c1, c2] = sbx_crossover(a, b, 2.0, 1.0, s, rng);
      CHECK(is_feasible(c1, s));
      CHECK(is_feasible(c2, s));
    }
  }
  CHECK_THROWS_AS(sbx_recombine(Chromosome{{1, 2}}, Chromosome{{1}}, std::vector<double>{1, 1}), InvalidArgument);
}

TEST_CASE("polynomial mutation") {
  CHECK(polynomial_delta(0.3, 0.0, 1.0, 20.0, 0.5) == 0.0);
  CHECK(polynomial_delta(0.0, 0.0, 1.0, 20.0, 0.5) == 0.0);
  SUBCASE("at the lower bound with u > 1/2 the gene moves inward") {
    for (double u : {0.51, 0.7, 0.99}) {
      const double d = polynomial_delta(0.0, 0.0, 1.0, 20.0, u);
      CHECK(d >= 0.0);
      CHECK(d == Approx(1.0 - std::pow(2.0 * (1.0 - u), 1.0 / 21.0)).epsilon(1e-14));
    }
  }
  SUBCASE("z = 0.5 on [0, 1], eta_m = 20, u = 0.9") {
    CHECK(polynomial_delta(0.5, 0.0, 1.0, 20.0, 0.9) == Approx(0.07377658984223268).epsilon(1e-14));
  }
  SUBCASE("lower branch and span scaling") {
    const double u = 0.1;
    const double d1 = 0.25;
    const double expect = std::pow(2 * u + (1 - 2 * u) * std::pow(1 - d1, 21.0), 1.0 / 21.0) - 1.0;
    CHECK(polynomial_delta(1.0, 0.0, 4.0, 20.0, u) == Approx(expect).epsilon(1e-14));
    CHECK(expect < 0.0);
  }
  const Scenario s;
  const GeneBounds bounds = GeneBounds::for_scenario(s);
  Rng rng(9);
  const Chromosome c = encode(random_deployment(s, rng));
  CHECK(polynomial_mutation(c, 20.0, 0.0, bounds, rng) == c);
  for (int k = 0; k < 1000; ++k) {
    const Chromosome m = polynomial_mutation(encode(random_deployment(s, rng)), 1.0, 1.0, bounds, rng);
    for (std::size_t q = 0; q < m.genes.size(); ++q) {
      CHECK(m.genes[q] >= bounds.lower[q]);
      if (bounds.kind[q] == GeneKind::wrap) {
        CHECK(m.genes[q] < bounds.upper[q]);
      } else {
        CHECK(m.genes[q] <= bounds.upper[q]);
      }
    }
  }
  CHECK_THROWS_AS(polynomial_mutation(Chromosome{{1.0}}, 20.0, 1.0, bounds, rng), InvalidArgument);
}

TEST_CASE("GaParams validation") {
  GaParams p;
  CHECK_NOTHROW(p.validate());
  p.elite_count = 5;  // 100 - 5 is odd
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = GaParams{};
  p.elite_count = 100;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = GaParams{};
  p.crossover_probability = 1.5;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = GaParams{};
  p.tournament_size = 0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("run_ga") {
  const Scenario s = small_scenario();
  const GaParams p = small_params();

  int crossovers = 0;
  bool sums_ok = true;
  bool feasible = true;
  bool elitism = true;
  double prev_best = INFINITY;
  GaObserver obs;
  obs.on_crossover = [&](const Chromosome& a, const Chromosome& b, const Chromosome& c1, const Chromosome& c2, bool) {
    ++crossovers;
    for (std::size_t q = 0; q < a.genes.size(); ++q) {
      const double scale = std::max(1.0, std::abs(a.genes[q]) + std::abs(b.genes[q]));
      sums_ok = sums_ok && std::abs((c1.genes[q] + c2.genes[q]) - (a.genes[q] + b.genes[q])) <= 1e-12 * scale;
    }
  };
  obs.on_generation = [&](int, std::span<const Chromosome> pop, std::span<const double> fit) {
    for (const auto& c : pop) feasible = feasible && is_feasible(c, s);
    const double best = *std::min_element(fit.begin(), fit.end());
    elitism = elitism && best <= prev_best;
    prev_best = best;
  };

  Rng rng(10);
  const GaResult r = run_ga(s, p, rng, &obs);
  CHECK(r.trace.size() == 26);
  for (std::size_t g = 1; g < r.trace.size(); ++g) CHECK(r.trace[g] <= r.trace[g - 1]);
  CHECK(r.best_fitness == r.trace.back());
  CHECK(r.best_fitness == fitness(r.best, s));
  CHECK(r.evaluations == 20 + 25 * 18);
  CHECK(crossovers == 25 * 9);
  CHECK(sums_ok);
  CHECK(feasible);
  CHECK(elitism);
  CHECK(r.trace.back() < r.trace.front());

  Rng again(10);
  const GaResult r2 = run_ga(s, p, again);
  CHECK(r2.best == r.best);
  CHECK(r2.trace == r.trace);

  GaParams none = p;
  none.max_generations = 0;
  Rng z(10);
  const GaResult r0 = run_ga(s, none, z);
  CHECK(r0.trace.size() == 1);
  CHECK(r0.evaluations == 20);
}
