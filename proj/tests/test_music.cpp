#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"

#include "isac/error.hpp"
#include "isac/music.hpp"

using namespace isac;
using doctest::Approx;

namespace {

Scenario small_scenario() {
  Scenario s;
  s.region_radius = 3.0;
  return s;
}

CovarianceEstimate population(const SteeringVector& a, double power, double noise) {
  const auto m = a.size();
  return {power * a.entries * a.entries.adjoint() + noise * Eigen::MatrixXcd::Identity(m, m)};
}

}  // namespace

TEST_CASE("noise_subspace") {
  Scenario s;
  Rng rng(1);
  const Deployment dep = random_deployment(s, rng);
  const SteeringVector a = steering_vector(antenna_layout(dep, s), {1.0, 2.0}, s.wavelength());

  SUBCASE("population covariance: basis spans the complement of a") {
    const auto ns = noise_subspace(population(a, 1.0, 1.0));
    CHECK(ns.basis.rows() == 12);
    CHECK(ns.basis.cols() == 11);
    CHECK((ns.basis.adjoint() * ns.basis - Eigen::MatrixXcd::Identity(11, 11)).norm() < 1e-10);
    CHECK((ns.basis.adjoint() * a.entries).norm() < 1e-10);
  }
  SUBCASE("isotropic covariance: only shape and orthonormality") {
    const auto ns = noise_subspace({Eigen::MatrixXcd::Identity(12, 12)});
    CHECK(ns.basis.cols() == 11);
    CHECK((ns.basis.adjoint() * ns.basis - Eigen::MatrixXcd::Identity(11, 11)).norm() < 1e-10);
  }
  SUBCASE("30 dB sample covariance aligns with the true steering vector") {
    Rng r(2);
    const auto cov = sample_covariance(generate_snapshots(a, snr_to_powers(30.0), 200, r));
    CHECK((noise_subspace(cov).basis.adjoint() * a.entries).squaredNorm() < 0.05);
  }
  SUBCASE("eigendecomposition recomposes the covariance") {
    Rng r(3);
    const auto cov = sample_covariance(generate_snapshots(a, {1, 1}, 50, r));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cov.matrix);
    const Eigen::MatrixXcd back = es.eigenvectors() * es.eigenvalues().asDiagonal() * es.eigenvectors().adjoint();
    CHECK((back - cov.matrix).norm() / cov.matrix.norm() < 1e-8);
  }
  SUBCASE("errors") {
    CovarianceEstimate bad{Eigen::MatrixXcd::Identity(4, 4)};
    bad.matrix(1, 1) = NAN;
    CHECK_THROWS_AS(noise_subspace(bad), NumericError);
    CHECK_THROWS_AS(noise_subspace({Eigen::MatrixXcd::Identity(4, 4)}, 4), InvalidArgument);
    CHECK_THROWS_AS(noise_subspace({Eigen::MatrixXcd::Identity(4, 4)}, 0), InvalidArgument);
  }
}

TEST_CASE("music_scores and localize") {
  const Scenario s = small_scenario();
  Rng rng(4);
  const Deployment dep = random_deployment(s, rng);
  const GridCodebook cb = build_codebook(dep, s);

  SUBCASE("population covariance: true point is the unique minimum") {
    for (std::size_t truth : {std::size_t{0}, cb.size() / 2, cb.size() - 1}) {
      const auto scores = music_scores(noise_subspace(population(cb.column(truth), 1.0, 1.0)), cb);
      CHECK(scores[truth] < 1e-10);
      for (std::size_t i = 0; i < scores.size(); ++i) {
        if (i != truth) CHECK(scores[i] > scores[truth]);
        CHECK(scores[i] >= 0.0);
        CHECK(scores[i] <= 1.0 + 1e-10);
      }
    }
  }
  SUBCASE("isotropic covariance gives scores near (NJ-1)/NJ") {
    const auto scores = music_scores(noise_subspace({Eigen::MatrixXcd::Identity(12, 12)}), cb);
    double mean = 0.0;
    for (double v : scores) mean += v / static_cast<double>(scores.size());
    CHECK(mean == Approx(11.0 / 12.0).epsilon(0.1));
  }
  SUBCASE("noiseless batch localizes exactly") {
    Rng r(5);
    for (std::size_t truth = 0; truth < cb.size(); truth += 3) {
      const auto cov = sample_covariance(generate_snapshots(cb.column(truth), {1.0, 0.0}, 2, r));
      CHECK(localize(cov, cb) == cb.grid.points[truth]);
    }
  }
  SUBCASE("mirror-ambiguous deployment lands in the tied pair") {
    Scenario sc = small_scenario();
    const Deployment line{{{0.0, 0.5, 0.0}, {0.0, 0.5, 0.0}, {0.0, 0.5, 0.0}}};
    const GridCodebook amb = build_codebook(line, sc);
    std::size_t a = 0, b = 0;
    for (std::size_t i = 0; i < amb.size(); ++i) {
      if (amb.grid.points[i] == Point2{1, 2}) a = i;
      if (amb.grid.points[i] == Point2{1, -1}) b = i;
    }
    const auto idx = localize_index(population(amb.column(a), 1.0, 0.1), amb);
    CHECK((idx == a || idx == b));
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(music_scores({Eigen::MatrixXcd::Identity(5, 4)}, cb), InvalidArgument);
  }
}

TEST_CASE("rmse_map") {
  const Scenario s = small_scenario();
  Rng rng(6);
  const Deployment dep = random_deployment(s, rng);
  const GridCodebook cb = build_codebook(dep, s);

  SUBCASE("noiseless is exact") {
    const auto st = rmse_map(cb, PowerLevels{1.0, 0.0}, 5, 3, 99);
    CHECK(st.max_rmse == 0.0);
    CHECK(st.per_point_rmse.size() == cb.size());
    CHECK(st.trials_per_point == 3);
  }
  SUBCASE("reproducible, bounded, and max is the grid maximum") {
    Scenario low = s;
    low.snr_db = -15.0;
    low.snapshot_count = 20;
    const auto a = rmse_map(cb, low, 4, 7);
    const auto b = rmse_map(cb, low, 4, 7);
    CHECK(a.per_point_rmse == b.per_point_rmse);
    CHECK(a.max_rmse == *std::max_element(a.per_point_rmse.begin(), a.per_point_rmse.end()));
    for (double e : a.per_point_rmse) {
      CHECK(e >= 0.0);
      CHECK(e <= 2.0 * low.region_radius + 1e-12);
    }
    CHECK(a.max_rmse > 0.0);
    const auto other = rmse_map(cb, low, 4, 8);
    CHECK(other.per_point_rmse != a.per_point_rmse);
  }
  SUBCASE("deployment overload matches the codebook overload") {
    Scenario low = s;
    low.snr_db = -10.0;
    low.snapshot_count = 10;
    CHECK(rmse_map(dep, low, 2, 3).per_point_rmse == rmse_map(cb, low, 2, 3).per_point_rmse);
  }
  SUBCASE("30 dB, T = 200: a well-spread J = 3 deployment localizes almost always") {
    Scenario hi;
    hi.snr_db = 30.0;
    const GridCodebook full = build_codebook(midpoint_baseline(hi), hi);
    const auto powers = snr_to_powers(hi.snr_db);
    int hits = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
      Rng r = derive_stream(2024, {static_cast<std::uint64_t>(t)});
      const std::size_t truth = static_cast<std::size_t>(t * 37) % full.size();
      const auto cov = sample_covariance(generate_snapshots(full.column(truth), powers, 200, r));
      hits += localize_index(cov, full) == truth;
    }
    CHECK(hits >= 990);
  }
  CHECK_THROWS_AS(rmse_map(cb, s, 0, 1), InvalidArgument);
}
