#include "isac/music.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "isac/error.hpp"
#include "isac/random.hpp"

namespace isac {

NoiseSubspace noise_subspace(const CovarianceEstimate& cov, int num_sources) {
  const auto m = cov.matrix.rows();
  if (cov.matrix.cols() != m || m < 2) throw InvalidArgument("noise_subspace: covariance must be square, size >= 2");
  if (num_sources < 1 || num_sources >= m) throw InvalidArgument("noise_subspace: need 1 <= num_sources < size");
  if (!cov.matrix.allFinite()) throw NumericError("noise_subspace: covariance has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(cov.matrix);
  if (solver.info() != Eigen::Success) throw NumericError("noise_subspace: eigensolver did not converge");
  return {solver.eigenvectors().leftCols(m - num_sources)};
}

std::vector<double> music_scores(const NoiseSubspace& subspace, const GridCodebook& codebook) {
  if (subspace.basis.rows() != codebook.steering.rows()) {
    throw InvalidArgument("music_scores: subspace and codebook dimensions differ");
  }
  const Eigen::MatrixXcd proj = subspace.basis.adjoint() * codebook.steering;
  const Eigen::VectorXd power = proj.colwise().squaredNorm().transpose();
  return {power.data(), power.data() + power.size()};
}

std::size_t localize_index(const CovarianceEstimate& cov, const GridCodebook& codebook) {
  const auto scores = music_scores(noise_subspace(cov, 1), codebook);
  if (scores.empty()) throw InvalidArgument("localize: empty grid");
  // min_element returns the first minimum.
  return static_cast<std::size_t>(std::min_element(scores.begin(), scores.end()) - scores.begin());
}

Point2 localize(const CovarianceEstimate& cov, const GridCodebook& codebook) {
  return codebook.grid.points[localize_index(cov, codebook)];
}

namespace {

double point_rmse(const GridCodebook& cb, const PowerLevels& powers, int snapshots, int trials,
                  std::uint64_t seed, std::size_t i) {
  const SteeringVector a = cb.column(i);
  const Point2 truth = cb.grid.points[i];
  double sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = derive_stream(seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(t)});
    const auto cov = sample_covariance(generate_snapshots(a, powers, snapshots, rng));
    const Point2 est = localize(cov, cb);
    const double dx = est.x - truth.x;
    const double dy = est.y - truth.y;
    sq += dx * dx + dy * dy;
  }
  return std::sqrt(sq / trials);
}

void check_inputs(const GridCodebook& cb, int snapshots, int trials) {
  if (trials < 1) throw InvalidArgument("rmse_map: trials must be >= 1");
  if (cb.size() < 1) throw InvalidArgument("rmse_map: empty grid");
  if (snapshots < 1) throw InvalidArgument("rmse_map: snapshot count must be >= 1");
}

LocalizationStats finish(std::vector<double> rmse, int trials) {
  LocalizationStats stats;
  stats.max_rmse = *std::max_element(rmse.begin(), rmse.end());
  stats.per_point_rmse = std::move(rmse);
  stats.trials_per_point = trials;
  return stats;
}

}  // namespace

LocalizationStats rmse_map(const GridCodebook& codebook, const PowerLevels& powers, int snapshots,
                           int trials, std::uint64_t seed) {
  check_inputs(codebook, snapshots, trials);
  const auto n = static_cast<std::ptrdiff_t>(codebook.size());
  std::vector<double> rmse(codebook.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    rmse[static_cast<std::size_t>(i)] =
        point_rmse(codebook, powers, snapshots, trials, seed, static_cast<std::size_t>(i));
  }
  return finish(std::move(rmse), trials);
}

LocalizationStats rmse_map(const GridCodebook& codebook, const Scenario& scenario, int trials,
                           std::uint64_t seed) {
  return rmse_map(codebook, snr_to_powers(scenario.snr_db), scenario.snapshot_count, trials, seed);
}

LocalizationStats rmse_map(const Deployment& deployment, const Scenario& scenario, int trials,
                           std::uint64_t seed) {
  GridCodebook cb;
  cb.grid = coverage_grid(scenario);
  cb.steering = steering_matrix(deployment, scenario, cb.grid);
  cb.alpha = scenario.alpha;
  return rmse_map(cb, scenario, trials, seed);
}

namespace serial {

LocalizationStats rmse_map(const GridCodebook& codebook, const PowerLevels& powers, int snapshots,
                           int trials, std::uint64_t seed) {
  check_inputs(codebook, snapshots, trials);
  std::vector<double> rmse(codebook.size());
  for (std::size_t i = 0; i < codebook.size(); ++i) {
    rmse[i] = point_rmse(codebook, powers, snapshots, trials, seed, i);
  }
  return finish(std::move(rmse), trials);
}

}  // namespace serial

}  // namespace isac
