#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "isac/correlation.hpp"
#include "isac/geometry.hpp"
#include "isac/signal.hpp"

namespace isac {

/// Orthonormal basis of the noise subspace (eigenvectors of the smallest
/// element_count - num_sources eigenvalues, ascending).
struct NoiseSubspace {
  Eigen::MatrixXcd basis;
};

struct LocalizationStats {
  std::vector<double> per_point_rmse;  // meters, grid order
  double max_rmse = 0.0;
  int trials_per_point = 0;
};

NoiseSubspace noise_subspace(const CovarianceEstimate& cov, int num_sources = 1);

/// ||basis^H a_i||^2 for every grid column: the noise-projection power,
/// whose minimum is the MUSIC pseudo-spectrum peak.
std::vector<double> music_scores(const NoiseSubspace& subspace, const GridCodebook& codebook);

/// Index of the minimum noise-projection score, lowest index on ties.
std::size_t localize_index(const CovarianceEstimate& cov, const GridCodebook& codebook);

Point2 localize(const CovarianceEstimate& cov, const GridCodebook& codebook);

/// Monte Carlo RMSE over the coverage grid. Trial t at grid point i draws
/// from derive_stream(seed, {i, t}), so two deployments evaluated with the
/// same seed see the same source and noise samples (common random numbers).
/// Grid points are distributed across OpenMP threads.
LocalizationStats rmse_map(const GridCodebook& codebook, const PowerLevels& powers, int snapshots,
                           int trials, std::uint64_t seed);

/// Powers from scenario.snr_db, snapshots from scenario.snapshot_count.
LocalizationStats rmse_map(const GridCodebook& codebook, const Scenario& scenario, int trials,
                           std::uint64_t seed);

LocalizationStats rmse_map(const Deployment& deployment, const Scenario& scenario, int trials,
                           std::uint64_t seed);

namespace serial {

/// Single-threaded reference for rmse_map.
LocalizationStats rmse_map(const GridCodebook& codebook, const PowerLevels& powers, int snapshots,
                           int trials, std::uint64_t seed);

}  // namespace serial

}  // namespace isac
