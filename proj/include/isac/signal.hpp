#pragma once

#include <Eigen/Dense>

#include "isac/geometry.hpp"
#include "isac/random.hpp"

namespace isac {

struct PowerLevels {
  double signal_power = 1.0;  // E|s(t)|^2
  double noise_power = 1.0;   // E|n_i(t)|^2 per element
};

/// Received samples, one row per antenna element and one column per snapshot.
struct SnapshotBatch {
  Eigen::MatrixXcd samples;
};

/// Hermitian sample covariance (1/T) sum_t y(t) y(t)^H.
struct CovarianceEstimate {
  Eigen::MatrixXcd matrix;
};

/// Noise power is the unit reference; signal power follows from the SNR.
PowerLevels snr_to_powers(double snr_db);

/// Column t = a * s(t) + n(t). s and n are circularly-symmetric complex
/// Gaussian; each complex draw uses two real standard normals (real part
/// first) scaled by sqrt(var / 2). Per snapshot the source sample is drawn
/// before the element noise.
SnapshotBatch generate_snapshots(const SteeringVector& a, const PowerLevels& powers, int snapshots,
                                 Rng& rng);

CovarianceEstimate sample_covariance(const SnapshotBatch& batch);

}  // namespace isac
