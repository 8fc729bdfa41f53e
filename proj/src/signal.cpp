#include "isac/signal.hpp"

#include <cmath>
#include <random>

#include "isac/error.hpp"

namespace isac {

PowerLevels snr_to_powers(double snr_db) {
  if (!std::isfinite(snr_db)) throw InvalidArgument("snr_to_powers: SNR must be finite");
  return {std::pow(10.0, snr_db / 10.0), 1.0};
}

SnapshotBatch generate_snapshots(const SteeringVector& a, const PowerLevels& powers, int snapshots,
                                 Rng& rng) {
  if (snapshots < 1) throw InvalidArgument("generate_snapshots: need at least one snapshot");
  if (!(powers.signal_power >= 0.0) || !(powers.noise_power >= 0.0)) {
    throw InvalidArgument("generate_snapshots: powers must be non-negative");
  }
  const Eigen::Index m = a.size();
  const double s_scale = std::sqrt(powers.signal_power / 2.0);
  const double n_scale = std::sqrt(powers.noise_power / 2.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  SnapshotBatch batch;
  batch.samples.resize(m, snapshots);
  for (int t = 0; t < snapshots; ++t) {
    const double sr = normal(rng);
    const double si = normal(rng);
    const std::complex<double> s(s_scale * sr, s_scale * si);
    for (Eigen::Index e = 0; e < m; ++e) {
      const double nr = normal(rng);
      const double ni = normal(rng);
      batch.samples(e, t) = a.entries[e] * s + std::complex<double>(n_scale * nr, n_scale * ni);
    }
  }
  return batch;
}

CovarianceEstimate sample_covariance(const SnapshotBatch& batch) {
  const auto t = batch.samples.cols();
  if (t < 1 || batch.samples.rows() < 1) throw InvalidArgument("sample_covariance: empty batch");
  CovarianceEstimate cov;
  cov.matrix.setZero(batch.samples.rows(), batch.samples.rows());
  cov.matrix.selfadjointView<Eigen::Lower>().rankUpdate(batch.samples, 1.0 / static_cast<double>(t));
  cov.matrix = cov.matrix.selfadjointView<Eigen::Lower>();
  return cov;
}

}  // namespace isac
