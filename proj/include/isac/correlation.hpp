#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>

#include <Eigen/Dense>

#include "isac/geometry.hpp"

namespace isac {

/// Steering vectors of one deployment over a coverage grid, together with
/// the deployment-independent distance-weight table ||p_i - p_j||^alpha.
struct GridCodebook {
  CoverageGrid grid;
  Eigen::MatrixXcd steering;         // element_count x |grid|, column i = a(p_i)
  Eigen::MatrixXd distance_weights;  // |grid| x |grid|, symmetric
  double alpha = 0.0;

  std::size_t size() const { return grid.size(); }
  SteeringVector column(std::size_t i) const {
    return {steering.col(static_cast<Eigen::Index>(i))};
  }
};

/// Largest distance-weighted correlation over grid pairs i < j.
struct CorrelationReport {
  double max_value = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
};

/// Pairwise ||p_i - p_j||^alpha with a zero diagonal for alpha > 0.
Eigen::MatrixXd distance_weight_table(const CoverageGrid& grid, double alpha);

/// Steering matrix for one deployment; columns follow grid order.
Eigen::MatrixXcd steering_matrix(const Deployment& deployment, const Scenario& scenario,
                                 const CoverageGrid& grid);

GridCodebook build_codebook(const Deployment& deployment, const Scenario& scenario);

/// Reuses a precomputed grid and weight table; only the steering matrix
/// depends on the deployment.
GridCodebook build_codebook(const Deployment& deployment, const Scenario& scenario,
                            const CoverageGrid& grid, const Eigen::MatrixXd& weights);

/// |a_i^H a_j| * distance^alpha.
double weighted_correlation(const SteeringVector& a_i, const SteeringVector& a_j, double distance,
                            double alpha);

/// Exact maximum over unordered pairs, ties broken by the lexicographically
/// smallest (i, j). Rows are distributed across OpenMP threads; the result is
/// identical to the serial reference for any thread count.
CorrelationReport max_weighted_correlation(const GridCodebook& codebook);

/// Sample Pearson coefficient ((n-1)-normalized).
double pearson(std::span<const double> xs, std::span<const double> ys);

/// E * sqrt(2 (1 - |a_i^H a_j|^2)): Frobenius distance between the two
/// rank-one signal covariances E a_i a_i^H and E a_j a_j^H.
double frobenius_separability(const SteeringVector& a_i, const SteeringVector& a_j, double power);

struct Decomposition {
  std::complex<double> coefficient;  // a^H b
  Eigen::VectorXcd residual;         // b - coefficient * a, orthogonal to a
};

/// Splits b into its component along a and an orthogonal residual.
Decomposition lemma2_decompose(const SteeringVector& a, const SteeringVector& b);

namespace serial {

/// Single-threaded reference for max_weighted_correlation.
CorrelationReport max_weighted_correlation(const GridCodebook& codebook);

/// Single-threaded reference for steering_matrix.
Eigen::MatrixXcd steering_matrix(const Deployment& deployment, const Scenario& scenario,
                                 const CoverageGrid& grid);

}  // namespace serial

}  // namespace isac
