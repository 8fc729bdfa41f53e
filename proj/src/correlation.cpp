#include "isac/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "isac/error.hpp"

namespace isac {

namespace {

void require_unit_norm(const SteeringVector& v, const char* who) {
  if (std::abs(v.entries.norm() - 1.0) > 1e-9) {
    throw InvalidArgument(std::string(who) + ": steering vector is not unit-norm");
  }
}

}  // namespace

Eigen::MatrixXd distance_weight_table(const CoverageGrid& grid, double alpha) {
  if (!(alpha >= 0.0)) throw InvalidArgument("distance weights: alpha must be >= 0");
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd w(n, n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = distance(grid.points[static_cast<std::size_t>(i)],
                                grid.points[static_cast<std::size_t>(j)]);
      w(i, j) = (i == j && alpha > 0.0) ? 0.0 : std::pow(d, alpha);
    }
  }
  return w;
}

Eigen::MatrixXcd steering_matrix(const Deployment& deployment, const Scenario& scenario,
                                 const CoverageGrid& grid) {
  const AntennaLayout layout = antenna_layout(deployment, scenario);
  const double lambda = scenario.wavelength();
  const auto cols = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(layout.positions.size()), cols);
  bool degenerate = false;
#pragma omp parallel for schedule(static) reduction(|| : degenerate)
  for (Eigen::Index i = 0; i < cols; ++i) {
    try {
      a.col(i) = steering_vector(layout, grid.points[static_cast<std::size_t>(i)], lambda).entries;
    } catch (const DegenerateGeometry&) {
      degenerate = true;
    }
  }
  if (degenerate) {
    // Rerun serially so the reported element is the first offending one.
    return serial::steering_matrix(deployment, scenario, grid);
  }
  return a;
}

GridCodebook build_codebook(const Deployment& deployment, const Scenario& scenario) {
  CoverageGrid grid = coverage_grid(scenario);
  Eigen::MatrixXd weights = distance_weight_table(grid, scenario.alpha);
  return build_codebook(deployment, scenario, grid, weights);
}

GridCodebook build_codebook(const Deployment& deployment, const Scenario& scenario,
                            const CoverageGrid& grid, const Eigen::MatrixXd& weights) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (weights.rows() != n || weights.cols() != n) {
    throw InvalidArgument("build_codebook: weight table does not match grid");
  }
  GridCodebook cb;
  cb.steering = steering_matrix(deployment, scenario, grid);
  cb.grid = grid;
  cb.distance_weights = weights;
  cb.alpha = scenario.alpha;
  return cb;
}

double weighted_correlation(const SteeringVector& a_i, const SteeringVector& a_j, double distance,
                            double alpha) {
  if (a_i.size() != a_j.size()) throw InvalidArgument("weighted_correlation: length mismatch");
  if (!(distance >= 0.0)) throw InvalidArgument("weighted_correlation: negative distance");
  const std::complex<double> inner = a_i.entries.dot(a_j.entries);  // conjugates a_i
  return std::abs(inner) * std::pow(distance, alpha);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("pearson: sequences differ in length");
  if (xs.size() < 2) throw InvalidArgument("pearson: need at least two samples");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double dx = xs[k] - mx;
    const double dy = ys[k] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("pearson: constant input sequence");
  const double r = (sxy / (n - 1.0)) / std::sqrt((sxx / (n - 1.0)) * (syy / (n - 1.0)));
  return std::clamp(r, -1.0, 1.0);
}

double frobenius_separability(const SteeringVector& a_i, const SteeringVector& a_j, double power) {
  if (a_i.size() != a_j.size()) throw InvalidArgument("frobenius_separability: length mismatch");
  require_unit_norm(a_i, "frobenius_separability");
  require_unit_norm(a_j, "frobenius_separability");
  const double overlap = std::norm(a_i.entries.dot(a_j.entries));
  return power * std::sqrt(std::max(0.0, 2.0 * (1.0 - overlap)));
}

Decomposition lemma2_decompose(const SteeringVector& a, const SteeringVector& b) {
  if (a.size() != b.size()) throw InvalidArgument("lemma2_decompose: length mismatch");
  require_unit_norm(a, "lemma2_decompose");
  require_unit_norm(b, "lemma2_decompose");
  Decomposition d;
  d.coefficient = a.entries.dot(b.entries);
  d.residual = b.entries - d.coefficient * a.entries;
  return d;
}

namespace serial {

Eigen::MatrixXcd steering_matrix(const Deployment& deployment, const Scenario& scenario,
                                 const CoverageGrid& grid) {
  const AntennaLayout layout = antenna_layout(deployment, scenario);
  const double lambda = scenario.wavelength();
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(layout.positions.size()),
                     static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    a.col(static_cast<Eigen::Index>(i)) = steering_vector(layout, grid.points[i], lambda).entries;
  }
  return a;
}

}  // namespace serial

}  // namespace isac
