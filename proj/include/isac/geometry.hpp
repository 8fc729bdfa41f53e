#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "isac/random.hpp"

namespace isac {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s, exact
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Physical and evaluation settings of one deployment problem.
///
/// Defaults reproduce the indoor scenario: 2.4 GHz carrier, 4-element ULAs at
/// half-wavelength spacing, three nodes inside the incircle of a 30 m
/// equilateral triangle, 1 m target grid, 0 dB SNR, 200 snapshots.
struct Scenario {
  double carrier_frequency = 2.4e9;  // Hz
  double element_spacing = 0.0;      // m; 0 selects wavelength / 2
  int antennas_per_node = 4;
  int node_count = 3;
  double region_radius = 30.0 / (2.0 * std::numbers::sqrt3);  // m
  Point2 region_center{};
  double grid_resolution = 1.0;  // m
  double snr_db = 0.0;
  int snapshot_count = 200;
  double alpha = 0.05;

  double wavelength() const;
  /// element_spacing, or wavelength / 2 when unset.
  double spacing() const;
  int element_count() const { return antennas_per_node * node_count; }

  /// Throws InvalidArgument naming the first violated invariant.
  void validate() const;
};

struct NodePose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;  // radians, [0, 2pi)

  Point2 position() const { return {x, y}; }
  friend bool operator==(const NodePose&, const NodePose&) = default;
};

struct Deployment {
  std::vector<NodePose> poses;

  friend bool operator==(const Deployment&, const Deployment&) = default;
};

/// Element positions, node-major then element-minor.
struct AntennaLayout {
  std::vector<Point2> positions;
  int antennas_per_node = 0;
};

/// Composite steering vector over all N*J elements, unit Euclidean norm.
struct SteeringVector {
  Eigen::VectorXcd entries;

  Eigen::Index size() const { return entries.size(); }
};

/// Lattice of candidate target positions, row-major by y then x.
struct CoverageGrid {
  std::vector<Point2> points;

  std::size_t size() const { return points.size(); }
};

double wavelength_of(double frequency);

double wrap_angle(double theta);

std::vector<Point2> antenna_positions(const NodePose& pose, int antennas, double spacing);

AntennaLayout antenna_layout(const Deployment& deployment, int antennas, double spacing);
AntennaLayout antenna_layout(const Deployment& deployment, const Scenario& scenario);

SteeringVector steering_vector(const AntennaLayout& layout, const Point2& target, double wavelength);

CoverageGrid coverage_grid(const Point2& center, double radius, double resolution);
CoverageGrid coverage_grid(const Scenario& scenario);

/// Three nodes at the incircle tangency points of the scenario triangle,
/// arrays parallel to the adjacent sides.
Deployment midpoint_baseline(const Scenario& scenario);

/// Positions uniform over the region disk (polar inverse CDF), orientations
/// uniform on [0, 2pi). Draw order per node: radius, bearing, orientation.
Deployment random_deployment(const Scenario& scenario, Rng& rng);

/// Indices of poses violating the region or angle invariants, or the pose
/// count not matching the scenario (reported as index -1).
std::vector<int> infeasible_nodes(const Deployment& deployment, const Scenario& scenario);

}  // namespace isac
