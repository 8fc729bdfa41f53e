#include "isac/geometry.hpp"

#include <cmath>
#include <string>

#include "isac/error.hpp"

namespace isac {

double wavelength_of(double frequency) {
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw InvalidArgument("carrier frequency must be positive and finite");
  }
  return kSpeedOfLight / frequency;
}

double Scenario::wavelength() const { return wavelength_of(carrier_frequency); }

double Scenario::spacing() const {
  return element_spacing > 0.0 ? element_spacing : 0.5 * wavelength();
}

void Scenario::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidArgument(std::string("scenario: ") + what);
  };
  require(carrier_frequency > 0.0 && std::isfinite(carrier_frequency), "carrier_frequency must be > 0");
  require(element_spacing >= 0.0 && std::isfinite(element_spacing), "element_spacing must be > 0 (or 0 for lambda/2)");
  require(antennas_per_node >= 1, "antennas_per_node must be >= 1");
  require(node_count >= 1, "node_count must be >= 1");
  require(region_radius > 0.0 && std::isfinite(region_radius), "region_radius must be > 0");
  require(std::isfinite(region_center.x) && std::isfinite(region_center.y), "region_center must be finite");
  require(grid_resolution > 0.0 && std::isfinite(grid_resolution), "grid_resolution must be > 0");
  require(std::isfinite(snr_db), "snr_db must be finite");
  require(snapshot_count >= 1, "snapshot_count must be >= 1");
  require(alpha >= 0.0 && std::isfinite(alpha), "alpha must be >= 0");
}

double wrap_angle(double theta) {
  if (!std::isfinite(theta)) throw InvalidArgument("wrap_angle: non-finite angle");
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // r + 2pi can round up to exactly 2pi for tiny negative inputs.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

std::vector<Point2> antenna_positions(const NodePose& pose, int antennas, double spacing) {
  if (antennas < 1) throw InvalidArgument("antenna_positions: need at least one element");
  if (!(spacing > 0.0)) throw InvalidArgument("antenna_positions: spacing must be positive");
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  const double mid = 0.5 * (antennas + 1);
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(antennas));
  for (int n = 1; n <= antennas; ++n) {
    const double offset = (n - mid) * spacing;
    out.push_back({pose.x + offset * c, pose.y + offset * s});
  }
  return out;
}

AntennaLayout antenna_layout(const Deployment& deployment, int antennas, double spacing) {
  AntennaLayout layout;
  layout.antennas_per_node = antennas;
  layout.positions.reserve(deployment.poses.size() * static_cast<std::size_t>(antennas));
  for (const auto& pose : deployment.poses) {
    auto elems = antenna_positions(pose, antennas, spacing);
    layout.positions.insert(layout.positions.end(), elems.begin(), elems.end());
  }
  return layout;
}

AntennaLayout antenna_layout(const Deployment& deployment, const Scenario& scenario) {
  return antenna_layout(deployment, scenario.antennas_per_node, scenario.spacing());
}

SteeringVector steering_vector(const AntennaLayout& layout, const Point2& target, double wavelength) {
  if (layout.positions.empty()) throw InvalidArgument("steering_vector: empty antenna layout");
  if (!(wavelength > 0.0)) throw InvalidArgument("steering_vector: wavelength must be positive");
  const auto m = static_cast<Eigen::Index>(layout.positions.size());
  const double scale = std::sqrt(1.0 / static_cast<double>(m));
  const double k = kTwoPi / wavelength;
  SteeringVector a;
  a.entries.resize(m);
  for (Eigen::Index e = 0; e < m; ++e) {
    const double r = distance(target, layout.positions[static_cast<std::size_t>(e)]);
    if (r == 0.0) {
      throw DegenerateGeometry("steering_vector: target coincides with antenna element " +
                               std::to_string(e));
    }
    a.entries[e] = std::polar(scale, -k * r);
  }
  return a;
}

CoverageGrid coverage_grid(const Point2& center, double radius, double resolution) {
  if (!(radius > 0.0)) throw InvalidArgument("coverage_grid: radius must be positive");
  if (!(resolution > 0.0)) throw InvalidArgument("coverage_grid: resolution must be positive");
  const auto reach = static_cast<long>(std::floor(radius / resolution));
  CoverageGrid grid;
  for (long k = -reach; k <= reach; ++k) {
    for (long i = -reach; i <= reach; ++i) {
      const double dx = static_cast<double>(i) * resolution;
      const double dy = static_cast<double>(k) * resolution;
      if (std::hypot(dx, dy) <= radius) grid.points.push_back({center.x + dx, center.y + dy});
    }
  }
  return grid;
}

CoverageGrid coverage_grid(const Scenario& scenario) {
  return coverage_grid(scenario.region_center, scenario.region_radius, scenario.grid_resolution);
}

Deployment midpoint_baseline(const Scenario& scenario) {
  if (scenario.node_count != 3) {
    throw UnsupportedConfiguration("midpoint baseline is defined for exactly 3 nodes");
  }
  // Triangle with a vertex due south; its sides touch the incircle at
  // bearings 90, 210 and 330 degrees. Each side is perpendicular to the
  // radius through its tangency point.
  constexpr double deg = std::numbers::pi / 180.0;
  Deployment dep;
  for (double bearing : {90.0 * deg, 210.0 * deg, 330.0 * deg}) {
    dep.poses.push_back({scenario.region_center.x + scenario.region_radius * std::cos(bearing),
                         scenario.region_center.y + scenario.region_radius * std::sin(bearing),
                         wrap_angle(bearing + 0.5 * std::numbers::pi)});
  }
  return dep;
}

Deployment random_deployment(const Scenario& scenario, Rng& rng) {
  Deployment dep;
  dep.poses.reserve(static_cast<std::size_t>(scenario.node_count));
  for (int j = 0; j < scenario.node_count; ++j) {
    const double radius = scenario.region_radius * std::sqrt(uniform01(rng));
    const double bearing = kTwoPi * uniform01(rng);
    const double theta = wrap_angle(kTwoPi * uniform01(rng));
    dep.poses.push_back({scenario.region_center.x + radius * std::cos(bearing),
                         scenario.region_center.y + radius * std::sin(bearing), theta});
  }
  return dep;
}

std::vector<int> infeasible_nodes(const Deployment& deployment, const Scenario& scenario) {
  std::vector<int> bad;
  if (deployment.poses.size() != static_cast<std::size_t>(scenario.node_count)) bad.push_back(-1);
  for (std::size_t j = 0; j < deployment.poses.size(); ++j) {
    const auto& p = deployment.poses[j];
    const bool finite = std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.theta);
    const double dx = p.x - scenario.region_center.x;
    const double dy = p.y - scenario.region_center.y;
    // Small slack so that poses read back from 17-digit text stay feasible.
    const double r2 = scenario.region_radius * scenario.region_radius * (1.0 + 1e-12);
    const bool inside = finite && dx * dx + dy * dy <= r2;
    const bool angle_ok = finite && p.theta >= 0.0 && p.theta < kTwoPi;
    if (!inside || !angle_ok) bad.push_back(static_cast<int>(j));
  }
  return bad;
}

}  // namespace isac
