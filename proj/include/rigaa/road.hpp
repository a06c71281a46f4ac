// road.hpp — road-topology scenarios: centerline decoding, constraint
// checks, and the kinematic-model max-deviation surrogate fitness.
#ifndef RIGAA_ROAD_HPP_
#define RIGAA_ROAD_HPP_

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "rigaa/scenario.hpp"

namespace rigaa::road {

// Attribute columns of a road chromosome.
inline constexpr Eigen::Index kType = 0;    // 0 straight, 1 left, 2 right
inline constexpr Eigen::Index kLength = 1;  // [5, 50] m, straights
inline constexpr Eigen::Index kAngle = 2;   // [5, 85] deg, turns

struct GeometryParams {
  double arc_radius = 20.0;       // m, turns decode as circular arcs
  double sample_step = 3.0;       // m of arc length between emitted points
  double map_size = 200.0;        // m, square map edge
  double half_width = 4.0;        // m, road half-width (two lanes)
  double sharpness_limit = 0.4;   // rad of heading change per sample point
  double start_x = 100.0;
  double start_y = 100.0;
  double start_heading = 0.0;     // rad
};

// Sampled centerline. Points are spaced sample_step apart in arc length
// (the final point may close a shorter remainder); arc_s carries the exact
// arc-length parameter of each point and segment_breaks the parameter at
// the end of each decoded segment.
struct Polyline {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> headings;        // tangent angle per point, rad
  std::vector<double> arc_s;           // arc-length parameter per point
  std::vector<double> segment_breaks;  // arc length at each segment end

  double total_length() const {
    return segment_breaks.empty() ? 0.0 : segment_breaks.back();
  }
};

struct KinematicParams {
  double delta0 = 0.0;  // rad
  double theta0 = 0.0;  // rad
  double v0 = 15.0;     // m/s
  double a0 = 0.1;      // m/s^2
  double dt = 0.7;      // s
};

struct VehicleTrace {
  std::vector<Eigen::Vector2d> veh_points;   // P_veh
  std::vector<Eigen::Vector2d> road_points;  // matched P_rd
  std::vector<double> deviations;            // d_i

  double max_deviation() const;
};

const ScenarioSchema& road_schema();

// Piecewise straight/arc decoding from pose (100, 100, heading 0). Purely
// geometric: accepts any element count >= 1 (construction prefixes) and any
// angle; schema conformance is RoadDomain::validate's job.
Polyline decode_polyline(const Chromosome& chromosome,
                         const GeometryParams& params = {});

// Flags "out-of-bounds", "too-sharp" and "self-intersect". Two centerline
// segments count as self-intersecting when they cross or approach within
// 2 x half_width; pairs closer than that along the path are skipped.
ValidityReport validate(const Polyline& polyline,
                        const GeometryParams& params = {});

// Simplified pure-pursuit update, run from the first polyline point:
//   delta' = arctan(dy / dx) - delta   (principal value; +-pi/2 at dx = 0)
//   theta' = theta + delta' * dt
//   x'     = x + v * cos(theta) * dt
//   y'     = y + v * sin(theta) * dt
//   v'     = v + a * dt
// dx, dy are world-frame offsets from the vehicle to the closest road point,
// matched monotonically (forward from the previous match). Stops when the
// match reaches the final point or after max_steps (0 = 4 * length / (v0 dt)).
VehicleTrace simulate_vehicle(const Polyline& polyline,
                              const KinematicParams& params = {},
                              int max_steps = 0);

// Max deviation of the kinematic model on the decoded road; throws
// InvalidScenario when the decoded polyline fails validate().
double surrogate_fitness(const Chromosome& chromosome,
                         const GeometryParams& geometry = {},
                         const KinematicParams& kinematics = {});

// {"points": [[x, y], ...]}
std::string dump_json(const Polyline& polyline, int indent = -1);
// Self-contained SVG of the centerline and, when given, the vehicle trace.
std::string dump_svg(const Polyline& polyline,
                     const VehicleTrace* trace = nullptr,
                     const GeometryParams& params = {});

class RoadDomain final : public Domain {
 public:
  explicit RoadDomain(GeometryParams geometry = {},
                      KinematicParams kinematics = {})
      : geometry_(geometry), kinematics_(kinematics) {}

  const ScenarioSchema& schema() const override { return road_schema(); }
  ValidityReport validate(const Chromosome& c) const override;
  double surrogate_fitness(const Chromosome& c) const override {
    return road::surrogate_fitness(c, geometry_, kinematics_);
  }
  std::optional<double> prefix_fitness(const Eigen::MatrixXi& elements,
                                       Eigen::Index count) const override;
  std::vector<int> similarity_thresholds() const override { return {0, 5, 5}; }

  const GeometryParams& geometry() const { return geometry_; }
  const KinematicParams& kinematics() const { return kinematics_; }

 private:
  GeometryParams geometry_;
  KinematicParams kinematics_;
};

}  // namespace rigaa::road

#endif  // RIGAA_ROAD_HPP_
