#include "rigaa/road.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rigaa/errors.hpp"

namespace rigaa::road {
namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a < -kPi) a += 2.0 * kPi;
  return a;
}

struct Segment {
  Eigen::Vector2d origin;
  double heading;  // at segment start
  double length;   // arc length
  int turn;        // 0 straight, +1 left, -1 right
  double radius;
};

// Pose at arc-length s along one segment, closed form.
void segment_pose(const Segment& seg, double s, Eigen::Vector2d& point,
                  double& heading) {
  if (seg.turn == 0) {
    point = seg.origin +
            s * Eigen::Vector2d(std::cos(seg.heading), std::sin(seg.heading));
    heading = seg.heading;
    return;
  }
  const double phi = s / seg.radius;
  if (seg.turn > 0) {
    const Eigen::Vector2d center =
        seg.origin + seg.radius * Eigen::Vector2d(-std::sin(seg.heading),
                                                  std::cos(seg.heading));
    point = center + seg.radius * Eigen::Vector2d(std::sin(seg.heading + phi),
                                                  -std::cos(seg.heading + phi));
    heading = seg.heading + phi;
  } else {
    const Eigen::Vector2d center =
        seg.origin + seg.radius * Eigen::Vector2d(std::sin(seg.heading),
                                                  -std::cos(seg.heading));
    point = center + seg.radius * Eigen::Vector2d(-std::sin(seg.heading - phi),
                                                  std::cos(seg.heading - phi));
    heading = seg.heading - phi;
  }
}

double segment_distance(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                        const Eigen::Vector2d& q1, const Eigen::Vector2d& q2) {
  const auto point_to_segment = [](const Eigen::Vector2d& p,
                                   const Eigen::Vector2d& a,
                                   const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
  };
  const auto orient = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                         const Eigen::Vector2d& c) {
    const double v = (b.x() - a.x()) * (c.y() - a.y()) -
                     (b.y() - a.y()) * (c.x() - a.x());
    return (v > 0.0) - (v < 0.0);
  };
  // Proper crossing: distance zero.
  const int o1 = orient(p1, p2, q1);
  const int o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1);
  const int o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0)
    return 0.0;
  return std::min(std::min(point_to_segment(p1, q1, q2),
                           point_to_segment(p2, q1, q2)),
                  std::min(point_to_segment(q1, p1, p2),
                           point_to_segment(q2, p1, p2)));
}

}  // namespace

const ScenarioSchema& road_schema() {
  static const ScenarioSchema schema{
      "road-v1",
      {AttributeSpec::categorical("road_type", 3),
       AttributeSpec::integer("length", 5, 50),
       AttributeSpec::integer("angle", 5, 85)},
      2,
      30,
      false};
  return schema;
}

double VehicleTrace::max_deviation() const {
  double max = 0.0;
  for (const double d : deviations) max = std::max(max, d);
  return max;
}

Polyline decode_polyline(const Chromosome& chromosome,
                         const GeometryParams& params) {
  if (chromosome.cols() != road_schema().attribute_count() ||
      chromosome.rows() < 1)
    throw SchemaMismatch("road chromosome must be n x 3 with n >= 1");

  std::vector<Segment> segments;
  segments.reserve(static_cast<std::size_t>(chromosome.rows()));
  Eigen::Vector2d pose(params.start_x, params.start_y);
  double heading = params.start_heading;
  Polyline line;
  for (Eigen::Index e = 0; e < chromosome.rows(); ++e) {
    Segment seg;
    seg.origin = pose;
    seg.heading = heading;
    seg.radius = params.arc_radius;
    const int type = chromosome(e, kType);
    if (type == 0) {
      seg.turn = 0;
      seg.length = chromosome(e, kLength);
    } else {
      seg.turn = (type == 1) ? 1 : -1;
      seg.length = params.arc_radius * chromosome(e, kAngle) * kPi / 180.0;
    }
    segment_pose(seg, seg.length, pose, heading);
    line.segment_breaks.push_back(
        (line.segment_breaks.empty() ? 0.0 : line.segment_breaks.back()) +
        seg.length);
    segments.push_back(seg);
  }

  const double total = line.segment_breaks.back();
  std::size_t seg_idx = 0;
  double seg_start = 0.0;
  const auto emit = [&](double s) {
    while (seg_idx + 1 < segments.size() &&
           s > line.segment_breaks[seg_idx] + 1e-12) {
      seg_start = line.segment_breaks[seg_idx];
      ++seg_idx;
    }
    Eigen::Vector2d point;
    double h = 0.0;
    segment_pose(segments[seg_idx], s - seg_start, point, h);
    line.points.push_back(point);
    line.headings.push_back(h);
    line.arc_s.push_back(s);
  };
  for (double s = 0.0; s <= total + 1e-12; s += params.sample_step) emit(s);
  if (total - line.arc_s.back() > 1e-9) emit(total);
  return line;
}

ValidityReport validate(const Polyline& polyline,
                        const GeometryParams& params) {
  ValidityReport report;
  const double margin = params.half_width;

  for (const auto& p : polyline.points) {
    if (p.x() < margin || p.x() > params.map_size - margin || p.y() < margin ||
        p.y() > params.map_size - margin) {
      report.flag("out-of-bounds");
      break;
    }
  }

  for (std::size_t i = 0; i + 1 < polyline.headings.size(); ++i) {
    if (std::abs(wrap_angle(polyline.headings[i + 1] -
                            polyline.headings[i])) >
        params.sharpness_limit + 1e-12) {
      report.flag("too-sharp");
      break;
    }
  }

  // Segment pairs separated along the path by less than the proximity
  // threshold are legitimately close; skip them.
  const double proximity = 2.0 * params.half_width;
  const std::size_t n = polyline.points.size();
  bool intersects = false;
  for (std::size_t i = 0; i + 1 < n && !intersects; ++i) {
    for (std::size_t j = i + 2; j + 1 < n; ++j) {
      if (polyline.arc_s[j] - polyline.arc_s[i + 1] <= proximity) continue;
      if (segment_distance(polyline.points[i], polyline.points[i + 1],
                           polyline.points[j], polyline.points[j + 1]) <
          proximity) {
        intersects = true;
        break;
      }
    }
  }
  if (intersects) report.flag("self-intersect");
  return report;
}

VehicleTrace simulate_vehicle(const Polyline& polyline,
                              const KinematicParams& params, int max_steps) {
  VehicleTrace trace;
  if (polyline.points.size() < 2) return trace;
  if (max_steps <= 0) {
    max_steps = std::max(
        1, static_cast<int>(std::ceil(4.0 * polyline.total_length() /
                                      (params.v0 * params.dt))));
  }

  Eigen::Vector2d pos = polyline.points.front();
  double theta = params.theta0;
  double v = params.v0;
  double delta = params.delta0;
  std::size_t matched = 0;

  for (int step = 0; step < max_steps; ++step) {
    // Monotone matching: closest road point at or after the previous match.
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = matched;
    for (std::size_t j = matched; j < polyline.points.size(); ++j) {
      const double d = (polyline.points[j] - pos).norm();
      if (d < best) {
        best = d;
        best_idx = j;
      }
    }
    matched = best_idx;

    trace.veh_points.push_back(pos);
    trace.road_points.push_back(polyline.points[matched]);
    trace.deviations.push_back(best);

    if (matched + 1 == polyline.points.size()) break;

    const double dx = polyline.points[matched].x() - pos.x();
    const double dy = polyline.points[matched].y() - pos.y();
    // arctan of the signed ratio (principal value); the dx = 0 singularity
    // resolves to the two-argument limit +-pi/2. The full atan2 would read
    // a matched point slightly behind the vehicle as a pi steering command
    // and destabilize the controller.
    const double target =
        (dx == 0.0 && dy == 0.0) ? 0.0 : std::atan(dy / dx);
    const double delta_next = target - delta;
    const double theta_next = theta + delta_next * params.dt;
    const double x_next = pos.x() + v * std::cos(theta) * params.dt;
    const double y_next = pos.y() + v * std::sin(theta) * params.dt;
    const double v_next = v + params.a0 * params.dt;

    delta = delta_next;
    theta = theta_next;
    pos = {x_next, y_next};
    v = v_next;
  }
  return trace;
}

double surrogate_fitness(const Chromosome& chromosome,
                         const GeometryParams& geometry,
                         const KinematicParams& kinematics) {
  const Polyline line = decode_polyline(chromosome, geometry);
  const ValidityReport report = validate(line, geometry);
  if (!report.valid)
    throw InvalidScenario("road scenario violates: " +
                          report.violated_constraints.front());
  return simulate_vehicle(line, kinematics).max_deviation();
}

std::string dump_json(const Polyline& polyline, int indent) {
  nlohmann::json out;
  auto& points = out["points"];
  points = nlohmann::json::array();
  for (const auto& p : polyline.points)
    points.push_back({p.x(), p.y()});
  return out.dump(indent);
}

std::string dump_svg(const Polyline& polyline, const VehicleTrace* trace,
                     const GeometryParams& params) {
  const double scale = 4.0;
  const double size = params.map_size * scale;
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << size
      << "' height='" << size << "' viewBox='0 0 " << size << " " << size
      << "'>\n";
  svg << "<rect width='" << size << "' height='" << size
      << "' fill='white' stroke='black'/>\n";
  const auto map_xy = [&](const Eigen::Vector2d& p) {
    return Eigen::Vector2d(p.x() * scale, size - p.y() * scale);
  };
  svg << "<polyline fill='none' stroke='#c9a227' stroke-width='"
      << 2.0 * params.half_width * scale << "' stroke-opacity='0.4' points='";
  for (const auto& p : polyline.points) {
    const Eigen::Vector2d m = map_xy(p);
    svg << m.x() << "," << m.y() << " ";
  }
  svg << "'/>\n<polyline fill='none' stroke='#c9a227' stroke-width='2' "
         "points='";
  for (const auto& p : polyline.points) {
    const Eigen::Vector2d m = map_xy(p);
    svg << m.x() << "," << m.y() << " ";
  }
  svg << "'/>\n";
  if (trace != nullptr) {
    for (const auto& p : trace->veh_points) {
      const Eigen::Vector2d m = map_xy(p);
      svg << "<circle cx='" << m.x() << "' cy='" << m.y()
          << "' r='3' fill='#1f5fbf'/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

ValidityReport RoadDomain::validate(const Chromosome& c) const {
  if (!matches_schema(c, road_schema())) {
    ValidityReport report;
    report.flag("schema");
    return report;
  }
  return road::validate(decode_polyline(c, geometry_), geometry_);
}

std::optional<double> RoadDomain::prefix_fitness(
    const Eigen::MatrixXi& elements, Eigen::Index count) const {
  const Chromosome prefix = elements.topRows(count);
  const Polyline line = decode_polyline(prefix, geometry_);
  if (!road::validate(line, geometry_).valid) return std::nullopt;
  return simulate_vehicle(line, kinematics_).max_deviation();
}

}  // namespace rigaa::road
