#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "emanet/kernel.hpp"
#include "emanet/random.hpp"

namespace emanet {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

/// Axis-aligned rectangle, closed on all sides.
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  /// Does the closed segment a-b touch this rectangle?
  bool intersects_segment(Point a, Point b) const;
  double area() const { return (x1 - x0) * (y1 - y0); }
};

class MobilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Area {
  double width = 1000.0;
  double height = 1000.0;
  std::vector<Rect> obstacles;

  bool inside(Point p) const { return p.x >= 0 && p.x <= width && p.y >= 0 && p.y <= height; }
  bool blocked(Point p) const;
  /// Straight movement or radio path between a and b crosses no obstacle.
  bool clear_path(Point a, Point b) const;
  /// Throws MobilityError when obstacles leave the area or leave no free space.
  void validate() const;
};

struct MobilityParams {
  double v_min = 1.0;
  double v_max = 2.0;
  double pause_min = 0.0;
  double pause_max = 10.0;
  double tick = 0.5;
  bool stationary() const { return v_max <= 0.0; }
};

/// Random-waypoint state of one node.
struct NodeKinematics {
  Point position;
  Point waypoint;
  double speed = 0.0;
  double pause_until = 0.0;
};

inline constexpr int kMaxWaypointRejections = 10000;

/// Uniform point in the free part of the area, by rejection.
Point sample_waypoint(RandomStream& stream, const Area& area);

/// Fresh kinematics at `position`, paused until `now` then heading to a new waypoint.
NodeKinematics initial_kinematics(RandomStream& stream, const Area& area, const MobilityParams& params,
                                  Point position);

/// Advance `node` from time `now` by `dt` seconds of random-waypoint motion.
NodeKinematics advance(NodeKinematics node, double now, double dt, RandomStream& stream,
                       const Area& area, const MobilityParams& params);

/// Deterministic reception range standing in for two-ray ground.
struct LinkModel {
  double radius = 250.0;
  bool in_range(Point a, Point b, const Area& area) const {
    return distance(a, b) <= radius && area.clear_path(a, b);
  }
};

/// Nodes within `radius` of `self` with an unobstructed path. `alive` may be
/// empty (everyone alive).
std::vector<NodeId> neighbors(std::span<const Point> positions, const LinkModel& link,
                              const Area& area, NodeId self, std::span<const bool> alive = {});

/// Full adjacency lists, computed in one pass (symmetric by construction).
std::vector<std::vector<NodeId>> neighbor_graph(std::span<const Point> positions,
                                                const LinkModel& link, const Area& area,
                                                std::span<const bool> alive = {});

/// Breadth-first hop distances from `source`; -1 for unreachable.
std::vector<int> bfs_hops(const std::vector<std::vector<NodeId>>& graph, NodeId source);

bool connected(const std::vector<std::vector<NodeId>>& graph);

}  // namespace emanet
