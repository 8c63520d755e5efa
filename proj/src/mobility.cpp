#include "emanet/mobility.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <deque>

namespace emanet {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool Rect::intersects_segment(Point a, Point b) const {
  // Liang-Barsky clip of the parametric segment a + t(b - a), t in [0, 1].
  double t0 = 0.0, t1 = 1.0;
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double p[4] = {-dx, dx, -dy, dy};
  const double q[4] = {a.x - x0, x1 - a.x, a.y - y0, y1 - a.y};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
    if (t0 > t1) return false;
  }
  return true;
}

bool Area::blocked(Point p) const {
  return std::any_of(obstacles.begin(), obstacles.end(), [&](const Rect& r) { return r.contains(p); });
}

bool Area::clear_path(Point a, Point b) const {
  return std::none_of(obstacles.begin(), obstacles.end(),
                      [&](const Rect& r) { return r.intersects_segment(a, b); });
}

void Area::validate() const {
  if (!(width > 0 && height > 0)) throw MobilityError("area dimensions must be positive");
  double covered = 0.0;
  for (const auto& r : obstacles) {
    if (!(r.x0 < r.x1 && r.y0 < r.y1)) throw MobilityError("obstacle rectangle is degenerate");
    if (r.x0 < 0 || r.y0 < 0 || r.x1 > width || r.y1 > height) {
      throw MobilityError(fmt::format("obstacle ({},{})-({},{}) lies outside the area", r.x0, r.y0,
                                      r.x1, r.y1));
    }
    covered += r.area();
  }
  // Overlaps make this a conservative bound only; sample_waypoint's rejection
  // limit catches the rest.
  if (covered >= width * height) throw MobilityError("obstacles leave no free space");
}

Point sample_waypoint(RandomStream& stream, const Area& area) {
  for (int i = 0; i < kMaxWaypointRejections; ++i) {
    Point p{stream.uniform(0.0, area.width), stream.uniform(0.0, area.height)};
    if (!area.blocked(p)) return p;
  }
  throw MobilityError("no free waypoint found; obstacles misconfigured");
}

namespace {

double draw_speed(RandomStream& stream, const MobilityParams& params) {
  return params.v_min == params.v_max ? params.v_min : stream.uniform(params.v_min, params.v_max);
}

// Picks a waypoint reachable in a straight line. Falls back to staying put.
Point draw_reachable_waypoint(RandomStream& stream, const Area& area, Point from) {
  for (int i = 0; i < 100; ++i) {
    Point w = sample_waypoint(stream, area);
    if (area.clear_path(from, w)) return w;
  }
  return from;
}

}  // namespace

NodeKinematics initial_kinematics(RandomStream& stream, const Area& area, const MobilityParams& params,
                                  Point position) {
  NodeKinematics k;
  k.position = position;
  k.waypoint = position;
  if (params.stationary()) return k;
  k.waypoint = draw_reachable_waypoint(stream, area, position);
  k.speed = draw_speed(stream, params);
  return k;
}

NodeKinematics advance(NodeKinematics node, double now, double dt, RandomStream& stream,
                       const Area& area, const MobilityParams& params) {
  if (params.stationary()) return node;
  double t = now;
  const double t_end = now + dt;
  // Bounded loop: every iteration either consumes time or draws a new leg.
  for (int guard = 0; guard < 1000 && t < t_end; ++guard) {
    if (node.pause_until > t) {
      if (node.pause_until >= t_end) return node;
      t = node.pause_until;
      node.waypoint = draw_reachable_waypoint(stream, area, node.position);
      node.speed = draw_speed(stream, params);
      continue;
    }
    const double remaining = distance(node.position, node.waypoint);
    if (remaining == 0.0 || node.speed <= 0.0) {
      node.pause_until = t + stream.uniform(params.pause_min, params.pause_max);
      if (node.pause_until <= t) node.pause_until = std::nextafter(t, t_end + 1.0);
      continue;
    }
    const double travel_time = remaining / node.speed;
    if (t + travel_time <= t_end) {
      t += travel_time;
      node.position = node.waypoint;
      node.pause_until = t + stream.uniform(params.pause_min, params.pause_max);
      if (node.pause_until <= t) {
        // Zero pause: draw the next leg immediately.
        node.waypoint = draw_reachable_waypoint(stream, area, node.position);
        node.speed = draw_speed(stream, params);
      }
    } else {
      const double f = (t_end - t) * node.speed / remaining;
      node.position.x += f * (node.waypoint.x - node.position.x);
      node.position.y += f * (node.waypoint.y - node.position.y);
      t = t_end;
    }
  }
  return node;
}

std::vector<NodeId> neighbors(std::span<const Point> positions, const LinkModel& link,
                              const Area& area, NodeId self, std::span<const bool> alive) {
  std::vector<NodeId> out;
  const auto n = static_cast<NodeId>(positions.size());
  auto up = [&](NodeId i) { return alive.empty() || alive[static_cast<std::size_t>(i)]; };
  if (!up(self)) return out;
  for (NodeId j = 0; j < n; ++j) {
    if (j == self || !up(j)) continue;
    if (link.in_range(positions[static_cast<std::size_t>(self)], positions[static_cast<std::size_t>(j)],
                      area)) {
      out.push_back(j);
    }
  }
  return out;
}

std::vector<std::vector<NodeId>> neighbor_graph(std::span<const Point> positions,
                                                const LinkModel& link, const Area& area,
                                                std::span<const bool> alive) {
  const auto n = positions.size();
  std::vector<std::vector<NodeId>> g(n);
  auto up = [&](std::size_t i) { return alive.empty() || alive[i]; };
  for (std::size_t i = 0; i < n; ++i) {
    if (!up(i)) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!up(j)) continue;
      if (link.in_range(positions[i], positions[j], area)) {
        g[i].push_back(static_cast<NodeId>(j));
        g[j].push_back(static_cast<NodeId>(i));
      }
    }
  }
  for (auto& adj : g) std::sort(adj.begin(), adj.end());
  return g;
}

std::vector<int> bfs_hops(const std::vector<std::vector<NodeId>>& graph, NodeId source) {
  std::vector<int> dist(graph.size(), -1);
  std::deque<NodeId> frontier{source};
  dist[static_cast<std::size_t>(source)] = 0;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    for (NodeId v : graph[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        frontier.push_back(v);
      }
    }
  }
  return dist;
}

bool connected(const std::vector<std::vector<NodeId>>& graph) {
  if (graph.empty()) return true;
  const auto d = bfs_hops(graph, 0);
  return std::all_of(d.begin(), d.end(), [](int h) { return h >= 0; });
}

}  // namespace emanet
