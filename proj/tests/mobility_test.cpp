#include <gtest/gtest.h>

#include <cmath>

#include "emanet/mobility.hpp"

using namespace emanet;

TEST(Waypoint, StaysInUnitSquare) {
  Area area{1.0, 1.0, {}};
  RandomStream rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto p = sample_waypoint(rng, area);
    ASSERT_TRUE(area.inside(p));
  }
}

TEST(Waypoint, AvoidsObstacle) {
  Area area{100.0, 100.0, {Rect{0, 0, 50, 100}}};
  RandomStream rng(7);
  for (int i = 0; i < 10000; ++i) {
    const auto p = sample_waypoint(rng, area);
    ASSERT_GT(p.x, 50.0);
    ASSERT_LE(p.x, 100.0);
  }
}

TEST(Waypoint, SameSeedSameSequence) {
  Area area;
  RandomStream a(3), b(3);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sample_waypoint(a, area), sample_waypoint(b, area));
}

TEST(Waypoint, RejectsBadAreas) {
  EXPECT_THROW((Area{100, 100, {Rect{0, 0, 100, 100}}}.validate()), MobilityError);
  EXPECT_THROW((Area{100, 100, {Rect{50, 50, 150, 60}}}.validate()), MobilityError);
  EXPECT_THROW((Area{0, 100, {}}.validate()), MobilityError);
}

TEST(Kinematics, MovesAlongStraightLine) {
  Area area{100, 100, {}};
  MobilityParams params{1.0, 1.0, 0.0, 0.0, 0.5};
  NodeKinematics k{{0, 0}, {10, 0}, 1.0, 0.0};
  RandomStream rng(1);
  const auto next = advance(k, 0.0, 3.0, rng, area, params);
  EXPECT_NEAR(next.position.x, 3.0, 1e-12);
  EXPECT_NEAR(next.position.y, 0.0, 1e-12);
}

TEST(Kinematics, ArrivalStartsPause) {
  Area area{100, 100, {}};
  MobilityParams params{1.0, 1.0, 4.0, 4.0, 0.5};
  NodeKinematics k{{0, 0}, {10, 0}, 1.0, 0.0};
  RandomStream rng(1);
  const auto next = advance(k, 0.0, 10.0, rng, area, params);
  EXPECT_EQ(next.position, (Point{10, 0}));
  EXPECT_NEAR(next.pause_until, 14.0, 1e-9);
}

TEST(Kinematics, StationaryNeverMoves) {
  Area area;
  MobilityParams params{0.0, 0.0, 0.0, 10.0, 0.5};
  RandomStream rng(5);
  auto k = initial_kinematics(rng, area, params, {123, 456});
  for (int i = 0; i < 100; ++i) k = advance(k, i * 7.0, 7.0, rng, area, params);
  EXPECT_EQ(k.position, (Point{123, 456}));
}

TEST(Links, StrictRadius) {
  Area area{100, 100, {}};
  LinkModel link{10.0};
  std::vector<Point> close = {{0, 0}, {5, 0}};
  EXPECT_EQ(neighbors(close, link, area, 0), std::vector<NodeId>{1});
  EXPECT_EQ(neighbors(close, link, area, 1), std::vector<NodeId>{0});
  std::vector<Point> far = {{0, 0}, {10.01, 0}};
  EXPECT_TRUE(neighbors(far, link, area, 0).empty());
  EXPECT_TRUE(neighbors(far, link, area, 1).empty());
}

TEST(Links, ObstacleBlocksRadio) {
  Area area{100, 100, {Rect{4, -1, 6, 1}}};
  LinkModel link{50.0};
  std::vector<Point> pts = {{0, 0}, {10, 0}, {0, 10}};
  EXPECT_EQ(neighbors(pts, link, area, 0), std::vector<NodeId>{2});
}

TEST(Links, GridIsFourConnected) {
  Area area{100, 100, {}};
  LinkModel link{10.0};
  std::vector<Point> pts;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) pts.push_back({10.0 + 10.0 * c, 10.0 + 10.0 * r});
  }
  const auto graph = neighbor_graph(pts, link, area);
  // Brute-force distance matrix.
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<NodeId> expect;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double d = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
      if (i != j && d <= 10.0) expect.push_back(static_cast<NodeId>(j));
    }
    EXPECT_EQ(graph[i], expect) << "node " << i;
    const std::size_t r = i / 3, c = i % 3;
    EXPECT_EQ(graph[i].size(), (r > 0) + (r < 2) + (c > 0) + (c < 2));
  }
}

TEST(Links, BfsAndConnectivity) {
  std::vector<std::vector<NodeId>> chain = {{1}, {0, 2}, {1}, {}};
  EXPECT_EQ(bfs_hops(chain, 0), (std::vector<int>{0, 1, 2, -1}));
  EXPECT_FALSE(connected(chain));
  chain[3] = {2};
  chain[2].push_back(3);
  EXPECT_TRUE(connected(chain));
}
