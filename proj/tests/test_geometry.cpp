#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dre/geometry.hpp"

using namespace dre;

TEST_CASE("distance basics") {
  CHECK(euclidean_distance({0, 0}, {3, 4}) == 5.0);
  CHECK(euclidean_distance({1, 1}, {1, 1}) == 0.0);
}

TEST_CASE("distance is symmetric and obeys the triangle inequality") {
  Rng r(5);
  for (int i = 0; i < 2000; ++i) {
    const Point a{r.uniform(-500, 500), r.uniform(-500, 500)};
    const Point b{r.uniform(-500, 500), r.uniform(-500, 500)};
    const Point c{r.uniform(-500, 500), r.uniform(-500, 500)};
    CHECK(euclidean_distance(a, b) == euclidean_distance(b, a));
    CHECK(euclidean_distance(a, c) <= euclidean_distance(a, b) + euclidean_distance(b, c) + 1e-9);
  }
}

TEST_CASE("ranges are inclusive and read range implies interference range") {
  Arena arena;
  CHECK(in_read_range({0, 0}, {10, 0}, arena));
  CHECK_FALSE(in_read_range({0, 0}, {10.0001, 0}, arena));
  CHECK(in_interference_range({0, 0}, {1000, 0}, arena));
  CHECK_FALSE(in_interference_range({0, 0}, {1000.5, 0}, arena));
  Rng r(9);
  for (int i = 0; i < 1000; ++i) {
    const Point a{r.uniform(0, 30), r.uniform(0, 30)};
    const Point b{r.uniform(0, 30), r.uniform(0, 30)};
    if (in_read_range(a, b, arena)) CHECK(in_interference_range(a, b, arena));
  }
}

TEST_CASE("arena validation") {
  Arena a;
  CHECK_NOTHROW(a.validate());
  a.read_range = 2000;
  CHECK_THROWS(a.validate());
  a = Arena{};
  a.side_x = 0;
  CHECK_THROWS(a.validate());
  const Arena lit = Arena::literal_square();
  CHECK(lit.side_x * lit.side_y == doctest::Approx(1000.0));
}

TEST_CASE("uniform placement is in bounds and seed-determined") {
  Arena arena;
  arena.side_x = 50;
  arena.side_y = 20;
  Rng a(1), b(1);
  const auto pa = place_uniform(500, arena, a);
  const auto pb = place_uniform(500, arena, b);
  CHECK(pa == pb);
  for (const Point& p : pa) {
    CHECK(p.x >= 0);
    CHECK(p.x <= 50);
    CHECK(p.y >= 0);
    CHECK(p.y <= 20);
  }
  Rng c(1);
  CHECK(place_uniform(0, arena, c).empty());
}

TEST_CASE("static mobility returns its input, negative dt is rejected") {
  Arena arena;
  Rng rng(2);
  std::vector<Point> pos{{1, 2}, {3, 4}};
  std::vector<WaypointState> st(2);
  MobilityConfig cfg;
  CHECK(step_mobility(pos, st, cfg, 10.0, arena, rng) == pos);
  cfg.model = MobilityModel::random_waypoint;
  CHECK(step_mobility(pos, st, cfg, 0.0, arena, rng) == pos);
  CHECK_THROWS(step_mobility(pos, st, cfg, -1.0, arena, rng));
}

TEST_CASE("random waypoint stays inside the arena and moves at bounded speed") {
  Arena arena;
  arena.side_x = 40;
  arena.side_y = 25;
  MobilityConfig cfg;
  cfg.model = MobilityModel::random_waypoint;
  cfg.speed_min = 1;
  cfg.speed_max = 3;
  cfg.pause = 0.5;
  Rng rng(77);
  std::vector<Point> pos = place_uniform(30, arena, rng);
  std::vector<WaypointState> st(pos.size());
  bool moved = false;
  for (int step = 0; step < 500; ++step) {
    const double dt = 0.9;
    auto next = step_mobility(pos, st, cfg, dt, arena, rng);
    for (std::size_t i = 0; i < pos.size(); ++i) {
      REQUIRE(next[i].x >= 0);
      REQUIRE(next[i].x <= arena.side_x);
      REQUIRE(next[i].y >= 0);
      REQUIRE(next[i].y <= arena.side_y);
      CHECK(euclidean_distance(pos[i], next[i]) <= cfg.speed_max * dt + 1e-9);
      moved |= !(next[i] == pos[i]);
    }
    pos = std::move(next);
  }
  CHECK(moved);
}

TEST_CASE("point grid agrees with a brute-force scan") {
  Arena arena;
  arena.side_x = 200;
  arena.side_y = 120;
  Rng rng(31);
  const auto pts = place_uniform(3000, arena, rng);
  PointGrid grid(pts, arena, 10.0);
  for (int q = 0; q < 200; ++q) {
    const Point c{rng.uniform(-10, 210), rng.uniform(-10, 130)};
    const double radius = rng.uniform(0, 35);
    std::vector<std::size_t> brute;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (euclidean_distance(pts[i], c) <= radius) brute.push_back(i);
    CHECK(grid.within(c, radius) == brute);
  }
}
