#pragma once

#include <span>
#include <vector>

#include "dre/rng.hpp"

namespace dre {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Rectangular deployment area and the two reader ranges (meters).
struct Arena {
  double side_x = 1000.0;
  double side_y = 1000.0;
  double read_range = 10.0;
  double interference_range = 1000.0;

  /// Throws std::invalid_argument when sides or ranges are out of order.
  void validate() const;

  /// 1000 square meters taken literally: a square of side sqrt(1000).
  static Arena literal_square();

  friend bool operator==(const Arena&, const Arena&) = default;
};

enum class MobilityModel { static_readers, random_waypoint };

struct MobilityConfig {
  MobilityModel model = MobilityModel::static_readers;
  double speed_min = 1.0;  // m/s
  double speed_max = 3.0;  // m/s
  double pause = 0.0;      // s

  void validate() const;
  friend bool operator==(const MobilityConfig&, const MobilityConfig&) = default;
};

/// Private random-waypoint state of one reader.
struct WaypointState {
  Point target;
  double speed = 0.0;
  double pause_left = 0.0;
  bool assigned = false;
};

double euclidean_distance(const Point& a, const Point& b);

std::vector<Point> place_uniform(std::size_t n, const Arena& arena, Rng& rng);

/// Advances every reader by dt seconds. Static model returns the input.
std::vector<Point> step_mobility(std::span<const Point> positions,
                                 std::span<WaypointState> state,
                                 const MobilityConfig& config, double dt,
                                 const Arena& arena, Rng& rng);

// Both ranges are inclusive at the boundary.
bool in_read_range(const Point& reader, const Point& tag, const Arena& arena);
bool in_interference_range(const Point& r1, const Point& r2, const Arena& arena);

/// Uniform bucket grid over static points for radius queries.
class PointGrid {
 public:
  PointGrid(std::span<const Point> points, const Arena& arena, double cell);

  /// Indices of points within radius of center (inclusive), ascending.
  std::vector<std::size_t> within(const Point& center, double radius) const;

 private:
  std::span<const Point> points_;
  double cell_;
  int nx_;
  int ny_;
  std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace dre
