#include "dre/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dre {

void Arena::validate() const {
  if (!(side_x > 0.0) || !(side_y > 0.0))
    throw std::invalid_argument("arena sides must be positive");
  if (!(read_range > 0.0))
    throw std::invalid_argument("read_range must be positive");
  if (!(read_range <= interference_range))
    throw std::invalid_argument("read_range must not exceed interference_range");
}

Arena Arena::literal_square() {
  Arena a;
  a.side_x = std::sqrt(1000.0);
  a.side_y = std::sqrt(1000.0);
  return a;
}

void MobilityConfig::validate() const {
  if (!(speed_min >= 0.0) || !(speed_min <= speed_max))
    throw std::invalid_argument("mobility speeds must satisfy 0 <= speed_min <= speed_max");
  if (!(pause >= 0.0)) throw std::invalid_argument("mobility pause must be nonnegative");
}

double euclidean_distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::vector<Point> place_uniform(std::size_t n, const Arena& arena, Rng& rng) {
  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = rng.uniform(0.0, arena.side_x);
    const double y = rng.uniform(0.0, arena.side_y);
    out.push_back({x, y});
  }
  return out;
}

namespace {

Point clamp_to(const Point& p, const Arena& arena) {
  return {std::clamp(p.x, 0.0, arena.side_x), std::clamp(p.y, 0.0, arena.side_y)};
}

void assign_waypoint(WaypointState& s, const MobilityConfig& config, const Arena& arena,
                     Rng& rng) {
  s.target.x = rng.uniform(0.0, arena.side_x);
  s.target.y = rng.uniform(0.0, arena.side_y);
  s.speed = config.speed_min == config.speed_max
                ? config.speed_min
                : rng.uniform(config.speed_min, config.speed_max);
  s.pause_left = 0.0;
  s.assigned = true;
}

}  // namespace

std::vector<Point> step_mobility(std::span<const Point> positions,
                                 std::span<WaypointState> state,
                                 const MobilityConfig& config, double dt,
                                 const Arena& arena, Rng& rng) {
  if (dt < 0.0) throw std::invalid_argument("step_mobility: negative dt");
  std::vector<Point> out(positions.begin(), positions.end());
  if (config.model == MobilityModel::static_readers || dt == 0.0) return out;
  if (state.size() != positions.size())
    throw std::invalid_argument("step_mobility: state/positions size mismatch");

  for (std::size_t i = 0; i < out.size(); ++i) {
    WaypointState& s = state[i];
    Point p = out[i];
    double left = dt;
    // A reader that reaches its waypoint pauses, then heads for a fresh one.
    for (int guard = 0; left > 0.0 && guard < 64; ++guard) {
      if (!s.assigned) assign_waypoint(s, config, arena, rng);
      if (s.pause_left > 0.0) {
        const double used = std::min(left, s.pause_left);
        s.pause_left -= used;
        left -= used;
        if (s.pause_left <= 0.0) s.assigned = false;
        continue;
      }
      if (s.speed <= 0.0) break;
      const double dist = euclidean_distance(p, s.target);
      const double reach = s.speed * left;
      if (reach < dist) {
        p.x += (s.target.x - p.x) * (reach / dist);
        p.y += (s.target.y - p.y) * (reach / dist);
        left = 0.0;
      } else {
        p = s.target;
        left -= dist / s.speed;
        if (config.pause > 0.0) {
          s.pause_left = config.pause;
        } else {
          s.assigned = false;
        }
      }
    }
    out[i] = clamp_to(p, arena);
  }
  return out;
}

bool in_read_range(const Point& reader, const Point& tag, const Arena& arena) {
  return euclidean_distance(reader, tag) <= arena.read_range;
}

bool in_interference_range(const Point& r1, const Point& r2, const Arena& arena) {
  return euclidean_distance(r1, r2) <= arena.interference_range;
}

PointGrid::PointGrid(std::span<const Point> points, const Arena& arena, double cell)
    : points_(points), cell_(cell > 0.0 ? cell : 1.0) {
  nx_ = std::max(1, static_cast<int>(std::ceil(arena.side_x / cell_)));
  ny_ = std::max(1, static_cast<int>(std::ceil(arena.side_y / cell_)));
  buckets_.resize(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_));
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const int cx = std::clamp(static_cast<int>(points_[i].x / cell_), 0, nx_ - 1);
    const int cy = std::clamp(static_cast<int>(points_[i].y / cell_), 0, ny_ - 1);
    buckets_[static_cast<std::size_t>(cy) * nx_ + cx].push_back(i);
  }
}

std::vector<std::size_t> PointGrid::within(const Point& center, double radius) const {
  std::vector<std::size_t> out;
  const int x0 = std::clamp(static_cast<int>(std::floor((center.x - radius) / cell_)), 0, nx_ - 1);
  const int x1 = std::clamp(static_cast<int>(std::floor((center.x + radius) / cell_)), 0, nx_ - 1);
  const int y0 = std::clamp(static_cast<int>(std::floor((center.y - radius) / cell_)), 0, ny_ - 1);
  const int y1 = std::clamp(static_cast<int>(std::floor((center.y + radius) / cell_)), 0, ny_ - 1);
  for (int cy = y0; cy <= y1; ++cy) {
    for (int cx = x0; cx <= x1; ++cx) {
      for (std::size_t i : buckets_[static_cast<std::size_t>(cy) * nx_ + cx]) {
        if (euclidean_distance(center, points_[i]) <= radius) out.push_back(i);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dre
