#include "dre/radio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dre {

void RadioParams::validate() const {
  if (!(p_reader > 0.0) || !(g_reader > 0.0) || !(k0 > 0.0))
    throw std::invalid_argument("radio powers, gains and k0 must be positive");
  if (!(path_loss_exponent >= 1.0))
    throw std::invalid_argument("path_loss_exponent must be >= 1");
  if (!(interference_noise >= 0.0 && interference_noise < 1.0))
    throw std::invalid_argument("interference_noise must be in [0, 1)");
}

double received_interference(const RadioParams& params, double true_distance) {
  if (!(true_distance > 0.0)) throw std::invalid_argument("received_interference: distance must be positive");
  return params.p_reader * params.g_reader * params.g_reader /
         (params.k0 * std::pow(true_distance, params.path_loss_exponent));
}

double estimate_distance(const RadioParams& params, double interference) {
  if (!(interference > 0.0)) throw std::invalid_argument("estimate_distance: interference must be positive");
  const double d_pow = params.p_reader * params.g_reader * params.g_reader / (params.k0 * interference);
  return std::pow(d_pow, 1.0 / params.path_loss_exponent);
}

namespace {

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::vector<CollisionGroup> detect_beacon_collisions(std::span<const BeaconEvent> beacons,
                                                     std::span<const Point> positions,
                                                     const Arena& arena) {
  std::vector<BeaconEvent> sorted(beacons.begin(), beacons.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const BeaconEvent& a, const BeaconEvent& b) { return a.reader < b.reader; });

  DisjointSet sets(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (sorted[i].channel != sorted[j].channel || sets.find(i) == sets.find(j)) continue;
      if (in_interference_range(positions[sorted[i].reader], positions[sorted[j].reader], arena))
        sets.unite(i, j);
    }
  }

  // Roots are the lowest index of each component, i.e. the lowest reader id.
  std::vector<CollisionGroup> groups;
  std::vector<std::size_t> slot_of(sorted.size(), 0);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const std::size_t root = sets.find(i);
    if (root == i) {
      slot_of[i] = groups.size();
      groups.emplace_back();
    }
    groups[slot_of[root]].push_back(sorted[i]);
  }
  return groups;
}

}  // namespace dre
