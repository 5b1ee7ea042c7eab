#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dre/geometry.hpp"

namespace dre {

using ReaderId = std::uint32_t;

/// Homogeneous reader radio parameters.
struct RadioParams {
  double p_reader = 2.3;            // W, transmission power (EIRP)
  double g_reader = 1.0;            // antenna gain, same at both ends
  double k0 = 1.0;                  // path-loss / power-ratio coefficient
  double path_loss_exponent = 2.0;  // alpha
  double interference_noise = 0.0;  // relative multiplicative noise on I_R, 0 = exact

  void validate() const;
  friend bool operator==(const RadioParams&, const RadioParams&) = default;
};

/// I_R = P_R G_R1 G_R2 / (K_0 D^alpha). Throws for D <= 0.
double received_interference(const RadioParams& params, double true_distance);

/// D = (P_R G_R1 G_R2 / (K_0 I_R))^(1/alpha). Throws for I_R <= 0.
double estimate_distance(const RadioParams& params, double interference);

struct BeaconEvent {
  ReaderId reader = 0;
  int slot = 1;
  int channel = 1;
};

using CollisionGroup = std::vector<BeaconEvent>;

/// Groups same-slot beacons. Beacons on different channels never share a group;
/// on one channel, groups are connected components of the interference graph.
/// Groups are sorted by their lowest reader id and members by id, so the result
/// does not depend on input order. positions is indexed by reader id.
std::vector<CollisionGroup> detect_beacon_collisions(std::span<const BeaconEvent> beacons,
                                                     std::span<const Point> positions,
                                                     const Arena& arena);

}  // namespace dre
