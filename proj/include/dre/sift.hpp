#pragma once

#include <vector>

#include "dre/rng.hpp"

namespace dre {

/// Probability mass over contention slots 1..K. probabilities[0] is slot 1.
struct SlotDistribution {
  std::vector<double> probabilities;
  std::vector<double> cumulative;
  double alpha = 1.0;

  int slots() const { return static_cast<int>(probabilities.size()); }
  double p(int slot) const { return probabilities.at(static_cast<std::size_t>(slot - 1)); }

  static SlotDistribution from_weights(std::vector<double> weights, double alpha = 1.0);
};

SlotDistribution uniform_distribution(int slots);

/// SIFT distribution P_k = (1-a) a^K / (1 - a^K) * a^-k with a = M^(-1/(K-1)).
/// K = 1 or M = 1 gives the uniform limit 1/K.
SlotDistribution sift_distribution(int slots, int max_competitors);

/// CSMA/p* distribution for a known competitor count R >= 2. The recursion
/// leaves the last slot undefined, so it takes the residual mass.
SlotDistribution pstar_distribution(int slots, int competitors);

/// Geometric(p) truncated to [1, K]; GDRA's slot picker.
SlotDistribution truncated_geometric(int slots, double p);

/// Inverse-CDF draw, returns a slot in [1, K].
int sample_slot(const SlotDistribution& dist, Rng& rng);

/// Probability that exactly one of R readers drawing from sift_distribution(K, M)
/// holds the strict minimum slot:
///   R * sum_{k=1}^{K-1} P_k (1 - sum_{z=1}^{k} P_z)^(R-1)
/// The printed form carries sum_{z=1}^{K} inside the bracket, which is identically 1
/// and zeroes the expression for every R >= 2; the inner bound here is k.
double win_probability(int slots, int max_competitors, int competitors);

/// Same quantity for an arbitrary slot distribution.
double win_probability(const SlotDistribution& dist, int competitors);

}  // namespace dre
