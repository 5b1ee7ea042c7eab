#include "dre/sift.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dre {

SlotDistribution SlotDistribution::from_weights(std::vector<double> weights, double alpha) {
  if (weights.empty()) throw std::invalid_argument("slot distribution needs at least one slot");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  SlotDistribution d;
  d.alpha = alpha;
  d.probabilities.reserve(weights.size());
  for (double w : weights) d.probabilities.push_back(w / total);
  d.cumulative.resize(weights.size());
  std::partial_sum(d.probabilities.begin(), d.probabilities.end(), d.cumulative.begin());
  d.cumulative.back() = 1.0;
  return d;
}

SlotDistribution uniform_distribution(int slots) {
  if (slots < 1) throw std::invalid_argument("uniform_distribution: K must be >= 1");
  return SlotDistribution::from_weights(std::vector<double>(static_cast<std::size_t>(slots), 1.0));
}

SlotDistribution sift_distribution(int slots, int max_competitors) {
  if (slots < 1) throw std::invalid_argument("sift_distribution: K must be >= 1");
  if (max_competitors < 1) throw std::invalid_argument("sift_distribution: M must be >= 1");
  if (slots == 1 || max_competitors == 1) return uniform_distribution(slots);

  const double k_total = slots;
  const double alpha = std::pow(static_cast<double>(max_competitors), -1.0 / (k_total - 1.0));
  // Evaluated as a^(K-k) to keep every term in (0, 1].
  const double coeff = (1.0 - alpha) / (1.0 - std::pow(alpha, k_total));
  std::vector<double> w(static_cast<std::size_t>(slots));
  for (int k = 1; k <= slots; ++k) w[static_cast<std::size_t>(k - 1)] = coeff * std::pow(alpha, k_total - k);
  return SlotDistribution::from_weights(std::move(w), alpha);
}

SlotDistribution pstar_distribution(int slots, int competitors) {
  if (slots < 1) throw std::invalid_argument("pstar_distribution: K must be >= 1");
  if (competitors < 2) throw std::invalid_argument("pstar_distribution: R must be >= 2");
  if (slots == 1) return uniform_distribution(1);

  const double r = competitors;
  // f[n] for n = 1..K-1, with f_1 = 0 and f_n = ((R-1)/(R - f_{n-1}))^(R-1).
  std::vector<double> f(static_cast<std::size_t>(slots), 0.0);
  for (int n = 2; n < slots; ++n) f[static_cast<std::size_t>(n)] = std::pow((r - 1.0) / (r - f[static_cast<std::size_t>(n - 1)]), r - 1.0);

  std::vector<double> p(static_cast<std::size_t>(slots), 0.0);
  double remaining = 1.0;
  for (int k = 1; k < slots; ++k) {
    const double fk = f[static_cast<std::size_t>(slots - k)];
    p[static_cast<std::size_t>(k - 1)] = (1.0 - fk) / (r - fk) * remaining;
    remaining -= p[static_cast<std::size_t>(k - 1)];
  }
  p.back() = std::max(0.0, remaining);
  return SlotDistribution::from_weights(std::move(p));
}

SlotDistribution truncated_geometric(int slots, double p) {
  if (slots < 1) throw std::invalid_argument("truncated_geometric: K must be >= 1");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("truncated_geometric: p must be in (0, 1]");
  std::vector<double> w(static_cast<std::size_t>(slots));
  for (int k = 1; k <= slots; ++k) w[static_cast<std::size_t>(k - 1)] = p * std::pow(1.0 - p, k - 1);
  return SlotDistribution::from_weights(std::move(w));
}

int sample_slot(const SlotDistribution& dist, Rng& rng) {
  const double u = rng.uniform01();
  auto it = std::upper_bound(dist.cumulative.begin(), dist.cumulative.end(), u);
  if (it == dist.cumulative.end()) --it;
  return static_cast<int>(it - dist.cumulative.begin()) + 1;
}

double win_probability(const SlotDistribution& dist, int competitors) {
  if (competitors < 1) throw std::invalid_argument("win_probability: R must be >= 1");
  const int k_total = dist.slots();
  double sum = 0.0;
  double cum = 0.0;
  for (int k = 1; k < k_total; ++k) {
    const double pk = dist.p(k);
    cum += pk;
    const double tail = std::max(0.0, 1.0 - cum);
    sum += pk * std::pow(tail, competitors - 1);
  }
  return std::clamp(competitors * sum, 0.0, 1.0);
}

double win_probability(int slots, int max_competitors, int competitors) {
  if (slots < 2) throw std::invalid_argument("win_probability: K must be >= 2");
  return win_probability(sift_distribution(slots, max_competitors), competitors);
}

}  // namespace dre
