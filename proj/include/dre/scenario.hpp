#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dre/engine.hpp"
#include "dre/geometry.hpp"
#include "dre/metrics.hpp"
#include "dre/protocol.hpp"
#include "dre/radio.hpp"

namespace dre {

/// Complete description of one simulation run.
struct ScenarioConfig {
  std::string name;  // scenario label, not part of the config file
  ProtocolKind protocol = ProtocolKind::ierap;
  int readers = 100;
  int tags = 1000;
  int channels = 4;
  int slots = 128;   // MN
  int rounds = 128;
  std::uint64_t seed = 1;
  Arena arena;
  MobilityConfig mobility;
  TimingParams timing;
  RadioParams radio;
  PowerParams powers;
  WaitingScope waiting_scope = WaitingScope::round;
  std::optional<double> occupancy_range;   // default 2 x read_range
  std::optional<double> sharing_distance;  // default 2 x read_range
  std::optional<int> sift_m;               // default MN
  double gdra_p = 0.5;
  int dmrcp_cw = 5;
  std::optional<int> dmrcp_windows;  // default ceil(MN / CW)
  bool isp = true;

  double effective_occupancy_range() const { return occupancy_range.value_or(2.0 * arena.read_range); }
  double effective_sharing_distance() const { return sharing_distance.value_or(2.0 * arena.read_range); }
  int effective_sift_m() const { return sift_m.value_or(slots); }
  int effective_dmrcp_windows() const { return dmrcp_windows.value_or((slots + dmrcp_cw - 1) / dmrcp_cw); }

  /// Throws ConfigError on any invariant violation.
  void validate() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys, bad values and
/// invariant violations raise ConfigError naming the line.
ScenarioConfig parse_config(std::string_view text);

/// Writes every key so that parse_config(render_config(c)) == c.
std::string render_config(const ScenarioConfig& config);

/// Runs and variants behind each evaluation scenario, all at one reader count.
std::vector<ScenarioConfig> preset(std::string_view name, int readers);

/// Header plus one row per report sorted by (protocol, readers, channels, seed);
/// numbers carry six significant digits.
std::string emit_csv(std::span<const MetricsReport> reports);

/// Distribution table: k, P_k, cumulative.
std::string distribution_csv(int slots, int max_competitors);

/// Runs configs on up to `threads` workers (0 = hardware concurrency). Results
/// come back in input order.
std::vector<MetricsReport> run_batch(std::span<const ScenarioConfig> configs, unsigned threads);

/// Worker count from DRE_SIM_THREADS, 0 when unset.
unsigned threads_from_env();

/// Formats a double with six significant digits, locale independent.
std::string format_number(double value);

}  // namespace dre
