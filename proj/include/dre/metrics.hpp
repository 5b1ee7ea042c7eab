#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dre/protocol.hpp"

namespace dre {

struct PowerParams {
  double p_send = 2.3;     // W
  double p_receive = 0.5;  // W
  double p_read = 2.3;     // W
  // Sleeping readers draw nothing.

  void validate() const;
  friend bool operator==(const PowerParams&, const PowerParams&) = default;
};

// E = P x T.
double energy_send(double power_w, double seconds);
double energy_receive(double power_w, double seconds);
double energy_read(double power_w, double seconds);

enum class EnergyKind { send, receive, read };

struct ReaderAirtime {
  Micros send{0};
  Micros receive{0};
  Micros read{0};
};

/// Per-reader airtime by category. Time is kept in integer microseconds so an
/// independent replay of the event log reproduces the totals bit for bit.
class EnergyLedger {
 public:
  explicit EnergyLedger(std::size_t readers = 0) : airtime_(readers) {}

  void charge(ReaderId reader, EnergyKind kind, Micros airtime);
  const ReaderAirtime& airtime(ReaderId reader) const { return airtime_.at(reader); }
  std::size_t readers() const { return airtime_.size(); }

 private:
  std::vector<ReaderAirtime> airtime_;
};

/// E_read + E_send + E_receive for one reader.
double reader_energy(const EnergyLedger& ledger, ReaderId reader, const PowerParams& powers);

/// Sum of reader_energy over all readers.
double network_energy(const EnergyLedger& ledger, const PowerParams& powers);

enum class WaitingScope { round, global };

/// Time from the start of each round to the reader's first acquisition of a tag
/// id it did not already hold. Rounds with no acquisition count in full. The
/// global scope instead measures gaps between consecutive acquisitions.
class WaitingTracker {
 public:
  WaitingTracker(std::size_t readers, WaitingScope scope);

  void begin_round(Micros start);
  void acquired(ReaderId reader, Micros at);
  void end_round(Micros end);
  /// Closes the trailing gaps in global scope.
  void finish(Micros end);

  double mean_seconds() const;
  WaitingScope scope() const { return scope_; }

 private:
  WaitingScope scope_;
  Micros round_start_{0};
  std::vector<std::optional<Micros>> first_in_round_;
  std::vector<Micros> last_acquired_;
  long double total_{0};
  std::uint64_t samples_ = 0;
};

struct RoundMetrics {
  std::uint64_t round = 0;
  double duration_s = 0.0;
  std::uint32_t read_ops = 0;
  std::uint32_t successful_reads = 0;
  std::uint32_t skips = 0;
  std::uint32_t collisions = 0;
};

struct MetricsReport {
  std::string scenario;
  ProtocolKind protocol = ProtocolKind::ierap;
  int readers = 0;
  int channels = 1;
  std::uint64_t seed = 0;
  int rounds = 0;
  std::uint64_t read_ops = 0;
  std::uint64_t successful_reads = 0;
  double elapsed_s = 0.0;
  double throughput_rps = 0.0;
  std::uint64_t unique_tags_known = 0;
  double avg_waiting_time_s = 0.0;
  double network_energy_j = 0.0;
  std::vector<double> reader_energy_j;
  std::vector<RoundMetrics> per_round;
};

/// Successful read operations per simulated second, overhead included.
double throughput(std::uint64_t successful_reads, double elapsed_s);

}  // namespace dre
