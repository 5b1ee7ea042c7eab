#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dre/geometry.hpp"
#include "dre/metrics.hpp"
#include "dre/protocol.hpp"
#include "dre/radio.hpp"

namespace dre {

struct ScenarioConfig;

inline constexpr ReaderId kBroadcast = 0xffffffffu;

enum class EventKind {
  msg_a,
  msg_c,
  beacon,
  collision,
  busy,
  win,
  overriding_frame,
  read_start,
  read_end,
  skip_known,
  release,
  sleep,
  sh,
  isp_merge,
  sense,
  share_send,
  share_receive,
};

std::string_view to_string(EventKind kind);

/// Energy category an event charges, if any.
std::optional<EnergyKind> energy_kind(EventKind kind);

struct Event {
  Micros time{0};
  ReaderId reader = kBroadcast;
  EventKind kind = EventKind::msg_a;
  int slot = 0;
  int channel = 0;
  Micros airtime{0};
  std::uint32_t count = 0;  // tags read / merged, or collision group size

  friend bool operator==(const Event&, const Event&) = default;
};

class EventLog {
 public:
  void record(const Event& e);
  /// Events stably sorted by time; ties keep recording order.
  std::span<const Event> events() const;
  void clear() { events_.clear(); }
  /// One event per line: time_us reader kind slot channel airtime_us count.
  void write(std::ostream& out) const;
  std::string to_text() const;

 private:
  mutable std::vector<Event> events_;
  mutable bool sorted_ = true;
};

/// Rebuilds per-reader airtime from the energy-bearing events only.
EnergyLedger replay_energy(const EventLog& log, std::size_t readers);

/// One reader's hold on a channel. Reads end at a known time; a reader that
/// skips a known field holds the channel until it releases on the next 'C'.
struct Occupancy {
  ReaderId reader = 0;
  int channel = 1;
  Point position;
  Micros start{0};
  std::optional<Micros> end;
};

class ChannelOccupancy {
 public:
  void occupy(ReaderId reader, int channel, const Point& position, Micros start,
              std::optional<Micros> end);
  void release(ReaderId reader, Micros at);
  /// True when some other reader within range holds the channel at time at.
  bool busy(int channel, const Point& position, double range, Micros at, ReaderId self) const;
  /// Drops finished holds from the active set; history keeps everything.
  void prune(Micros now);
  void clear_active() { active_.clear(); }

  std::span<const Occupancy> history() const { return history_; }

 private:
  std::vector<std::size_t> active_;
  std::vector<Occupancy> history_;
};

/// Counts pairs of holds that share a channel, overlap in time and sit within
/// range of each other. Zero means channel exclusivity held.
std::size_t exclusivity_violations(std::span<const Occupancy> history, double range);

struct SimOptions {
  double occupancy_range = 20.0;   // reads on one channel exclude each other within this distance
  double sharing_distance = 20.0;  // DMRCP tag sharing radius
  int dmrcp_cw = 5;
  int dmrcp_windows = 26;
  bool isp_enabled = true;
  WaitingScope waiting_scope = WaitingScope::round;
};

struct PendingRead {
  ReaderId reader = 0;
  int channel = 1;
  Micros end{0};
  std::vector<TagId> tags;
};

struct CompletedRead {
  ReaderId reader = 0;
  Micros end{0};
  std::vector<TagId> tags;
  std::size_t fresh = 0;
};

struct RoundResult {
  std::uint64_t round = 0;
  Micros start{0};
  Micros duration{0};
  std::uint32_t read_ops = 0;
  std::uint32_t successful_reads = 0;
  std::uint32_t skips = 0;
  std::uint32_t collisions = 0;
  std::uint32_t busy = 0;
  std::uint32_t acquisitions = 0;
};

/// Full simulation state. Positions are frozen within a round and move between
/// rounds. Not copyable: the tag grid points into tag_positions.
class World {
 public:
  World() = default;
  World(const World&) = delete;
  World& operator=(const World&) = delete;
  World(World&&) = default;
  World& operator=(World&&) = default;

  Micros clock{0};
  std::uint64_t round = 0;
  std::uint64_t seed = 0;
  int slots = 128;
  int channels = 1;
  Arena arena;
  RadioParams radio;
  TimingParams timing;
  MobilityConfig mobility;
  SimOptions options;
  std::vector<ReaderState> readers;
  std::vector<WaypointState> waypoints;
  std::vector<Point> tag_positions;
  ChannelOccupancy occupancy;
  IspStore isp;
  EnergyLedger ledger;
  std::unique_ptr<WaitingTracker> waiting;
  std::vector<PendingRead> reads_in_flight;
  EventLog* log = nullptr;

  /// Sets tag positions and rebuilds the spatial index.
  void set_tags(std::vector<Point> positions);
  /// Sets reader positions and resets all per-reader state.
  void set_readers(std::span<const Point> positions);

  std::vector<TagId> tags_in_range(const Point& reader) const;
  std::vector<Point> reader_positions() const;

  /// Charges airtime to the ledger and logs the event.
  void charge(const Event& e);
  void note(const Event& e);

  /// Reader-private stream for the current round.
  Rng stream(ReaderId reader, std::uint64_t purpose) const;

 private:
  std::unique_ptr<PointGrid> tag_grid_;
};

/// Starts a read that holds the channel from hold_start until the read ends.
void start_read(World& world, ReaderId reader, int channel, Micros hold_start, Micros read_start,
                std::vector<TagId> tags, int slot);

/// Finishes every read ending at or before now. Order is (end time, reader id).
/// on_done runs after each completion, before the next one is applied.
std::vector<CompletedRead> complete_reads(World& world, Micros now, const Protocol* protocol,
                                          const std::function<void(const CompletedRead&)>& on_done = {});

/// Estimated distance between two readers from the interference model.
double estimate_pair_distance(const World& world, ReaderId a, ReaderId b, Rng& rng);

/// One server-orchestrated round: A, MN x (C + slot), read tail, end frame,
/// ISP exchange, mobility step.
RoundResult run_round(World& world, const Protocol& protocol);

/// Between-round bookkeeping shared by every protocol.
void finish_round(World& world, RoundResult& result);

std::unique_ptr<Protocol> make_protocol(const ScenarioConfig& config);

World make_world(const ScenarioConfig& config);

/// Runs every configured round. Identical config and seed give identical output.
MetricsReport run_simulation(const ScenarioConfig& config, EventLog* log = nullptr);

}  // namespace dre
