#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "dre/geometry.hpp"
#include "dre/radio.hpp"
#include "dre/rng.hpp"

namespace dre {

using Micros = std::chrono::microseconds;
using TagId = std::uint32_t;

inline double to_seconds(Micros t) { return static_cast<double>(t.count()) / 1e6; }

/// Raised when a protocol or the engine breaks the round contract.
class SimulationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ProtocolKind { ierap, nfra, gdra, frca1, frca2, dmrcp };

std::string_view to_string(ProtocolKind kind);
std::optional<ProtocolKind> parse_protocol(std::string_view name);

/// Airtimes of every frame in the comparison. Defaults follow the published
/// simulation table; the 'A' / AC / SO frames are taken as 2.83 ms.
struct TimingParams {
  Micros slot{5000};
  Micros read{460000};
  Micros beacon{300};
  Micros msg_a{2830};
  Micros msg_c{2000};
  Micros msg_sh{1000};
  Micros oc{1000};             // NFRA / GDRA / FRCA per-slot ordering command
  Micros overriding_frame{300};  // NFRA OF, sent by a winner before reading
  Micros eo{1000};             // FRCA end-of-round frame
  Micros dmrcp_beacon{5000};   // DMRCP contention beacon, also its backoff slot
  int slots_per_round = 128;   // MN

  void validate() const;
  friend bool operator==(const TimingParams&, const TimingParams&) = default;
};

// Server frames.
struct MsgA {
  int max_slot = 1;     // MN
  int max_channel = 1;  // F
};
struct MsgC {
  int slot = 1;  // p
};
struct MsgSH {};

using ServerMessage = std::variant<MsgA, MsgC, MsgSH>;

/// Throws SimulationFault when a frame violates its field invariants.
void validate_message(const ServerMessage& msg);

/// Dense set of tag ids in [0, universe).
class TagSet {
 public:
  TagSet() = default;
  explicit TagSet(std::size_t universe) : bits_(universe, false) {}

  bool contains(TagId id) const { return id < bits_.size() && bits_[id]; }
  bool insert(TagId id);
  std::size_t size() const { return count_; }
  std::size_t universe() const { return bits_.size(); }
  bool contains_all(std::span<const TagId> ids) const;

 private:
  std::vector<bool> bits_;
  std::size_t count_ = 0;
};

struct IspRecord {
  TagId tag = 0;
  ReaderId reporter = 0;
  std::uint32_t s_count = 1;
};

/// Per-round information-sharing bulletin. Records are accepted until the SH
/// frame closes the store; clear() opens it for the next round.
class IspStore {
 public:
  void publish(const IspRecord& record);
  void close() { closed_ = true; }
  void clear();
  bool closed() const { return closed_; }
  bool empty() const { return records_.empty(); }
  std::span<const IspRecord> records() const { return records_; }
  /// Distinct tag ids across all records, in first-published order.
  std::span<const TagId> tags() const { return tags_; }
  /// Highest published S per reporter, in first-published order.
  std::span<const std::pair<ReaderId, std::uint32_t>> reporters() const { return reporters_; }

 private:
  std::vector<IspRecord> records_;
  std::vector<TagId> tags_;
  std::vector<std::pair<ReaderId, std::uint32_t>> reporters_;
  std::unordered_set<std::uint64_t> pairs_;
  std::unordered_set<TagId> tag_seen_;
  bool closed_ = false;
};

enum class ReaderMode { idle, contending, reading, leaving, asleep };

std::string_view to_string(ReaderMode mode);

/// One reader's protocol state. Baselines reuse it; they simply never consult
/// the ISP fields.
struct ReaderState {
  ReaderId id = 0;
  Point position;
  int slot = 0;     // K
  int channel = 1;  // F
  std::uint32_t successes = 0;  // S
  TagSet known;
  ReaderMode mode = ReaderMode::idle;
  std::vector<IspRecord> pending_isp;
  std::vector<std::uint32_t> rival_successes;  // last published S per reader id

  std::uint32_t rival_s(ReaderId rival) const {
    return rival < rival_successes.size() ? rival_successes[rival] : 0;
  }
  bool awake() const { return mode != ReaderMode::asleep && mode != ReaderMode::reading; }
};

/// Merges every published tag and S counter into the reader. Returns the
/// number of tag ids the reader did not hold before.
std::size_t isp_sync(const IspStore& store, ReaderState& reader);

// Declarative protocol outputs applied by the engine.
enum class SlotAction { none, beacon, release };
enum class Verdict { win, out, recontend };
enum class WinAction { read, leave };

/// What a collision group looks like to the protocol resolving it.
struct Contention {
  int slot = 1;
  int max_slot = 1;
  double read_range = 10.0;
  /// Interference-derived distance, only present for groups of exactly two.
  std::optional<double> estimated_distance;
};

/// Contract every simulated server-slotted protocol implements. Callbacks only
/// touch the reader state they are handed; clock, channels, tags and energy
/// belong to the engine.
class Protocol {
 public:
  virtual ~Protocol() = default;

  virtual ProtocolKind kind() const = 0;

  /// Frame airtimes this protocol puts on the air each round.
  virtual Micros round_start_airtime(const TimingParams& t) const = 0;
  virtual Micros slot_message_airtime(const TimingParams& t) const = 0;
  virtual Micros round_end_airtime(const TimingParams& t) const = 0;
  /// Extra frame a winner sends between its beacon and its read (NFRA's OF).
  virtual Micros pre_read_airtime(const TimingParams&) const { return Micros{0}; }

  virtual void on_round_start(ReaderState& reader, const MsgA& msg, Rng& rng) const = 0;
  virtual SlotAction on_slot(ReaderState& reader, const MsgC& msg) const;
  /// The reader beaconed into a channel an overlapping reader holds.
  virtual void on_channel_busy(ReaderState& reader) const = 0;
  /// One verdict per group member, in member order.
  virtual std::vector<Verdict> resolve(const Contention& contention,
                                       std::span<ReaderState* const> members,
                                       std::span<Rng> streams) const = 0;
  /// Filters the winners of one slot; false means the reader is held back.
  virtual std::vector<bool> admit(std::span<ReaderState* const> winners, const Arena& arena) const;
  virtual WinAction on_win(ReaderState& reader, std::span<const TagId> tags_in_range) const = 0;
  /// Returns the number of tags new to the reader.
  virtual std::size_t on_read_complete(ReaderState& reader, std::span<const TagId> tags) const = 0;
  virtual void on_round_end(ReaderState& reader, const IspStore& store) const = 0;

  virtual bool shares_isp() const { return false; }
};

}  // namespace dre
