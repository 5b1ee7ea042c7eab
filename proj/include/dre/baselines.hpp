#pragma once

#include <memory>

#include "dre/engine.hpp"
#include "dre/protocol.hpp"
#include "dre/sift.hpp"

namespace dre {

/// Server-slotted comparison protocols. All share one skeleton: a slot (and,
/// with several channels, a channel) drawn on the round-start frame, a beacon
/// in that slot, an overriding frame and a read when the beacon is clear.
/// Losers and finished readers stay idle and keep listening. They read every
/// win, including fields whose tags they already hold.
class SlottedBaseline final : public Protocol {
 public:
  struct Options {
    ProtocolKind kind = ProtocolKind::nfra;
    SlotDistribution slots;
    bool end_frame = false;      // FRCA's EO
    bool overlap_guard = false;  // FRCA2: same-slot winners with overlapping fields
  };

  explicit SlottedBaseline(Options options) : opt_(std::move(options)) {}

  ProtocolKind kind() const override { return opt_.kind; }
  Micros round_start_airtime(const TimingParams& t) const override { return t.msg_a; }
  Micros slot_message_airtime(const TimingParams& t) const override { return t.oc; }
  Micros round_end_airtime(const TimingParams& t) const override { return opt_.end_frame ? t.eo : Micros{0}; }
  Micros pre_read_airtime(const TimingParams& t) const override { return t.overriding_frame; }

  void on_round_start(ReaderState& reader, const MsgA& msg, Rng& rng) const override;
  void on_channel_busy(ReaderState& reader) const override;
  std::vector<Verdict> resolve(const Contention& contention, std::span<ReaderState* const> members,
                               std::span<Rng> streams) const override;
  std::vector<bool> admit(std::span<ReaderState* const> winners, const Arena& arena) const override;
  WinAction on_win(ReaderState& reader, std::span<const TagId> tags_in_range) const override;
  std::size_t on_read_complete(ReaderState& reader, std::span<const TagId> tags) const override;
  void on_round_end(ReaderState& reader, const IspStore& store) const override;

  const SlotDistribution& distribution() const { return opt_.slots; }

 private:
  Options opt_;
};

std::unique_ptr<SlottedBaseline> make_nfra(int slots);
std::unique_ptr<SlottedBaseline> make_gdra(int slots, double p);
std::unique_ptr<SlottedBaseline> make_frca1(int slots);
std::unique_ptr<SlottedBaseline> make_frca2(int slots);

/// FRCA2's guard on its own: walking winners in id order, a winner is held back
/// when an admitted one sits within 2 x read range.
std::vector<bool> overlap_guard(std::span<ReaderState* const> winners, double read_range);

/// Distributed CSMA reader. Rounds have no server frames: each contention
/// window a pending reader draws a backoff in [1, CW], senses the data channel
/// in that backoff slot, beacons when clear and reads when its beacon is alone.
/// After a read it shares the tag ids with readers within the sharing distance
/// and is done for the round.
class Dmrcp final : public Protocol {
 public:
  ProtocolKind kind() const override { return ProtocolKind::dmrcp; }
  Micros round_start_airtime(const TimingParams&) const override { return Micros{0}; }
  Micros slot_message_airtime(const TimingParams&) const override { return Micros{0}; }
  Micros round_end_airtime(const TimingParams&) const override { return Micros{0}; }

  void on_round_start(ReaderState& reader, const MsgA& msg, Rng& rng) const override;
  void on_channel_busy(ReaderState& reader) const override;
  std::vector<Verdict> resolve(const Contention& contention, std::span<ReaderState* const> members,
                               std::span<Rng> streams) const override;
  WinAction on_win(ReaderState& reader, std::span<const TagId> tags_in_range) const override;
  std::size_t on_read_complete(ReaderState& reader, std::span<const TagId> tags) const override;
  void on_round_end(ReaderState& reader, const IspStore& store) const override;
};

/// One DMRCP round: windows x CW backoff slots, then the read tail.
RoundResult dmrcp_round(World& world, const Dmrcp& protocol);

// One round of each slotted baseline on a world.
RoundResult nfra_round(World& world);
RoundResult gdra_round(World& world, double p = 0.5);
RoundResult frca1_round(World& world);
RoundResult frca2_round(World& world);

}  // namespace dre
