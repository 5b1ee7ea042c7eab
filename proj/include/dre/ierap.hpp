#pragma once

#include "dre/protocol.hpp"
#include "dre/sift.hpp"

namespace dre {

/// IE-RAP reader behaviour: a uniform channel draw and a SIFT slot draw on 'A';
/// a beacon when 'C' names the reader's slot; pairwise collisions settled by the
/// lower success counter and the interference-estimated distance; no read when
/// every tag in range is already known; ISP merge on 'SH'.
class IeRap final : public Protocol {
 public:
  /// slots is MN; max_competitors is SIFT's M (defaults to MN upstream).
  IeRap(int slots, int max_competitors);

  ProtocolKind kind() const override { return ProtocolKind::ierap; }
  Micros round_start_airtime(const TimingParams& t) const override { return t.msg_a; }
  Micros slot_message_airtime(const TimingParams& t) const override { return t.msg_c; }
  Micros round_end_airtime(const TimingParams& t) const override { return t.msg_sh; }

  void on_round_start(ReaderState& reader, const MsgA& msg, Rng& rng) const override;
  // on_slot: the base implementation is exactly the IE-RAP rule.
  void on_channel_busy(ReaderState& reader) const override;
  std::vector<Verdict> resolve(const Contention& contention, std::span<ReaderState* const> members,
                               std::span<Rng> streams) const override;
  WinAction on_win(ReaderState& reader, std::span<const TagId> tags_in_range) const override;
  std::size_t on_read_complete(ReaderState& reader, std::span<const TagId> tags) const override;
  void on_round_end(ReaderState& reader, const IspStore& store) const override;
  bool shares_isp() const override { return true; }

  const SlotDistribution& distribution() const { return dist_; }

 private:
  SlotDistribution dist_;
};

// Free-function forms of the per-message steps, used directly by tests.

void on_message_a(ReaderState& reader, const MsgA& msg, const SlotDistribution& dist, Rng& rng);

/// True when reader a takes the channel from rival b, judged from a's view:
/// own S against b's last published S, lower id on a tie.
bool takes_channel(const ReaderState& a, const ReaderState& b);

std::vector<Verdict> resolve_contention(const Contention& contention,
                                        std::span<ReaderState* const> members,
                                        const SlotDistribution& dist, std::span<Rng> streams);

WinAction handle_tag_reading(ReaderState& reader, std::span<const TagId> tags_in_range);

/// Returns the number of tags the reader gained from the bulletin.
std::size_t on_message_sh(ReaderState& reader, const IspStore& store);

}  // namespace dre
