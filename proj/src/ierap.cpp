#include "dre/ierap.hpp"

#include <algorithm>

namespace dre {

IeRap::IeRap(int slots, int max_competitors) : dist_(sift_distribution(slots, max_competitors)) {}

void on_message_a(ReaderState& reader, const MsgA& msg, const SlotDistribution& dist, Rng& rng) {
  validate_message(msg);
  if (dist.slots() != msg.max_slot) throw SimulationFault("SIFT table does not match the announced MN");
  reader.channel = static_cast<int>(rng.uniform_int(1, msg.max_channel));
  reader.slot = sample_slot(dist, rng);
  reader.mode = ReaderMode::contending;
}

void IeRap::on_round_start(ReaderState& reader, const MsgA& msg, Rng& rng) const {
  on_message_a(reader, msg, dist_, rng);
}

void IeRap::on_channel_busy(ReaderState& reader) const { reader.mode = ReaderMode::asleep; }

bool takes_channel(const ReaderState& a, const ReaderState& b) {
  const std::uint32_t rival = a.rival_s(b.id);
  if (a.successes != rival) return a.successes < rival;
  return a.id < b.id;
}

std::vector<Verdict> resolve_contention(const Contention& contention,
                                        std::span<ReaderState* const> members,
                                        const SlotDistribution& dist, std::span<Rng> streams) {
  std::vector<Verdict> verdicts(members.size(), Verdict::out);
  if (members.size() == 1) {
    verdicts[0] = Verdict::win;
    return verdicts;
  }
  if (members.size() > 2) {
    // More than two colliders: everyone waits for the next 'A'.
    for (ReaderState* r : members) r->mode = ReaderMode::asleep;
    return verdicts;
  }
  if (!contention.estimated_distance)
    throw SimulationFault("pairwise contention without a distance estimate");

  const bool overlapping = *contention.estimated_distance <= 2.0 * contention.read_range;
  for (std::size_t i = 0; i < 2; ++i) {
    ReaderState& self = *members[i];
    const ReaderState& rival = *members[1 - i];
    if (takes_channel(self, rival)) {
      verdicts[i] = Verdict::win;
      continue;
    }
    if (overlapping) {
      self.mode = ReaderMode::asleep;
      continue;
    }
    // Far rival: redraw with SIFT, step one slot on, and listen for later 'C's.
    int next = sample_slot(dist, streams[self.id]) + 1;
    next = std::min(next, contention.max_slot);
    if (next <= contention.slot) {
      self.mode = ReaderMode::asleep;
      continue;
    }
    self.slot = next;
    self.mode = ReaderMode::contending;
    verdicts[i] = Verdict::recontend;
  }
  return verdicts;
}

std::vector<Verdict> IeRap::resolve(const Contention& contention, std::span<ReaderState* const> members,
                                    std::span<Rng> streams) const {
  return resolve_contention(contention, members, dist_, streams);
}

WinAction handle_tag_reading(ReaderState& reader, std::span<const TagId> tags_in_range) {
  // An empty field has nothing new either.
  if (reader.known.contains_all(tags_in_range)) {
    reader.mode = ReaderMode::leaving;
    return WinAction::leave;
  }
  reader.mode = ReaderMode::reading;
  return WinAction::read;
}

WinAction IeRap::on_win(ReaderState& reader, std::span<const TagId> tags_in_range) const {
  return handle_tag_reading(reader, tags_in_range);
}

std::size_t IeRap::on_read_complete(ReaderState& reader, std::span<const TagId> tags) const {
  ++reader.successes;
  std::size_t fresh = 0;
  for (TagId t : tags) {
    if (reader.known.insert(t)) {
      ++fresh;
      reader.pending_isp.push_back({t, reader.id, reader.successes});
    }
  }
  reader.mode = ReaderMode::asleep;
  return fresh;
}

std::size_t on_message_sh(ReaderState& reader, const IspStore& store) {
  const std::size_t added = isp_sync(store, reader);
  reader.mode = ReaderMode::idle;
  return added;
}

void IeRap::on_round_end(ReaderState& reader, const IspStore& store) const { on_message_sh(reader, store); }

}  // namespace dre
