#include "dre/baselines.hpp"

namespace dre {

void SlottedBaseline::on_round_start(ReaderState& reader, const MsgA& msg, Rng& rng) const {
  validate_message(msg);
  if (opt_.slots.slots() != msg.max_slot) throw SimulationFault("slot table does not match the announced MN");
  reader.channel = msg.max_channel > 1 ? static_cast<int>(rng.uniform_int(1, msg.max_channel)) : 1;
  reader.slot = sample_slot(opt_.slots, rng);
  reader.mode = ReaderMode::contending;
}

void SlottedBaseline::on_channel_busy(ReaderState& reader) const { reader.mode = ReaderMode::idle; }

std::vector<Verdict> SlottedBaseline::resolve(const Contention&, std::span<ReaderState* const> members,
                                              std::span<Rng>) const {
  if (members.size() == 1) return {Verdict::win};
  for (ReaderState* r : members) r->mode = ReaderMode::idle;
  return std::vector<Verdict>(members.size(), Verdict::out);
}

std::vector<bool> overlap_guard(std::span<ReaderState* const> winners, double read_range) {
  std::vector<bool> ok(winners.size(), true);
  for (std::size_t i = 0; i < winners.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (ok[j] && euclidean_distance(winners[i]->position, winners[j]->position) <= 2.0 * read_range) {
        ok[i] = false;
        break;
      }
    }
  }
  return ok;
}

std::vector<bool> SlottedBaseline::admit(std::span<ReaderState* const> winners, const Arena& arena) const {
  if (!opt_.overlap_guard) return Protocol::admit(winners, arena);
  return overlap_guard(winners, arena.read_range);
}

WinAction SlottedBaseline::on_win(ReaderState& reader, std::span<const TagId>) const {
  reader.mode = ReaderMode::reading;
  return WinAction::read;
}

std::size_t SlottedBaseline::on_read_complete(ReaderState& reader, std::span<const TagId> tags) const {
  std::size_t fresh = 0;
  for (TagId t : tags) fresh += reader.known.insert(t) ? 1 : 0;
  if (!tags.empty()) ++reader.successes;
  reader.mode = ReaderMode::idle;
  return fresh;
}

void SlottedBaseline::on_round_end(ReaderState& reader, const IspStore&) const { reader.mode = ReaderMode::idle; }

std::unique_ptr<SlottedBaseline> make_nfra(int slots) {
  return std::make_unique<SlottedBaseline>(
      SlottedBaseline::Options{ProtocolKind::nfra, uniform_distribution(slots), false, false});
}

std::unique_ptr<SlottedBaseline> make_gdra(int slots, double p) {
  return std::make_unique<SlottedBaseline>(
      SlottedBaseline::Options{ProtocolKind::gdra, truncated_geometric(slots, p), false, false});
}

std::unique_ptr<SlottedBaseline> make_frca1(int slots) {
  return std::make_unique<SlottedBaseline>(
      SlottedBaseline::Options{ProtocolKind::frca1, uniform_distribution(slots), true, false});
}

std::unique_ptr<SlottedBaseline> make_frca2(int slots) {
  return std::make_unique<SlottedBaseline>(
      SlottedBaseline::Options{ProtocolKind::frca2, uniform_distribution(slots), true, true});
}

RoundResult nfra_round(World& world) { return run_round(world, *make_nfra(world.slots)); }
RoundResult gdra_round(World& world, double p) { return run_round(world, *make_gdra(world.slots, p)); }
RoundResult frca1_round(World& world) { return run_round(world, *make_frca1(world.slots)); }
RoundResult frca2_round(World& world) { return run_round(world, *make_frca2(world.slots)); }

// DMRCP

void Dmrcp::on_round_start(ReaderState& reader, const MsgA&, Rng&) const {
  reader.channel = 1;
  reader.slot = 0;
  reader.mode = ReaderMode::contending;
}

// A busy channel only defers the reader to the next window.
void Dmrcp::on_channel_busy(ReaderState& reader) const { reader.mode = ReaderMode::contending; }

std::vector<Verdict> Dmrcp::resolve(const Contention&, std::span<ReaderState* const> members,
                                    std::span<Rng>) const {
  if (members.size() == 1) return {Verdict::win};
  return std::vector<Verdict>(members.size(), Verdict::recontend);
}

WinAction Dmrcp::on_win(ReaderState& reader, std::span<const TagId>) const {
  reader.mode = ReaderMode::reading;
  return WinAction::read;
}

std::size_t Dmrcp::on_read_complete(ReaderState& reader, std::span<const TagId> tags) const {
  std::size_t fresh = 0;
  for (TagId t : tags) fresh += reader.known.insert(t) ? 1 : 0;
  if (!tags.empty()) ++reader.successes;
  reader.mode = ReaderMode::asleep;
  return fresh;
}

void Dmrcp::on_round_end(ReaderState& reader, const IspStore&) const { reader.mode = ReaderMode::idle; }

RoundResult dmrcp_round(World& w, const Dmrcp& proto) {
  RoundResult res;
  res.round = w.round;
  res.start = w.clock;
  const TimingParams& t = w.timing;
  const std::size_t n = w.readers.size();
  const int cw = w.options.dmrcp_cw;
  const Micros backoff_slot = t.dmrcp_beacon;

  w.waiting->begin_round(w.clock);
  w.occupancy.clear_active();

  std::vector<Rng> streams;
  streams.reserve(n);
  for (std::size_t i = 0; i < n; ++i) streams.push_back(w.stream(static_cast<ReaderId>(i), 1));
  const std::vector<Point> positions = w.reader_positions();
  const MsgA a{w.slots, 1};
  for (auto& r : w.readers) proto.on_round_start(r, a, streams[r.id]);

  auto share = [&](const CompletedRead& c) {
    if (!c.tags.empty()) ++res.successful_reads;
    if (c.tags.empty()) return;
    const ReaderState& sender = w.readers[c.reader];
    w.charge({c.end, c.reader, EventKind::share_send, 0, 1, backoff_slot, static_cast<std::uint32_t>(c.tags.size())});
    for (auto& r : w.readers) {
      if (r.id == c.reader) continue;
      if (euclidean_distance(r.position, sender.position) > w.options.sharing_distance) continue;
      std::size_t fresh = 0;
      for (TagId tag : c.tags) fresh += r.known.insert(tag) ? 1 : 0;
      w.charge({c.end, r.id, EventKind::share_receive, 0, 1, backoff_slot, static_cast<std::uint32_t>(fresh)});
      if (fresh > 0) {
        ++res.acquisitions;
        w.waiting->acquired(r.id, c.end);
      }
    }
  };

  std::vector<int> backoff(n, 0);
  std::vector<BeaconEvent> clear;
  std::vector<ReaderState*> members;
  for (int window = 1; window <= w.options.dmrcp_windows; ++window) {
    const Micros w0 = w.clock;
    for (auto& r : w.readers)
      backoff[r.id] = r.mode == ReaderMode::contending ? static_cast<int>(streams[r.id].uniform_int(1, cw)) : 0;

    for (int b = 1; b <= cw; ++b) {
      const Micros tb = w0 + backoff_slot * (b - 1);
      complete_reads(w, tb, &proto, share);
      w.occupancy.prune(tb);

      clear.clear();
      for (auto& r : w.readers) {
        if (r.mode != ReaderMode::contending || backoff[r.id] != b) continue;
        w.charge({tb, r.id, EventKind::sense, window, 1, t.beacon, 0});
        if (w.occupancy.busy(1, r.position, w.options.occupancy_range, tb, r.id)) {
          ++res.busy;
          proto.on_channel_busy(r);
          w.note({tb, r.id, EventKind::busy, window, 1, Micros{0}, 0});
          continue;
        }
        w.charge({tb, r.id, EventKind::beacon, window, 1, t.dmrcp_beacon, 0});
        clear.push_back({r.id, window, 1});
      }

      for (const CollisionGroup& g : detect_beacon_collisions(clear, positions, w.arena)) {
        members.clear();
        for (const BeaconEvent& e : g) members.push_back(&w.readers[e.reader]);
        const std::vector<Verdict> verdicts =
            proto.resolve(Contention{window, w.options.dmrcp_windows, w.arena.read_range, std::nullopt}, members,
                          streams);
        if (g.size() >= 2) {
          ++res.collisions;
          for (const BeaconEvent& e : g)
            w.note({tb, e.reader, EventKind::collision, window, 1, Micros{0}, static_cast<std::uint32_t>(g.size())});
        }
        for (std::size_t i = 0; i < members.size(); ++i) {
          if (verdicts[i] != Verdict::win) continue;
          ReaderState& r = *members[i];
          w.note({tb, r.id, EventKind::win, window, 1, Micros{0}, 0});
          std::vector<TagId> in_range = w.tags_in_range(r.position);
          if (proto.on_win(r, in_range) != WinAction::read) throw SimulationFault("DMRCP winner did not read");
          ++res.read_ops;
          start_read(w, r.id, 1, tb, tb + t.dmrcp_beacon, std::move(in_range), window);
        }
      }
    }
    w.clock = w0 + backoff_slot * cw;
  }

  Micros tail_end = w.clock;
  for (const auto& pr : w.reads_in_flight) tail_end = std::max(tail_end, pr.end);
  complete_reads(w, tail_end, &proto, share);
  w.clock = tail_end;
  for (auto& r : w.readers) proto.on_round_end(r, w.isp);

  finish_round(w, res);
  return res;
}

}  // namespace dre
