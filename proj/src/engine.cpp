#include "dre/engine.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "dre/baselines.hpp"
#include "dre/ierap.hpp"
#include "dre/scenario.hpp"

namespace dre {

namespace {

enum StreamPurpose : std::uint64_t {
  kStreamRound = 1,
  kStreamNoise = 2,
  kStreamMobility = 3,
  kStreamReaders = 4,
  kStreamTags = 5,
};

}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::msg_a: return "msgA";
    case EventKind::msg_c: return "msgC";
    case EventKind::beacon: return "beacon";
    case EventKind::collision: return "collision";
    case EventKind::busy: return "busy";
    case EventKind::win: return "win";
    case EventKind::overriding_frame: return "of";
    case EventKind::read_start: return "read-start";
    case EventKind::read_end: return "read-end";
    case EventKind::skip_known: return "skip-known";
    case EventKind::release: return "release";
    case EventKind::sleep: return "sleep";
    case EventKind::sh: return "sh";
    case EventKind::isp_merge: return "isp-merge";
    case EventKind::sense: return "sense";
    case EventKind::share_send: return "share-send";
    case EventKind::share_receive: return "share-receive";
  }
  return "unknown";
}

std::optional<EnergyKind> energy_kind(EventKind kind) {
  switch (kind) {
    case EventKind::msg_a:
    case EventKind::msg_c:
    case EventKind::sh:
    case EventKind::sense:
    case EventKind::share_receive:
      return EnergyKind::receive;
    case EventKind::beacon:
    case EventKind::overriding_frame:
    case EventKind::share_send:
      return EnergyKind::send;
    case EventKind::read_start:
      return EnergyKind::read;
    default:
      return std::nullopt;
  }
}

void EventLog::record(const Event& e) {
  if (!events_.empty() && e.time < events_.back().time) sorted_ = false;
  events_.push_back(e);
}

std::span<const Event> EventLog::events() const {
  if (!sorted_) {
    std::stable_sort(events_.begin(), events_.end(),
                     [](const Event& a, const Event& b) { return a.time < b.time; });
    sorted_ = true;
  }
  return events_;
}

void EventLog::write(std::ostream& out) const {
  for (const Event& e : events()) {
    out << e.time.count() << ' ';
    if (e.reader == kBroadcast) {
      out << '-';
    } else {
      out << e.reader;
    }
    out << ' ' << to_string(e.kind) << ' ' << e.slot << ' ' << e.channel << ' ' << e.airtime.count() << ' '
        << e.count << '\n';
  }
}

std::string EventLog::to_text() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

EnergyLedger replay_energy(const EventLog& log, std::size_t readers) {
  EnergyLedger ledger(readers);
  for (const Event& e : log.events()) {
    if (auto k = energy_kind(e.kind); k && e.reader != kBroadcast) ledger.charge(e.reader, *k, e.airtime);
  }
  return ledger;
}

void ChannelOccupancy::occupy(ReaderId reader, int channel, const Point& position, Micros start,
                              std::optional<Micros> end) {
  active_.push_back(history_.size());
  history_.push_back({reader, channel, position, start, end});
}

void ChannelOccupancy::release(ReaderId reader, Micros at) {
  for (std::size_t idx : active_) {
    Occupancy& o = history_[idx];
    if (o.reader == reader && !o.end) o.end = at;
  }
}

bool ChannelOccupancy::busy(int channel, const Point& position, double range, Micros at,
                            ReaderId self) const {
  for (std::size_t idx : active_) {
    const Occupancy& o = history_[idx];
    if (o.reader == self || o.channel != channel) continue;
    if (o.start > at || (o.end && at >= *o.end)) continue;
    if (euclidean_distance(o.position, position) <= range) return true;
  }
  return false;
}

void ChannelOccupancy::prune(Micros now) {
  std::erase_if(active_, [&](std::size_t idx) {
    const Occupancy& o = history_[idx];
    return o.end && *o.end <= now;
  });
}

std::size_t exclusivity_violations(std::span<const Occupancy> history, double range) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < history.size(); ++i) {
    for (std::size_t j = i + 1; j < history.size(); ++j) {
      const Occupancy& a = history[i];
      const Occupancy& b = history[j];
      if (a.reader == b.reader || a.channel != b.channel) continue;
      const bool a_before_b = a.end && *a.end <= b.start;
      const bool b_before_a = b.end && *b.end <= a.start;
      if (a_before_b || b_before_a) continue;
      if (euclidean_distance(a.position, b.position) <= range) ++bad;
    }
  }
  return bad;
}

void World::set_tags(std::vector<Point> positions) {
  tag_positions = std::move(positions);
  tag_grid_ = std::make_unique<PointGrid>(tag_positions, arena, std::max(arena.read_range, 1.0));
  for (auto& r : readers) r.known = TagSet(tag_positions.size());
}

void World::set_readers(std::span<const Point> positions) {
  readers.clear();
  readers.resize(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    ReaderState& r = readers[i];
    r.id = static_cast<ReaderId>(i);
    r.position = positions[i];
    r.known = TagSet(tag_positions.size());
    r.rival_successes.assign(positions.size(), 0);
  }
  waypoints.assign(positions.size(), WaypointState{});
  ledger = EnergyLedger(positions.size());
  waiting = std::make_unique<WaitingTracker>(positions.size(), options.waiting_scope);
}

std::vector<TagId> World::tags_in_range(const Point& reader) const {
  std::vector<TagId> out;
  if (!tag_grid_) return out;
  for (std::size_t i : tag_grid_->within(reader, arena.read_range)) out.push_back(static_cast<TagId>(i));
  return out;
}

std::vector<Point> World::reader_positions() const {
  std::vector<Point> out;
  out.reserve(readers.size());
  for (const auto& r : readers) out.push_back(r.position);
  return out;
}

void World::charge(const Event& e) {
  if (auto k = energy_kind(e.kind)) ledger.charge(e.reader, *k, e.airtime);
  note(e);
}

void World::note(const Event& e) {
  if (log) log->record(e);
}

Rng World::stream(ReaderId reader, std::uint64_t purpose) const {
  return Rng::substream(seed, {round, reader, purpose});
}

void start_read(World& world, ReaderId reader, int channel, Micros hold_start, Micros read_start,
                std::vector<TagId> tags, int slot) {
  ReaderState& r = world.readers.at(reader);
  const Micros end = read_start + world.timing.read;
  world.occupancy.occupy(reader, channel, r.position, hold_start, end);
  world.charge({read_start, reader, EventKind::read_start, slot, channel, world.timing.read,
                static_cast<std::uint32_t>(tags.size())});
  world.reads_in_flight.push_back({reader, channel, end, std::move(tags)});
}

std::vector<CompletedRead> complete_reads(World& world, Micros now, const Protocol* protocol,
                                          const std::function<void(const CompletedRead&)>& on_done) {
  std::vector<PendingRead> due;
  std::vector<PendingRead> still;
  for (auto& pr : world.reads_in_flight) (pr.end <= now ? due : still).push_back(std::move(pr));
  world.reads_in_flight = std::move(still);
  std::sort(due.begin(), due.end(), [](const PendingRead& a, const PendingRead& b) {
    return a.end != b.end ? a.end < b.end : a.reader < b.reader;
  });

  std::vector<CompletedRead> done;
  done.reserve(due.size());
  for (auto& pr : due) {
    ReaderState& r = world.readers.at(pr.reader);
    std::size_t fresh = 0;
    if (protocol) {
      fresh = protocol->on_read_complete(r, pr.tags);
    } else {
      for (TagId t : pr.tags) fresh += r.known.insert(t) ? 1 : 0;
    }
    world.note({pr.end, pr.reader, EventKind::read_end, 0, pr.channel, Micros{0},
                static_cast<std::uint32_t>(pr.tags.size())});
    if (fresh > 0) world.waiting->acquired(pr.reader, pr.end);
    done.push_back({pr.reader, pr.end, std::move(pr.tags), fresh});
    if (on_done) on_done(done.back());
  }
  return done;
}

double estimate_pair_distance(const World& world, ReaderId a, ReaderId b, Rng& rng) {
  const double truth = euclidean_distance(world.readers.at(a).position, world.readers.at(b).position);
  if (truth <= 0.0) return 0.0;
  double interference = received_interference(world.radio, truth);
  if (world.radio.interference_noise > 0.0)
    interference *= 1.0 + world.radio.interference_noise * rng.uniform(-1.0, 1.0);
  return estimate_distance(world.radio, interference);
}

namespace {

void tally(RoundResult& res, const std::vector<CompletedRead>& done) {
  for (const auto& c : done) {
    if (!c.tags.empty()) ++res.successful_reads;
  }
}

}  // namespace

RoundResult run_round(World& w, const Protocol& proto) {
  RoundResult res;
  res.round = w.round;
  res.start = w.clock;
  const TimingParams& t = w.timing;
  const std::size_t n = w.readers.size();

  w.waiting->begin_round(w.clock);
  w.isp.clear();
  w.occupancy.clear_active();

  std::vector<Rng> streams;
  streams.reserve(n);
  for (std::size_t i = 0; i < n; ++i) streams.push_back(w.stream(static_cast<ReaderId>(i), kStreamRound));
  Rng noise = Rng::substream(w.seed, {w.round, kStreamNoise});
  const std::vector<Point> positions = w.reader_positions();

  const MsgA a{w.slots, w.channels};
  validate_message(a);
  const Micros a_air = proto.round_start_airtime(t);
  for (auto& r : w.readers) {
    w.charge({w.clock, r.id, EventKind::msg_a, 0, 0, a_air, 0});
    proto.on_round_start(r, a, streams[r.id]);
  }
  w.clock += a_air;

  const Micros c_air = proto.slot_message_airtime(t);
  const Micros pre_air = proto.pre_read_airtime(t);
  std::vector<BeaconEvent> beacons;
  std::vector<BeaconEvent> clear;
  std::vector<ReaderState*> members;
  std::vector<ReaderState*> winners;

  for (int p = 1; p <= w.slots; ++p) {
    tally(res, complete_reads(w, w.clock, &proto));

    const MsgC c{p};
    beacons.clear();
    for (auto& r : w.readers) {
      if (!r.awake()) continue;
      w.charge({w.clock, r.id, EventKind::msg_c, p, 0, c_air, 0});
      const ReaderMode before = r.mode;
      switch (proto.on_slot(r, c)) {
        case SlotAction::none:
          break;
        case SlotAction::release:
          if (before != ReaderMode::leaving) throw SimulationFault("release from a reader not holding a channel");
          w.occupancy.release(r.id, w.clock);
          w.note({w.clock, r.id, EventKind::release, p, r.channel, Micros{0}, 0});
          w.note({w.clock, r.id, EventKind::sleep, p, r.channel, Micros{0}, 0});
          break;
        case SlotAction::beacon:
          if (before != ReaderMode::contending) throw SimulationFault("beacon from a reader that is not contending");
          beacons.push_back({r.id, p, r.channel});
          break;
      }
    }
    w.clock += c_air;
    const Micros tb = w.clock;
    w.occupancy.prune(tb);

    clear.clear();
    for (const BeaconEvent& b : beacons) {
      ReaderState& r = w.readers[b.reader];
      w.charge({tb, b.reader, EventKind::beacon, p, b.channel, t.beacon, 0});
      if (w.occupancy.busy(b.channel, r.position, w.options.occupancy_range, tb, b.reader)) {
        ++res.busy;
        proto.on_channel_busy(r);
        w.note({tb, b.reader, EventKind::busy, p, b.channel, Micros{0}, 0});
        if (r.mode == ReaderMode::asleep) w.note({tb, b.reader, EventKind::sleep, p, b.channel, Micros{0}, 0});
        continue;
      }
      clear.push_back(b);
    }

    winners.clear();
    for (const CollisionGroup& g : detect_beacon_collisions(clear, positions, w.arena)) {
      members.clear();
      for (const BeaconEvent& b : g) members.push_back(&w.readers[b.reader]);
      Contention ctx{p, w.slots, w.arena.read_range, std::nullopt};
      if (g.size() >= 2) {
        ++res.collisions;
        for (const BeaconEvent& b : g)
          w.note({tb, b.reader, EventKind::collision, p, b.channel, Micros{0}, static_cast<std::uint32_t>(g.size())});
      }
      if (g.size() == 2) ctx.estimated_distance = estimate_pair_distance(w, g[0].reader, g[1].reader, noise);
      const std::vector<Verdict> verdicts = proto.resolve(ctx, members, streams);
      if (verdicts.size() != members.size()) throw SimulationFault("protocol returned a verdict count mismatch");
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (verdicts[i] == Verdict::win) {
          winners.push_back(members[i]);
        } else if (members[i]->mode == ReaderMode::asleep) {
          w.note({tb, members[i]->id, EventKind::sleep, p, members[i]->channel, Micros{0}, 0});
        }
      }
    }

    std::sort(winners.begin(), winners.end(), [](const ReaderState* x, const ReaderState* y) { return x->id < y->id; });
    const std::vector<bool> admitted = proto.admit(winners, w.arena);
    for (std::size_t i = 0; i < winners.size(); ++i) {
      ReaderState& r = *winners[i];
      if (!admitted[i]) {
        // Held back from reading, the reader still keeps the channel it won.
        w.occupancy.occupy(r.id, r.channel, r.position, tb, tb + t.beacon + pre_air + t.read);
        proto.on_channel_busy(r);
        w.note({tb, r.id, EventKind::busy, p, r.channel, Micros{0}, 0});
        continue;
      }
      w.note({tb, r.id, EventKind::win, p, r.channel, Micros{0}, 0});
      std::vector<TagId> in_range = w.tags_in_range(r.position);
      if (proto.on_win(r, in_range) == WinAction::read) {
        if (r.mode != ReaderMode::reading) throw SimulationFault("read action while not in reading mode");
        Micros read_start = tb + t.beacon;
        if (pre_air.count() > 0) {
          w.charge({read_start, r.id, EventKind::overriding_frame, p, r.channel, pre_air, 0});
          read_start += pre_air;
        }
        ++res.read_ops;
        start_read(w, r.id, r.channel, tb, read_start, std::move(in_range), p);
      } else {
        if (r.mode != ReaderMode::leaving) throw SimulationFault("leave action while not in leaving mode");
        ++res.skips;
        w.occupancy.occupy(r.id, r.channel, r.position, tb, std::nullopt);
        w.note({tb, r.id, EventKind::skip_known, p, r.channel, Micros{0}, static_cast<std::uint32_t>(in_range.size())});
      }
    }
    w.clock += t.slot;
  }

  // Reads begun late run to completion before the end frame.
  Micros tail_end = w.clock;
  for (const auto& pr : w.reads_in_flight) tail_end = std::max(tail_end, pr.end);
  tally(res, complete_reads(w, tail_end, &proto));
  w.clock = tail_end;
  for (auto& r : w.readers) {
    if (r.mode == ReaderMode::leaving) {
      w.occupancy.release(r.id, w.clock);
      r.mode = ReaderMode::asleep;
      w.note({w.clock, r.id, EventKind::release, 0, r.channel, Micros{0}, 0});
    }
  }

  if (proto.shares_isp() && w.options.isp_enabled) {
    for (auto& r : w.readers)
      for (const IspRecord& rec : r.pending_isp) w.isp.publish(rec);
  }
  for (auto& r : w.readers) r.pending_isp.clear();
  w.isp.close();

  const Micros e_air = proto.round_end_airtime(t);
  if (e_air.count() > 0)
    for (auto& r : w.readers) w.charge({w.clock, r.id, EventKind::sh, 0, 0, e_air, 0});
  w.clock += e_air;

  for (auto& r : w.readers) {
    const std::size_t before = r.known.size();
    proto.on_round_end(r, w.isp);
    const std::size_t added = r.known.size() - before;
    if (added > 0) {
      ++res.acquisitions;
      w.waiting->acquired(r.id, w.clock);
      w.note({w.clock, r.id, EventKind::isp_merge, 0, 0, Micros{0}, static_cast<std::uint32_t>(added)});
    }
  }

  finish_round(w, res);
  return res;
}

void finish_round(World& w, RoundResult& res) {
  res.duration = w.clock - res.start;
  w.waiting->end_round(w.clock);
  w.isp.clear();
  w.occupancy.clear_active();
  if (!w.reads_in_flight.empty()) throw SimulationFault("read still in flight at round end");

  if (w.mobility.model != MobilityModel::static_readers) {
    Rng rng = Rng::substream(w.seed, {w.round, kStreamMobility});
    const std::vector<Point> now = w.reader_positions();
    const std::vector<Point> next = step_mobility(now, w.waypoints, w.mobility, to_seconds(res.duration), w.arena, rng);
    for (std::size_t i = 0; i < w.readers.size(); ++i) w.readers[i].position = next[i];
  }
  for (auto& r : w.readers) r.mode = ReaderMode::idle;
  ++w.round;
}

std::unique_ptr<Protocol> make_protocol(const ScenarioConfig& c) {
  switch (c.protocol) {
    case ProtocolKind::ierap: return std::make_unique<IeRap>(c.slots, c.effective_sift_m());
    case ProtocolKind::nfra: return make_nfra(c.slots);
    case ProtocolKind::gdra: return make_gdra(c.slots, c.gdra_p);
    case ProtocolKind::frca1: return make_frca1(c.slots);
    case ProtocolKind::frca2: return make_frca2(c.slots);
    case ProtocolKind::dmrcp: return std::make_unique<Dmrcp>();
  }
  throw ConfigError("unknown protocol");
}

World make_world(const ScenarioConfig& c) {
  World w;
  w.seed = c.seed;
  w.slots = c.slots;
  w.channels = c.channels;
  w.arena = c.arena;
  w.radio = c.radio;
  w.timing = c.timing;
  w.timing.slots_per_round = c.slots;
  w.mobility = c.mobility;
  w.options.occupancy_range = c.effective_occupancy_range();
  w.options.sharing_distance = c.effective_sharing_distance();
  w.options.dmrcp_cw = c.dmrcp_cw;
  w.options.dmrcp_windows = c.effective_dmrcp_windows();
  w.options.isp_enabled = c.isp;
  w.options.waiting_scope = c.waiting_scope;

  Rng reader_rng = Rng::substream(c.seed, {kStreamReaders});
  Rng tag_rng = Rng::substream(c.seed, {kStreamTags});
  const std::vector<Point> readers = place_uniform(static_cast<std::size_t>(c.readers), c.arena, reader_rng);
  w.set_tags(place_uniform(static_cast<std::size_t>(c.tags), c.arena, tag_rng));
  w.set_readers(readers);
  return w;
}

MetricsReport run_simulation(const ScenarioConfig& config, EventLog* log) {
  config.validate();
  World w = make_world(config);
  w.log = log;
  const std::unique_ptr<Protocol> proto = make_protocol(config);

  MetricsReport rep;
  rep.scenario = config.name;
  rep.protocol = config.protocol;
  rep.readers = config.readers;
  rep.channels = config.channels;
  rep.seed = config.seed;
  rep.rounds = config.rounds;
  rep.per_round.reserve(static_cast<std::size_t>(config.rounds));

  for (int i = 0; i < config.rounds; ++i) {
    const RoundResult res = config.protocol == ProtocolKind::dmrcp
                                ? dmrcp_round(w, static_cast<const Dmrcp&>(*proto))
                                : run_round(w, *proto);
    rep.read_ops += res.read_ops;
    rep.successful_reads += res.successful_reads;
    rep.per_round.push_back({res.round, to_seconds(res.duration), res.read_ops, res.successful_reads, res.skips,
                             res.collisions});
  }
  w.waiting->finish(w.clock);

  rep.elapsed_s = to_seconds(w.clock);
  rep.throughput_rps = rep.elapsed_s > 0.0 ? throughput(rep.successful_reads, rep.elapsed_s) : 0.0;
  for (const auto& r : w.readers) rep.unique_tags_known += r.known.size();
  rep.avg_waiting_time_s = w.readers.empty() ? 0.0 : w.waiting->mean_seconds();
  rep.reader_energy_j.reserve(w.readers.size());
  for (const auto& r : w.readers) rep.reader_energy_j.push_back(reader_energy(w.ledger, r.id, config.powers));
  rep.network_energy_j = network_energy(w.ledger, config.powers);
  return rep;
}

}  // namespace dre
