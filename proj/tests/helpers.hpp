#pragma once

#include <utility>
#include <vector>

#include "dre/engine.hpp"

namespace dre::test {

// Hand-built world: readers and tags at given spots, everything else default.
inline World small_world(const std::vector<Point>& readers, const std::vector<Point>& tags, int channels = 1,
                         int slots = 128, std::uint64_t seed = 1) {
  World w;
  w.seed = seed;
  w.slots = slots;
  w.channels = channels;
  w.timing.slots_per_round = slots;
  w.options.occupancy_range = 2.0 * w.arena.read_range;
  w.options.sharing_distance = 2.0 * w.arena.read_range;
  w.options.dmrcp_windows = (slots + w.options.dmrcp_cw - 1) / w.options.dmrcp_cw;
  w.set_tags(tags);
  w.set_readers(readers);
  return w;
}

inline std::size_t count(const EventLog& log, EventKind kind, ReaderId reader = kBroadcast) {
  std::size_t n = 0;
  for (const Event& e : log.events())
    if (e.kind == kind && (reader == kBroadcast || e.reader == reader)) ++n;
  return n;
}

// Seven readers. Read fields overlap for R1-R2, R1-R3, R3-R4, R4-R5, R4-R6,
// R7-R5, R7-R6 and nowhere else. Reader i sits on tag i.
inline std::vector<Point> walkthrough_positions() {
  const double o = 100;
  return {
      {o + 15, o},       // R1
      {o + 0, o},        // R2
      {o + 30, o},       // R3
      {o + 45, o},       // R4
      {o + 55, o + 12},  // R5
      {o + 55, o - 12},  // R6
      {o + 68, o},       // R7
  };
}

// (K, F) per reader.
inline std::vector<std::pair<int, int>> walkthrough_draws() {
  return {{1, 2}, {1, 1}, {2, 2}, {3, 3}, {4, 3}, {4, 2}, {3, 4}};
}

// R1, R4 and R6 already hold their own tag.
inline std::vector<ReaderId> walkthrough_known() { return {0, 3, 5}; }

}  // namespace dre::test

namespace dre::test {

// Delegates everything to an inner protocol. Subclasses override single hooks.
class Wrapped : public Protocol {
 public:
  explicit Wrapped(const Protocol& inner) : inner_(inner) {}

  ProtocolKind kind() const override { return inner_.kind(); }
  Micros round_start_airtime(const TimingParams& t) const override { return inner_.round_start_airtime(t); }
  Micros slot_message_airtime(const TimingParams& t) const override { return inner_.slot_message_airtime(t); }
  Micros round_end_airtime(const TimingParams& t) const override { return inner_.round_end_airtime(t); }
  Micros pre_read_airtime(const TimingParams& t) const override { return inner_.pre_read_airtime(t); }
  void on_round_start(ReaderState& r, const MsgA& m, Rng& rng) const override { inner_.on_round_start(r, m, rng); }
  SlotAction on_slot(ReaderState& r, const MsgC& m) const override { return inner_.on_slot(r, m); }
  void on_channel_busy(ReaderState& r) const override { inner_.on_channel_busy(r); }
  std::vector<Verdict> resolve(const Contention& c, std::span<ReaderState* const> m,
                               std::span<Rng> s) const override {
    return inner_.resolve(c, m, s);
  }
  std::vector<bool> admit(std::span<ReaderState* const> w, const Arena& a) const override { return inner_.admit(w, a); }
  WinAction on_win(ReaderState& r, std::span<const TagId> tags) const override { return inner_.on_win(r, tags); }
  std::size_t on_read_complete(ReaderState& r, std::span<const TagId> tags) const override {
    return inner_.on_read_complete(r, tags);
  }
  void on_round_end(ReaderState& r, const IspStore& s) const override { inner_.on_round_end(r, s); }
  bool shares_isp() const override { return inner_.shares_isp(); }

 protected:
  const Protocol& inner_;
};

// Replaces the round-start draw with fixed (slot, channel) pairs per reader.
class Forced : public Wrapped {
 public:
  Forced(const Protocol& inner, std::vector<std::pair<int, int>> draws) : Wrapped(inner), draws_(std::move(draws)) {}
  void on_round_start(ReaderState& r, const MsgA& m, Rng& rng) const override {
    inner_.on_round_start(r, m, rng);
    r.slot = draws_.at(r.id).first;
    r.channel = draws_.at(r.id).second;
  }

 private:
  std::vector<std::pair<int, int>> draws_;
};

// Counts reads started while every in-range tag was already known.
class Audited : public Wrapped {
 public:
  using Wrapped::Wrapped;
  WinAction on_win(ReaderState& r, std::span<const TagId> tags) const override {
    const bool all_known = r.known.contains_all(tags);
    const WinAction a = inner_.on_win(r, tags);
    if (a == WinAction::read && all_known) ++redundant;
    if (a == WinAction::read) ++reads;
    return a;
  }
  mutable std::size_t redundant = 0;
  mutable std::size_t reads = 0;
};

// Reads on every win, known tags or not.
class AlwaysRead : public Wrapped {
 public:
  using Wrapped::Wrapped;
  WinAction on_win(ReaderState& r, std::span<const TagId>) const override {
    r.mode = ReaderMode::reading;
    return WinAction::read;
  }
};

}  // namespace dre::test
