#include <doctest.h>

#include "dre/baselines.hpp"
#include "dre/ierap.hpp"
#include "dre/scenario.hpp"
#include "helpers.hpp"

using namespace dre;
using dre::test::small_world;

namespace {

RoundResult one_round(World& w, ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::nfra: return nfra_round(w);
    case ProtocolKind::gdra: return gdra_round(w);
    case ProtocolKind::frca1: return frca1_round(w);
    case ProtocolKind::frca2: return frca2_round(w);
    case ProtocolKind::dmrcp: return dmrcp_round(w, Dmrcp{});
    default: return run_round(w, IeRap(w.slots, w.slots));
  }
}

}  // namespace

TEST_CASE("a lone reader reads every round") {
  for (auto k : {ProtocolKind::nfra, ProtocolKind::gdra, ProtocolKind::frca1, ProtocolKind::frca2,
                 ProtocolKind::dmrcp}) {
    CAPTURE(to_string(k));
    World w = small_world({{100, 100}}, {{100, 100}});
    for (int i = 0; i < 20; ++i) {
      const RoundResult r = one_round(w, k);
      CHECK(r.read_ops == 1);
      CHECK(r.successful_reads == 1);
    }
  }
}

TEST_CASE("same slot, same channel, in range: nobody reads") {
  auto nfra = make_nfra(128);
  test::Forced p(*nfra, {{5, 1}, {5, 1}});
  World w = small_world({{100, 100}, {150, 100}}, {{100, 100}, {150, 100}});
  const RoundResult r = run_round(w, p);
  CHECK(r.read_ops == 0);
  CHECK(r.collisions == 1);
}

TEST_CASE("two NFRA readers average 2 (1 - 1/MN) reads per round") {
  World w = small_world({{100, 100}, {150, 100}}, {{100, 100}, {150, 100}});
  auto p = make_nfra(128);
  const int rounds = 20000;
  std::uint64_t reads = 0;
  for (int i = 0; i < rounds; ++i) reads += run_round(w, *p).successful_reads;
  // Brute force over the 128 x 128 equally likely slot pairs.
  int pairs_ok = 0;
  for (int a = 1; a <= 128; ++a)
    for (int b = 1; b <= 128; ++b) pairs_ok += a != b ? 2 : 0;
  const double oracle = pairs_ok / (128.0 * 128.0);
  CHECK(oracle == doctest::Approx(2.0 * (1.0 - 1.0 / 128)));
  CHECK(std::abs(double(reads) / rounds - oracle) < 0.02 * oracle);
}

TEST_CASE("FRCA1 lets overlapping readers on different channels both read; FRCA2 defers one") {
  const std::vector<Point> pos{{100, 100}, {115, 100}};
  auto f1 = make_frca1(128);
  auto f2 = make_frca2(128);
  test::Forced p1(*f1, {{7, 1}, {7, 3}});
  test::Forced p2(*f2, {{7, 1}, {7, 3}});
  World w1 = small_world(pos, pos, 4);
  World w2 = small_world(pos, pos, 4);
  EventLog log;
  w2.log = &log;
  CHECK(run_round(w1, p1).successful_reads == 2);
  CHECK(run_round(w2, p2).successful_reads == 1);
  CHECK(w2.readers[0].successes == 1);
  CHECK(w2.readers[1].successes == 0);
}

TEST_CASE("overlap guard keeps the lowest id of each overlapping cluster") {
  std::vector<ReaderState> rs(4);
  rs[0].position = {0, 0};
  rs[1].position = {15, 0};
  rs[2].position = {100, 0};
  rs[3].position = {30, 0};  // overlaps 1 only, and 1 is held back
  std::vector<ReaderState*> ptr{&rs[0], &rs[1], &rs[2], &rs[3]};
  CHECK(overlap_guard(ptr, 10.0) == std::vector<bool>{true, false, true, true});
}

TEST_CASE("FRCA1 on one channel draws exactly like NFRA") {
  ScenarioConfig c;
  c.readers = 80;
  c.rounds = 10;
  c.channels = 1;
  c.arena.side_x = c.arena.side_y = 150;
  c.protocol = ProtocolKind::nfra;
  const auto a = run_simulation(c);
  c.protocol = ProtocolKind::frca1;
  const auto b = run_simulation(c);
  REQUIRE(a.per_round.size() == b.per_round.size());
  for (std::size_t i = 0; i < a.per_round.size(); ++i)
    CHECK(a.per_round[i].successful_reads == b.per_round[i].successful_reads);
}

TEST_CASE("FRCA2 never beats FRCA1 in a round under shared seeds") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ScenarioConfig c;
    c.readers = 120;
    c.rounds = 20;
    c.channels = 4;
    c.seed = seed;
    c.arena.side_x = c.arena.side_y = 100;
    c.protocol = ProtocolKind::frca1;
    const auto a = run_simulation(c);
    c.protocol = ProtocolKind::frca2;
    const auto b = run_simulation(c);
    for (std::size_t i = 0; i < a.per_round.size(); ++i)
      CHECK(b.per_round[i].successful_reads <= a.per_round[i].successful_reads);
  }
}

TEST_CASE("baselines read fields they already know") {
  World w = small_world({{100, 100}}, {{100, 100}});
  frca1_round(w);
  const RoundResult r = frca1_round(w);
  CHECK(r.read_ops == 1);
  CHECK(r.successful_reads == 1);
}

TEST_CASE("DMRCP: a lone reader reads within the first window") {
  World w = small_world({{100, 100}}, {{100, 100}});
  EventLog log;
  w.log = &log;
  dmrcp_round(w, Dmrcp{});
  Micros start{-1};
  for (const Event& e : log.events())
    if (e.kind == EventKind::read_start) start = e.time;
  CHECK(start >= w.timing.dmrcp_beacon);
  CHECK(start <= w.timing.dmrcp_beacon * w.options.dmrcp_cw);
}

TEST_CASE("DMRCP: equal backoff draws block both readers for the window") {
  World w = small_world({{100, 100}, {150, 100}}, {{100, 100}, {150, 100}});
  w.options.dmrcp_windows = 1;
  const int rounds = 20000;
  int blocked = 0;
  for (int i = 0; i < rounds; ++i) {
    const RoundResult r = dmrcp_round(w, Dmrcp{});
    blocked += r.collisions > 0 ? 1 : 0;
    CHECK(r.read_ops == (r.collisions > 0 ? 0u : 2u));
  }
  // 5 of the 25 backoff pairs coincide.
  int same = 0;
  for (int a = 1; a <= 5; ++a)
    for (int b = 1; b <= 5; ++b) same += a == b ? 1 : 0;
  CHECK(same == 5);
  CHECK(std::abs(double(blocked) / rounds - same / 25.0) < 0.015);
}

TEST_CASE("DMRCP: tag ids are shared within the sharing distance only") {
  World w = small_world({{100, 100}, {115, 100}, {300, 100}}, {{100, 100}});
  EventLog log;
  w.log = &log;
  dmrcp_round(w, Dmrcp{});
  CHECK(w.readers[0].known.contains(0));
  CHECK(w.readers[1].known.contains(0));
  CHECK_FALSE(w.readers[2].known.contains(0));
  CHECK(test::count(log, EventKind::share_send, 0) == 1);
  CHECK(test::count(log, EventKind::share_receive, 1) == 1);
  CHECK(test::count(log, EventKind::share_receive, 2) == 0);
}

TEST_CASE("per-round successes never exceed the reader count") {
  for (auto k : {ProtocolKind::nfra, ProtocolKind::gdra, ProtocolKind::frca1, ProtocolKind::frca2,
                 ProtocolKind::dmrcp}) {
    ScenarioConfig c;
    c.protocol = k;
    c.readers = 40;
    c.rounds = 8;
    c.channels = (k == ProtocolKind::nfra || k == ProtocolKind::dmrcp) ? 1 : 4;
    c.arena.side_x = c.arena.side_y = 60;
    c.tags = 400;
    const auto r = run_simulation(c);
    for (const auto& pr : r.per_round) CHECK(pr.successful_reads <= 40u);
  }
}
