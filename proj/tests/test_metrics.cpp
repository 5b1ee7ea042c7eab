#include <doctest.h>

#include "dre/baselines.hpp"
#include "dre/ierap.hpp"
#include "dre/metrics.hpp"
#include "dre/scenario.hpp"
#include "helpers.hpp"

using namespace dre;
using dre::test::small_world;

TEST_CASE("P x T energy arithmetic") {
  CHECK(energy_send(2.3, 0.0003) == doctest::Approx(0.00069).epsilon(1e-12));
  CHECK(energy_read(2.3, 0.46) == doctest::Approx(1.058).epsilon(1e-12));
  CHECK(energy_receive(0.5, 0.0) == 0.0);
}

TEST_CASE("ledger totals") {
  PowerParams pw;
  EnergyLedger empty(0);
  CHECK(network_energy(empty, pw) == 0.0);

  // Listener only: one A, 128 C, one SH.
  EnergyLedger l(2);
  l.charge(0, EnergyKind::receive, Micros{2830});
  for (int i = 0; i < 128; ++i) l.charge(0, EnergyKind::receive, Micros{2000});
  l.charge(0, EnergyKind::receive, Micros{1000});
  const double listen = 0.5 * (0.00283 + 128 * 0.002 + 0.001);
  CHECK(reader_energy(l, 0, pw) == doctest::Approx(listen).epsilon(1e-12));

  // Same plus one beacon and one read.
  l.charge(1, EnergyKind::receive, Micros{2830 + 128 * 2000 + 1000});
  l.charge(1, EnergyKind::send, Micros{300});
  l.charge(1, EnergyKind::read, Micros{460000});
  CHECK(reader_energy(l, 1, pw) == doctest::Approx(listen + 2.3 * 0.0003 + 2.3 * 0.46).epsilon(1e-12));
  CHECK(network_energy(l, pw) == reader_energy(l, 0, pw) + reader_energy(l, 1, pw));
  CHECK_THROWS_AS(l.charge(0, EnergyKind::send, Micros{-1}), SimulationFault);
}

TEST_CASE("two identical isolated readers use exactly twice one reader's energy") {
  World one = small_world({{100, 100}}, {{100, 100}});
  World two = small_world({{100, 100}, {600, 600}}, {{100, 100}, {600, 600}});
  auto p = make_frca1(128);
  test::Forced f1(*p, {{4, 1}});
  test::Forced f2(*p, {{4, 1}, {9, 1}});
  run_round(one, f1);
  run_round(two, f2);
  PowerParams pw;
  CHECK(reader_energy(two.ledger, 0, pw) == reader_energy(two.ledger, 1, pw));
  CHECK(network_energy(two.ledger, pw) == 2 * network_energy(one.ledger, pw));
}

TEST_CASE("energy replays exactly from the event log") {
  for (auto k : {ProtocolKind::ierap, ProtocolKind::frca2, ProtocolKind::dmrcp, ProtocolKind::nfra}) {
    ScenarioConfig c;
    c.protocol = k;
    c.channels = (k == ProtocolKind::frca2 || k == ProtocolKind::ierap) ? 4 : 1;
    c.readers = 60;
    c.rounds = 10;
    c.mobility.model = MobilityModel::random_waypoint;
    c.arena.side_x = c.arena.side_y = 120;
    World w = make_world(c);
    EventLog log;
    w.log = &log;
    auto proto = make_protocol(c);
    for (int i = 0; i < c.rounds; ++i) {
      if (k == ProtocolKind::dmrcp) {
        dmrcp_round(w, static_cast<const Dmrcp&>(*proto));
      } else {
        run_round(w, *proto);
      }
    }
    const EnergyLedger replay = replay_energy(log, w.readers.size());
    for (ReaderId r = 0; r < w.readers.size(); ++r) {
      CHECK(replay.airtime(r).send == w.ledger.airtime(r).send);
      CHECK(replay.airtime(r).receive == w.ledger.airtime(r).receive);
      CHECK(replay.airtime(r).read == w.ledger.airtime(r).read);
    }
    CHECK(network_energy(replay, c.powers) == network_energy(w.ledger, c.powers));
  }
}

TEST_CASE("network energy in the report is the sum of reader energies") {
  ScenarioConfig c;
  c.readers = 50;
  c.rounds = 5;
  c.arena.side_x = c.arena.side_y = 100;
  const auto r = run_simulation(c);
  double sum = 0;
  for (double e : r.reader_energy_j) {
    CHECK(e >= 0.0);
    sum += e;
  }
  CHECK(r.network_energy_j == sum);
}

TEST_CASE("throughput definition") {
  CHECK(throughput(0, 10.0) == 0.0);
  CHECK_THROWS(throughput(3, 0.0));
  ScenarioConfig c;
  c.readers = 50;
  c.rounds = 6;
  c.arena.side_x = c.arena.side_y = 100;
  for (auto k : {ProtocolKind::ierap, ProtocolKind::frca1}) {
    c.protocol = k;
    const auto r = run_simulation(c);
    CHECK(r.throughput_rps * r.elapsed_s == doctest::Approx(double(r.successful_reads)).epsilon(1e-12));
  }
}

TEST_CASE("one uncontested reader reading every round") {
  // Baselines read their field every round whether or not the tag is known.
  World w = small_world({{100, 100}}, {{100, 100}});
  auto p = make_frca1(128);
  test::Forced f(*p, {{1, 1}});
  Micros elapsed{0};
  std::uint64_t reads = 0;
  for (int i = 0; i < 128; ++i) {
    const RoundResult r = run_round(w, f);
    reads += r.successful_reads;
    elapsed += r.duration;
  }
  CHECK(reads == 128);
  CHECK(throughput(reads, to_seconds(elapsed)) == doctest::Approx(128 / to_seconds(w.clock)));
}

TEST_CASE("waiting time: a slot-1 winner waits A + C + beacon + read") {
  World w = small_world({{100, 100}}, {{100, 100}});
  IeRap inner(128, 128);
  test::Forced f(inner, {{1, 1}});
  run_round(w, f);
  w.waiting->finish(w.clock);
  const Micros expect = w.timing.msg_a + w.timing.msg_c + w.timing.beacon + w.timing.read;
  CHECK(w.waiting->mean_seconds() == doctest::Approx(to_seconds(expect)).epsilon(1e-12));
}

TEST_CASE("waiting time: learning only through the bulletin waits until SH") {
  World w = small_world({{100, 100}, {600, 600}}, {{100, 100}});
  IeRap inner(128, 128);
  test::Forced f(inner, {{1, 1}, {2, 2}});
  const RoundResult r = run_round(w, f);
  // Reader 1 has an empty field, so it gains tag 0 only from the bulletin at the round's end.
  const double reader0 = to_seconds(w.timing.msg_a + w.timing.msg_c + w.timing.beacon + w.timing.read);
  const double reader1 = to_seconds(r.duration);
  CHECK(w.waiting->mean_seconds() == doctest::Approx((reader0 + reader1) / 2).epsilon(1e-12));
}

TEST_CASE("waiting tracker scopes") {
  WaitingTracker round(2, WaitingScope::round);
  round.begin_round(Micros{0});
  round.acquired(0, Micros{300});
  round.acquired(0, Micros{100});
  round.end_round(Micros{1000});
  CHECK(round.mean_seconds() == doctest::Approx((100 + 1000) / 2.0 * 1e-6));

  WaitingTracker global(1, WaitingScope::global);
  global.begin_round(Micros{0});
  global.acquired(0, Micros{200});
  global.acquired(0, Micros{500});
  global.end_round(Micros{1000});
  global.finish(Micros{1000});
  CHECK(global.mean_seconds() == doctest::Approx((200 + 300 + 500) / 3.0 * 1e-6));
}

TEST_CASE("skipping a known field costs less than re-reading it") {
  const std::vector<Point> pos{{100, 100}};
  World skip = small_world(pos, pos);
  World reread = small_world(pos, pos);
  skip.readers[0].known.insert(0);
  reread.readers[0].known.insert(0);
  IeRap inner(128, 128);
  test::Forced a(inner, {{10, 1}});
  test::AlwaysRead forced_read(a);
  run_round(skip, a);
  run_round(reread, forced_read);
  PowerParams pw;
  CHECK(reader_energy(skip.ledger, 0, pw) < reader_energy(reread.ledger, 0, pw));
}
