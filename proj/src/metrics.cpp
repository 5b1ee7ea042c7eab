#include "dre/metrics.hpp"

#include <stdexcept>

namespace dre {

void PowerParams::validate() const {
  if (!(p_send >= 0.0) || !(p_receive >= 0.0) || !(p_read >= 0.0))
    throw std::invalid_argument("powers must be nonnegative");
}

double energy_send(double power_w, double seconds) { return power_w * seconds; }
double energy_receive(double power_w, double seconds) { return power_w * seconds; }
double energy_read(double power_w, double seconds) { return power_w * seconds; }

void EnergyLedger::charge(ReaderId reader, EnergyKind kind, Micros airtime) {
  if (airtime.count() < 0) throw SimulationFault("negative airtime charged");
  ReaderAirtime& a = airtime_.at(reader);
  switch (kind) {
    case EnergyKind::send: a.send += airtime; break;
    case EnergyKind::receive: a.receive += airtime; break;
    case EnergyKind::read: a.read += airtime; break;
  }
}

double reader_energy(const EnergyLedger& ledger, ReaderId reader, const PowerParams& powers) {
  const ReaderAirtime& a = ledger.airtime(reader);
  return energy_read(powers.p_read, to_seconds(a.read)) + energy_send(powers.p_send, to_seconds(a.send)) +
         energy_receive(powers.p_receive, to_seconds(a.receive));
}

double network_energy(const EnergyLedger& ledger, const PowerParams& powers) {
  double total = 0.0;
  for (std::size_t i = 0; i < ledger.readers(); ++i)
    total += reader_energy(ledger, static_cast<ReaderId>(i), powers);
  return total;
}

WaitingTracker::WaitingTracker(std::size_t readers, WaitingScope scope)
    : scope_(scope), first_in_round_(readers), last_acquired_(readers, Micros{0}) {}

void WaitingTracker::begin_round(Micros start) {
  round_start_ = start;
  for (auto& f : first_in_round_) f.reset();
}

void WaitingTracker::acquired(ReaderId reader, Micros at) {
  if (scope_ == WaitingScope::global) {
    total_ += static_cast<long double>((at - last_acquired_.at(reader)).count());
    ++samples_;
    last_acquired_[reader] = at;
    return;
  }
  auto& f = first_in_round_.at(reader);
  if (!f || at < *f) f = at;
}

void WaitingTracker::end_round(Micros end) {
  if (scope_ == WaitingScope::global) return;
  for (const auto& f : first_in_round_) {
    const Micros wait = f ? *f - round_start_ : end - round_start_;
    total_ += static_cast<long double>(wait.count());
    ++samples_;
  }
}

void WaitingTracker::finish(Micros end) {
  if (scope_ != WaitingScope::global) return;
  for (Micros last : last_acquired_) {
    if (end > last) {
      total_ += static_cast<long double>((end - last).count());
      ++samples_;
    }
  }
}

double WaitingTracker::mean_seconds() const {
  if (samples_ == 0) return 0.0;
  return static_cast<double>(total_ / samples_) * 1e-6;
}

double throughput(std::uint64_t successful_reads, double elapsed_s) {
  if (!(elapsed_s > 0.0)) throw std::invalid_argument("throughput: elapsed time must be positive");
  return static_cast<double>(successful_reads) / elapsed_s;
}

}  // namespace dre
