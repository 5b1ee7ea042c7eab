#include "dre/protocol.hpp"

#include <algorithm>
#include <array>

namespace dre {

namespace {

constexpr std::array<std::pair<ProtocolKind, std::string_view>, 6> kProtocolNames{{
    {ProtocolKind::ierap, "ierap"},
    {ProtocolKind::nfra, "nfra"},
    {ProtocolKind::gdra, "gdra"},
    {ProtocolKind::frca1, "frca1"},
    {ProtocolKind::frca2, "frca2"},
    {ProtocolKind::dmrcp, "dmrcp"},
}};

}  // namespace

std::string_view to_string(ProtocolKind kind) {
  for (const auto& [k, name] : kProtocolNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<ProtocolKind> parse_protocol(std::string_view name) {
  for (const auto& [k, n] : kProtocolNames)
    if (n == name) return k;
  return std::nullopt;
}

std::string_view to_string(ReaderMode mode) {
  switch (mode) {
    case ReaderMode::idle: return "idle";
    case ReaderMode::contending: return "contending";
    case ReaderMode::reading: return "reading";
    case ReaderMode::leaving: return "leaving";
    case ReaderMode::asleep: return "asleep";
  }
  return "unknown";
}

void TimingParams::validate() const {
  const std::array<std::pair<Micros, const char*>, 10> all{{
      {slot, "slot"},
      {read, "read"},
      {beacon, "beacon"},
      {msg_a, "msg_a"},
      {msg_c, "msg_c"},
      {msg_sh, "msg_sh"},
      {oc, "oc"},
      {overriding_frame, "overriding_frame"},
      {eo, "eo"},
      {dmrcp_beacon, "dmrcp_beacon"},
  }};
  for (const auto& [d, name] : all)
    if (d.count() <= 0) throw std::invalid_argument(std::string(name) + " duration must be positive");
  if (!(beacon < slot)) throw std::invalid_argument("beacon duration must be shorter than the slot");
  if (slots_per_round < 1) throw std::invalid_argument("slots per round must be >= 1");
}

void validate_message(const ServerMessage& msg) {
  if (const auto* a = std::get_if<MsgA>(&msg)) {
    if (a->max_slot < 1 || a->max_channel < 1) throw SimulationFault("message A with empty slot or channel range");
  } else if (const auto* c = std::get_if<MsgC>(&msg)) {
    if (c->slot < 1) throw SimulationFault("message C with slot < 1");
  }
}

bool TagSet::insert(TagId id) {
  if (id >= bits_.size()) bits_.resize(static_cast<std::size_t>(id) + 1, false);
  if (bits_[id]) return false;
  bits_[id] = true;
  ++count_;
  return true;
}

bool TagSet::contains_all(std::span<const TagId> ids) const {
  return std::all_of(ids.begin(), ids.end(), [this](TagId id) { return contains(id); });
}

void IspStore::publish(const IspRecord& record) {
  if (closed_) throw SimulationFault("ISP publish after SH in the same round");
  if (record.s_count < 1) throw SimulationFault("ISP record with S < 1");
  const std::uint64_t key = (static_cast<std::uint64_t>(record.tag) << 32) | record.reporter;
  if (!pairs_.insert(key).second) throw SimulationFault("duplicate ISP record for one (tag, reporter) pair");
  records_.push_back(record);
  if (tag_seen_.insert(record.tag).second) tags_.push_back(record.tag);
  auto it = std::find_if(reporters_.begin(), reporters_.end(),
                         [&](const auto& e) { return e.first == record.reporter; });
  if (it == reporters_.end()) {
    reporters_.emplace_back(record.reporter, record.s_count);
  } else {
    it->second = std::max(it->second, record.s_count);
  }
}

void IspStore::clear() {
  records_.clear();
  tags_.clear();
  reporters_.clear();
  pairs_.clear();
  tag_seen_.clear();
  closed_ = false;
}

std::size_t isp_sync(const IspStore& store, ReaderState& reader) {
  std::size_t added = 0;
  for (TagId tag : store.tags())
    if (reader.known.insert(tag)) ++added;
  for (const auto& [reporter, s] : store.reporters()) {
    if (reporter >= reader.rival_successes.size()) reader.rival_successes.resize(reporter + 1, 0);
    reader.rival_successes[reporter] = std::max(reader.rival_successes[reporter], s);
  }
  return added;
}

SlotAction Protocol::on_slot(ReaderState& reader, const MsgC& msg) const {
  if (reader.mode == ReaderMode::leaving) {
    reader.mode = ReaderMode::asleep;
    return SlotAction::release;
  }
  if (reader.mode == ReaderMode::contending && reader.slot == msg.slot) return SlotAction::beacon;
  return SlotAction::none;
}

std::vector<bool> Protocol::admit(std::span<ReaderState* const> winners, const Arena&) const {
  return std::vector<bool>(winners.size(), true);
}

}  // namespace dre
