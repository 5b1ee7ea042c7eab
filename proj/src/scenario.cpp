#include "dre/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "dre/sift.hpp"

namespace dre {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

template <typename T>
T parse_number(std::string_view text) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return v;
}

bool parse_bool(std::string_view v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw std::invalid_argument("not a boolean: '" + std::string(v) + "'");
}

std::string_view to_string(MobilityModel m) {
  return m == MobilityModel::static_readers ? "static" : "random_waypoint";
}

std::string_view to_string(WaitingScope s) { return s == WaitingScope::round ? "round" : "global"; }

// One entry per config key: how to read it and how to write it back.
struct Key {
  std::string_view name;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::optional<std::string>(const ScenarioConfig&)> get;
};

template <typename T>
Key int_key(std::string_view name, T ScenarioConfig::*field) {
  return {name, [field](ScenarioConfig& c, std::string_view v) { c.*field = parse_number<T>(v); },
          [field](const ScenarioConfig& c) { return std::optional<std::string>(std::to_string(c.*field)); }};
}

Key micros_key(std::string_view name, Micros TimingParams::*field) {
  return {name,
          [field](ScenarioConfig& c, std::string_view v) { c.timing.*field = Micros{parse_number<std::int64_t>(v)}; },
          [field](const ScenarioConfig& c) { return std::optional<std::string>(std::to_string((c.timing.*field).count())); }};
}

template <typename S>
Key double_key(std::string_view name, S ScenarioConfig::*group, double S::*field) {
  return {name, [group, field](ScenarioConfig& c, std::string_view v) { c.*group.*field = parse_number<double>(v); },
          [group, field](const ScenarioConfig& c) { return std::optional<std::string>(shortest(c.*group.*field)); }};
}

template <typename T>
Key optional_key(std::string_view name, std::optional<T> ScenarioConfig::*field) {
  return {name, [field](ScenarioConfig& c, std::string_view v) { c.*field = parse_number<T>(v); },
          [field](const ScenarioConfig& c) -> std::optional<std::string> {
            if (!(c.*field)) return std::nullopt;
            if constexpr (std::is_floating_point_v<T>) {
              return shortest(*(c.*field));
            } else {
              return std::to_string(*(c.*field));
            }
          }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> all = {
      {"name", [](ScenarioConfig& c, std::string_view v) { c.name = std::string(v); },
       [](const ScenarioConfig& c) -> std::optional<std::string> {
         if (c.name.empty()) return std::nullopt;
         return c.name;
       }},
      {"protocol",
       [](ScenarioConfig& c, std::string_view v) {
         auto p = parse_protocol(v);
         if (!p) throw std::invalid_argument("unknown protocol '" + std::string(v) + "'");
         c.protocol = *p;
       },
       [](const ScenarioConfig& c) { return std::optional<std::string>(std::string(to_string(c.protocol))); }},
      int_key("readers", &ScenarioConfig::readers),
      int_key("tags", &ScenarioConfig::tags),
      int_key("channels", &ScenarioConfig::channels),
      int_key("slots", &ScenarioConfig::slots),
      int_key("rounds", &ScenarioConfig::rounds),
      int_key("seed", &ScenarioConfig::seed),
      double_key("arena_x", &ScenarioConfig::arena, &Arena::side_x),
      double_key("arena_y", &ScenarioConfig::arena, &Arena::side_y),
      double_key("read_range", &ScenarioConfig::arena, &Arena::read_range),
      double_key("interference_range", &ScenarioConfig::arena, &Arena::interference_range),
      optional_key("occupancy_range", &ScenarioConfig::occupancy_range),
      {"mobility",
       [](ScenarioConfig& c, std::string_view v) {
         if (v == "static") {
           c.mobility.model = MobilityModel::static_readers;
         } else if (v == "random_waypoint") {
           c.mobility.model = MobilityModel::random_waypoint;
         } else {
           throw std::invalid_argument("unknown mobility model '" + std::string(v) + "'");
         }
       },
       [](const ScenarioConfig& c) { return std::optional<std::string>(std::string(to_string(c.mobility.model))); }},
      double_key("speed_min", &ScenarioConfig::mobility, &MobilityConfig::speed_min),
      double_key("speed_max", &ScenarioConfig::mobility, &MobilityConfig::speed_max),
      double_key("pause", &ScenarioConfig::mobility, &MobilityConfig::pause),
      micros_key("slot_us", &TimingParams::slot),
      micros_key("read_us", &TimingParams::read),
      micros_key("beacon_us", &TimingParams::beacon),
      micros_key("msg_a_us", &TimingParams::msg_a),
      micros_key("msg_c_us", &TimingParams::msg_c),
      micros_key("msg_sh_us", &TimingParams::msg_sh),
      micros_key("oc_us", &TimingParams::oc),
      micros_key("of_us", &TimingParams::overriding_frame),
      micros_key("eo_us", &TimingParams::eo),
      micros_key("dmrcp_beacon_us", &TimingParams::dmrcp_beacon),
      int_key("dmrcp_cw", &ScenarioConfig::dmrcp_cw),
      optional_key("dmrcp_windows", &ScenarioConfig::dmrcp_windows),
      optional_key("sharing_distance", &ScenarioConfig::sharing_distance),
      {"gdra_p", [](ScenarioConfig& c, std::string_view v) { c.gdra_p = parse_number<double>(v); },
       [](const ScenarioConfig& c) { return std::optional<std::string>(shortest(c.gdra_p)); }},
      optional_key("sift_m", &ScenarioConfig::sift_m),
      double_key("p_reader", &ScenarioConfig::radio, &RadioParams::p_reader),
      double_key("gain", &ScenarioConfig::radio, &RadioParams::g_reader),
      double_key("k0", &ScenarioConfig::radio, &RadioParams::k0),
      double_key("path_loss_exponent", &ScenarioConfig::radio, &RadioParams::path_loss_exponent),
      double_key("interference_noise", &ScenarioConfig::radio, &RadioParams::interference_noise),
      double_key("p_send", &ScenarioConfig::powers, &PowerParams::p_send),
      double_key("p_receive", &ScenarioConfig::powers, &PowerParams::p_receive),
      double_key("p_read", &ScenarioConfig::powers, &PowerParams::p_read),
      {"waiting_scope",
       [](ScenarioConfig& c, std::string_view v) {
         if (v == "round") {
           c.waiting_scope = WaitingScope::round;
         } else if (v == "global") {
           c.waiting_scope = WaitingScope::global;
         } else {
           throw std::invalid_argument("waiting_scope must be round or global");
         }
       },
       [](const ScenarioConfig& c) { return std::optional<std::string>(std::string(to_string(c.waiting_scope))); }},
      {"isp", [](ScenarioConfig& c, std::string_view v) { c.isp = parse_bool(v); },
       [](const ScenarioConfig& c) { return std::optional<std::string>(c.isp ? "true" : "false"); }},
  };
  return all;
}

bool single_channel_only(ProtocolKind k) { return k == ProtocolKind::nfra || k == ProtocolKind::dmrcp; }

}  // namespace

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (readers < 0) fail("readers must be >= 0");
  if (tags < 0) fail("tags must be >= 0");
  if (channels < 1) fail("channels must be >= 1");
  if (slots < 1) fail("slots must be >= 1");
  if (rounds < 0) fail("rounds must be >= 0");
  if (single_channel_only(protocol) && channels != 1)
    fail(std::string(to_string(protocol)) + " runs on a single channel; set channels = 1");
  if (!(gdra_p > 0.0 && gdra_p <= 1.0)) fail("gdra_p must be in (0, 1]");
  if (dmrcp_cw < 1) fail("dmrcp_cw must be >= 1");
  if (dmrcp_windows && *dmrcp_windows < 1) fail("dmrcp_windows must be >= 1");
  if (sift_m && *sift_m < 1) fail("sift_m must be >= 1");
  if (occupancy_range && !(*occupancy_range >= 0.0)) fail("occupancy_range must be >= 0");
  if (sharing_distance && !(*sharing_distance >= 0.0)) fail("sharing_distance must be >= 0");
  try {
    arena.validate();
    mobility.validate();
    timing.validate();
    radio.validate();
    powers.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig c;
  bool have_protocol = false;
  bool have_channels = false;
  std::map<std::string, int, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = "line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = std::find_if(keys().begin(), keys().end(), [&](const Key& k) { return k.name == key; });
    if (it == keys().end()) throw ConfigError(where + "unknown key: " + std::string(key));
    if (auto [pos, fresh] = seen.emplace(std::string(key), line_no); !fresh)
      throw ConfigError(where + "duplicate key: " + std::string(key));
    try {
      it->set(c, value);
    } catch (const std::exception& e) {
      throw ConfigError(where + std::string(key) + ": " + e.what());
    }
    have_protocol |= key == "protocol";
    have_channels |= key == "channels";
  }
  if (!have_protocol) throw ConfigError("missing key: protocol");
  if (!have_channels) c.channels = single_channel_only(c.protocol) ? 1 : 4;
  c.validate();
  return c;
}

std::string render_config(const ScenarioConfig& config) {
  std::string out;
  for (const Key& k : keys()) {
    if (auto v = k.get(config)) {
      out += k.name;
      out += " = ";
      out += *v;
      out += '\n';
    }
  }
  return out;
}

std::vector<ScenarioConfig> preset(std::string_view name, int readers) {
  std::string_view base = name;
  bool literal = false;
  if (base.ends_with("-literal")) {
    base.remove_suffix(8);
    literal = true;
  }

  auto make = [&](ProtocolKind p, int channels, MobilityModel m) {
    ScenarioConfig c;
    c.name = std::string(name);
    c.protocol = p;
    c.readers = readers;
    c.channels = channels;
    c.mobility.model = m;
    if (literal) c.arena = Arena::literal_square();
    return c;
  };

  using P = ProtocolKind;
  std::vector<ScenarioConfig> out;
  if (base == "scenario1") {
    for (P p : {P::ierap, P::gdra, P::frca1, P::frca2}) out.push_back(make(p, 4, MobilityModel::static_readers));
  } else if (base == "scenario2") {
    for (P p : {P::ierap, P::nfra, P::dmrcp, P::frca1, P::frca2, P::gdra})
      out.push_back(make(p, 1, MobilityModel::static_readers));
  } else if (base == "scenario3" || base == "scenario4" || base == "scenario5") {
    for (P p : {P::ierap, P::gdra, P::frca1, P::frca2}) out.push_back(make(p, 4, MobilityModel::random_waypoint));
    for (P p : {P::ierap, P::nfra, P::dmrcp}) out.push_back(make(p, 1, MobilityModel::random_waypoint));
  } else {
    throw ConfigError("unknown preset: " + std::string(name));
  }
  for (const auto& c : out) c.validate();
  return out;
}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 6);
  return std::string(buf, end);
}

std::string emit_csv(std::span<const MetricsReport> reports) {
  std::vector<const MetricsReport*> rows;
  rows.reserve(reports.size());
  for (const auto& r : reports) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const MetricsReport* a, const MetricsReport* b) {
    return std::make_tuple(to_string(a->protocol), a->readers, a->channels, a->seed) <
           std::make_tuple(to_string(b->protocol), b->readers, b->channels, b->seed);
  });
  std::string out =
      "protocol,readers,channels,seed,rounds,successful_reads,throughput_rps,unique_tags_known,"
      "avg_waiting_time_s,network_energy_j\n";
  for (const MetricsReport* r : rows) {
    out += to_string(r->protocol);
    out += ',' + std::to_string(r->readers);
    out += ',' + std::to_string(r->channels);
    out += ',' + std::to_string(r->seed);
    out += ',' + std::to_string(r->rounds);
    out += ',' + std::to_string(r->successful_reads);
    out += ',' + format_number(r->throughput_rps);
    out += ',' + std::to_string(r->unique_tags_known);
    out += ',' + format_number(r->avg_waiting_time_s);
    out += ',' + format_number(r->network_energy_j);
    out += '\n';
  }
  return out;
}

std::string distribution_csv(int slots, int max_competitors) {
  const SlotDistribution d = sift_distribution(slots, max_competitors);
  std::string out = "k,p_k,cumulative\n";
  for (int k = 1; k <= d.slots(); ++k) {
    out += std::to_string(k) + ',' + format_number(d.p(k)) + ',' +
           format_number(d.cumulative[static_cast<std::size_t>(k - 1)]) + '\n';
  }
  return out;
}

std::vector<MetricsReport> run_batch(std::span<const ScenarioConfig> configs, unsigned threads) {
  std::vector<MetricsReport> out(configs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(configs.size(), 1)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        out[i] = run_simulation(configs[i]);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

unsigned threads_from_env() {
  const char* v = std::getenv("DRE_SIM_THREADS");
  if (!v || !*v) return 0;
  try {
    return parse_number<unsigned>(trim(v));
  } catch (const std::exception&) {
    throw ConfigError("DRE_SIM_THREADS must be a nonnegative integer");
  }
}

}  // namespace dre
