#include "memguard/json_io.hpp"

#include <fstream>
#include <limits>

namespace memguard {

void reject_unknown_keys(const json& object, std::initializer_list<std::string_view> allowed,
                         std::string_view context) {
  if (!object.is_object()) {
    throw Error(ErrorCode::Parse, std::string(context) + " must be a JSON object");
  }
  for (const auto& item : object.items()) {
    bool known = false;
    for (auto k : allowed) known = known || item.key() == k;
    if (!known) {
      throw Error(ErrorCode::Parse,
                  "unknown field '" + item.key() + "' in " + std::string(context));
    }
  }
}

namespace {

template <typename T>
T required(const json& j, const char* key, std::string_view context) {
  if (!j.contains(key)) {
    throw Error(ErrorCode::Parse,
                "missing field '" + std::string(key) + "' in " + std::string(context));
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, "field '" + std::string(key) + "' in " +
                                      std::string(context) + ": " + e.what());
  }
}

template <typename T>
void optional_into(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void to_json(json& j, const Band& band) {
  j = json::array({band.min});
  if (band.bounded()) j.push_back(band.max);
  else j.push_back(nullptr);
}

void from_json(const json& j, Band& band) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number()) {
    throw Error(ErrorCode::Parse, "band must be a [min, max] pair");
  }
  band.min = j[0].get<double>();
  band.max = j[1].is_null() ? std::numeric_limits<double>::infinity() : j[1].get<double>();
}

void to_json(json& j, const DeviceProfile& p) {
  j = json{{"name", p.name},
           {"architecture", std::string(to_string(p.architecture))},
           {"idle_mem", p.idle_mem},
           {"active_mem", p.active_mem},
           {"attack_mem", p.attack_mem},
           {"idle_aux", p.idle_aux},
           {"active_aux", p.active_aux},
           {"attack_aux", p.attack_aux},
           {"total_mem_bytes", p.total_mem_bytes}};
}

void from_json(const json& j, DeviceProfile& p) {
  constexpr std::string_view ctx = "profile";
  reject_unknown_keys(j,
                      {"name", "architecture", "idle_mem", "active_mem", "attack_mem",
                       "idle_aux", "active_aux", "attack_aux", "total_mem_bytes"},
                      ctx);
  try {
    p.name = required<std::string>(j, "name", ctx);
    p.architecture = architecture_from_string(required<std::string>(j, "architecture", ctx));
    p.idle_mem = required<Band>(j, "idle_mem", ctx);
    p.active_mem = required<Band>(j, "active_mem", ctx);
    p.attack_mem = required<Band>(j, "attack_mem", ctx);
    p.idle_aux = required<Band>(j, "idle_aux", ctx);
    p.active_aux = required<Band>(j, "active_aux", ctx);
    p.attack_aux = required<Band>(j, "attack_aux", ctx);
    p.total_mem_bytes = required<std::uint64_t>(j, "total_mem_bytes", ctx);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidProfile, e.what());
  }
  p.validate();
}

DeviceProfile profile_from_json(const json& j) {
  if (j.is_string()) return builtin_profile(j.get<std::string>());
  return j.get<DeviceProfile>();
}

void to_json(json& j, const DetectorConfig& c) {
  json actions = json::array();
  for (auto a : c.mitigation_actions) actions.push_back(std::string(to_string(a)));
  j = json{{"reading_threshold", c.reading_threshold},
           {"absolute_threshold", c.absolute_threshold},
           {"trigger_mode", std::string(to_string(c.trigger_mode))},
           {"count_threshold", c.count_threshold},
           {"time_threshold", c.time_threshold},
           {"sample_interval_s", c.sample_interval_s},
           {"mitigation_actions", actions}};
}

void from_json(const json& j, DetectorConfig& c) {
  reject_unknown_keys(j,
                      {"reading_threshold", "absolute_threshold", "trigger_mode",
                       "count_threshold", "time_threshold", "sample_interval_s",
                       "mitigation_actions"},
                      "detector config");
  try {
    optional_into(j, "reading_threshold", c.reading_threshold);
    optional_into(j, "absolute_threshold", c.absolute_threshold);
    if (j.contains("trigger_mode")) {
      c.trigger_mode = trigger_mode_from_string(j.at("trigger_mode").get<std::string>());
    }
    optional_into(j, "count_threshold", c.count_threshold);
    optional_into(j, "time_threshold", c.time_threshold);
    optional_into(j, "sample_interval_s", c.sample_interval_s);
    if (j.contains("mitigation_actions")) {
      c.mitigation_actions.clear();
      for (const auto& a : j.at("mitigation_actions")) {
        c.mitigation_actions.push_back(mitigation_action_from_string(a.get<std::string>()));
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("detector config: ") + e.what());
  }
  c.validate();
}

void to_json(json& j, const DetectorState& s) {
  j = json{{"prev_mem", s.prev_mem ? json(*s.prev_mem) : json(nullptr)},
           {"prev_timestamp_s", s.prev_timestamp_s ? json(*s.prev_timestamp_s) : json(nullptr)},
           {"counter_c1", s.counter_c1},
           {"timer_t1", s.timer_t1},
           {"alert", s.alert},
           {"phase", s.phase == DetectorPhase::Monitoring ? "Monitoring" : "AttackActive"}};
}

void from_json(const json& j, DetectorState& s) {
  constexpr std::string_view ctx = "detector state";
  reject_unknown_keys(j, {"prev_mem", "prev_timestamp_s", "counter_c1", "timer_t1", "alert", "phase"},
                      ctx);
  s = DetectorState{};
  if (j.contains("prev_mem") && !j.at("prev_mem").is_null()) s.prev_mem = j.at("prev_mem").get<double>();
  if (j.contains("prev_timestamp_s") && !j.at("prev_timestamp_s").is_null()) {
    s.prev_timestamp_s = j.at("prev_timestamp_s").get<double>();
  }
  s.counter_c1 = required<int>(j, "counter_c1", ctx);
  s.timer_t1 = required<int>(j, "timer_t1", ctx);
  s.alert = required<bool>(j, "alert", ctx);
  const auto phase = required<std::string>(j, "phase", ctx);
  if (phase == "Monitoring") s.phase = DetectorPhase::Monitoring;
  else if (phase == "AttackActive") s.phase = DetectorPhase::AttackActive;
  else throw Error(ErrorCode::Parse, "unknown detector phase '" + phase + "'");
}

void to_json(json& j, const DetectionEvent& e) {
  j = json{{"kind", std::string(to_string(e.kind))},
           {"device", e.device_id},
           {"t", e.timestamp_s},
           {"mem", e.mem_frac}};
  if (e.kind == EventKind::MitigationApplied) {
    json actions = json::array();
    for (auto a : e.actions) actions.push_back(std::string(to_string(a)));
    j["actions"] = actions;
  }
}

void from_json(const json& j, DetectionEvent& e) {
  constexpr std::string_view ctx = "event";
  reject_unknown_keys(j, {"kind", "device", "t", "mem", "actions"}, ctx);
  e = DetectionEvent{};
  e.kind = event_kind_from_string(required<std::string>(j, "kind", ctx));
  e.device_id = required<std::string>(j, "device", ctx);
  e.timestamp_s = required<double>(j, "t", ctx);
  e.mem_frac = required<double>(j, "mem", ctx);
  if (j.contains("actions")) {
    for (const auto& a : j.at("actions")) {
      e.actions.push_back(mitigation_action_from_string(a.get<std::string>()));
    }
  }
}

void to_json(json& j, const Burst& b) {
  j = json{{"start_s", b.start_s},
           {"duration_s", b.duration_s},
           {"protocol", std::string(to_string(b.protocol))},
           {"rate_pps", b.rate_pps}};
}

void from_json(const json& j, Burst& b) {
  constexpr std::string_view ctx = "burst";
  reject_unknown_keys(j, {"start_s", "duration_s", "protocol", "rate_pps"}, ctx);
  b.start_s = required<double>(j, "start_s", ctx);
  b.duration_s = required<double>(j, "duration_s", ctx);
  b.protocol = j.contains("protocol") ? flood_protocol_from_string(j.at("protocol").get<std::string>())
                                      : FloodProtocol::Udp;
  b.rate_pps = j.contains("rate_pps") ? j.at("rate_pps").get<double>() : 1000.0;
}

void to_json(json& j, const AttackScenario& s) {
  j = json{{"attacker", s.attacker_id}, {"target", s.target_device_id}, {"bursts", s.bursts}};
}

void from_json(const json& j, AttackScenario& s) {
  constexpr std::string_view ctx = "scenario";
  // seed, profile and device settings ride along in scenario files; the CLI
  // reads them, the scenario itself ignores them.
  reject_unknown_keys(j, {"attacker", "target", "bursts", "seed", "profile", "device_ip"}, ctx);
  s = AttackScenario{};
  if (j.contains("attacker")) s.attacker_id = j.at("attacker").get<std::string>();
  s.target_device_id = required<std::string>(j, "target", ctx);
  s.bursts = required<std::vector<Burst>>(j, "bursts", ctx);
  s.validate();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
}

}  // namespace memguard
