#include "memguard/detector.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace memguard {

std::string_view to_string(TriggerMode mode) {
  switch (mode) {
    case TriggerMode::Differential: return "differential";
    case TriggerMode::Absolute: return "absolute";
    case TriggerMode::Both: return "both";
  }
  return "absolute";
}

TriggerMode trigger_mode_from_string(std::string_view text) {
  if (text == "differential") return TriggerMode::Differential;
  if (text == "absolute") return TriggerMode::Absolute;
  if (text == "both") return TriggerMode::Both;
  throw Error(ErrorCode::InvalidConfig, "unknown trigger mode '" + std::string(text) + "'");
}

std::string_view to_string(MitigationAction action) {
  switch (action) {
    case MitigationAction::Blacklist: return "Blacklist";
    case MitigationAction::StopReadWrite: return "StopReadWrite";
    case MitigationAction::Disconnect: return "Disconnect";
  }
  return "Blacklist";
}

MitigationAction mitigation_action_from_string(std::string_view text) {
  for (auto a : full_mitigation()) {
    if (to_string(a) == text) return a;
  }
  throw Error(ErrorCode::Parse, "unknown mitigation action '" + std::string(text) + "'");
}

std::vector<MitigationAction> full_mitigation() {
  return {MitigationAction::Blacklist, MitigationAction::StopReadWrite,
          MitigationAction::Disconnect};
}

void validate_mitigation_order(const std::vector<MitigationAction>& actions) {
  for (std::size_t i = 1; i < actions.size(); ++i) {
    if (static_cast<int>(actions[i]) <= static_cast<int>(actions[i - 1])) {
      throw Error(ErrorCode::ProtocolViolation,
                  "mitigation actions must follow Blacklist, StopReadWrite, Disconnect");
    }
  }
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::AttackStarted: return "AttackStarted";
    case EventKind::MitigationApplied: return "MitigationApplied";
    case EventKind::AttackStopped: return "AttackStopped";
  }
  return "AttackStarted";
}

EventKind event_kind_from_string(std::string_view text) {
  for (auto k : {EventKind::AttackStarted, EventKind::MitigationApplied,
                 EventKind::AttackStopped}) {
    if (to_string(k) == text) return k;
  }
  throw Error(ErrorCode::Parse, "unknown event kind '" + std::string(text) + "'");
}

void DetectorConfig::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidConfig, why); };
  if (!(reading_threshold > 0.0 && reading_threshold <= 1.0)) {
    fail("reading_threshold must lie in (0,1]");
  }
  if (!(absolute_threshold > 0.0 && absolute_threshold < 1.0)) {
    fail("absolute_threshold must lie in (0,1)");
  }
  if (count_threshold < 1) fail("count_threshold must be at least 1");
  if (time_threshold < 1) fail("time_threshold must be at least 1");
  if (!(sample_interval_s > 0.0)) fail("sample_interval_s must be positive");
  validate_mitigation_order(mitigation_actions);
}

namespace {

// Strips binary representation noise from differences of two-decimal table
// entries so 0.66 - 0.10 compares equal to the literal 0.56.
double snap(double value) { return std::round(value * 1e9) / 1e9; }

}  // namespace

double derive_reading_threshold(const DeviceProfile& profile) {
  profile.validate();
  const double pre_attack_min = std::min(profile.idle_mem.min, profile.active_mem.min);
  return snap(profile.attack_mem.max - pre_attack_min);
}

double default_absolute_threshold(const DeviceProfile& profile) {
  profile.validate();
  constexpr double kMargin = 0.02;
  return std::min(snap(profile.active_mem.max + kMargin), 0.99);
}

DetectorConfig default_detector_config(const DeviceProfile& profile) {
  DetectorConfig config;
  config.reading_threshold = derive_reading_threshold(profile);
  config.absolute_threshold = default_absolute_threshold(profile);
  return config;
}

bool trigger_fires(const DetectorConfig& config, double diff, double mem_frac) {
  switch (config.trigger_mode) {
    case TriggerMode::Differential:
      return diff > config.reading_threshold;
    case TriggerMode::Absolute:
      return mem_frac > config.absolute_threshold;
    case TriggerMode::Both:
      // A ramp spreads the jump over several readings, so the differential arm
      // uses the per-step share of the budget.
      return diff > config.reading_threshold / config.count_threshold &&
             mem_frac > config.absolute_threshold;
  }
  return false;
}

StepResult detector_step(const DetectorState& state, const DetectorConfig& config,
                         const ResourceReading& reading) {
  if (!(reading.mem_frac >= 0.0 && reading.mem_frac <= 1.0)) {
    throw Error(ErrorCode::InvalidMeasurement,
                "mem_frac of device '" + reading.device_id + "' is NaN or outside [0,1]");
  }
  if (state.prev_timestamp_s && !(reading.timestamp_s > *state.prev_timestamp_s)) {
    throw Error(ErrorCode::Ordering, "reading of device '" + reading.device_id +
                                         "' is not newer than its predecessor");
  }

  StepResult out{state, {}};
  DetectorState& next = out.state;
  next.prev_timestamp_s = reading.timestamp_s;
  const double current = reading.mem_frac;

  if (!state.prev_mem) {
    next.prev_mem = current;
    return out;
  }

  const double diff = current - *state.prev_mem;
  auto emit = [&](EventKind kind) {
    DetectionEvent e;
    e.kind = kind;
    e.device_id = reading.device_id;
    e.timestamp_s = reading.timestamp_s;
    e.mem_frac = current;
    if (kind == EventKind::MitigationApplied) e.actions = config.mitigation_actions;
    out.events.push_back(std::move(e));
  };

  if (trigger_fires(config, diff, current)) {
    next.timer_t1 = 0;
    if (!next.alert) {
      next.counter_c1 += 1;
      if (next.counter_c1 > config.count_threshold) {
        next.alert = true;
        next.phase = DetectorPhase::AttackActive;
        emit(EventKind::AttackStarted);
        emit(EventKind::MitigationApplied);
      }
    }
  } else if (next.counter_c1 > 0) {
    next.timer_t1 += 1;
    if (next.timer_t1 > config.time_threshold) {
      if (next.alert) emit(EventKind::AttackStopped);
      next.alert = false;
      next.counter_c1 = 0;
      next.timer_t1 = 0;
      next.phase = DetectorPhase::Monitoring;
    }
  }

  next.prev_mem = current;
  return out;
}

std::vector<DetectionEvent> detector_run(const std::vector<ResourceReading>& readings,
                                         const DetectorConfig& config) {
  config.validate();
  std::map<std::string, DetectorState> states;
  std::vector<DetectionEvent> events;
  for (const auto& r : readings) {
    auto& st = states[r.device_id];
    auto res = detector_step(st, config, r);
    st = std::move(res.state);
    for (auto& e : res.events) events.push_back(std::move(e));
  }
  return events;
}

}  // namespace memguard
