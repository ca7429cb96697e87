#include "memguard/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace memguard {

std::string_view to_string(FloodProtocol protocol) {
  return protocol == FloodProtocol::Tcp ? "tcp-flood" : "udp-flood";
}

FloodProtocol flood_protocol_from_string(std::string_view text) {
  if (text == "tcp-flood" || text == "tcp" || text == "TCP") return FloodProtocol::Tcp;
  if (text == "udp-flood" || text == "udp" || text == "UDP") return FloodProtocol::Udp;
  throw Error(ErrorCode::InvalidScenario, "unknown flood protocol '" + std::string(text) + "'");
}

std::string_view to_string(LinkState state) {
  return state == LinkState::Connected ? "Connected" : "Disconnected";
}

void AttackScenario::validate() const {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidScenario, why); };
  if (target_device_id.empty()) fail("scenario has no target device");
  for (std::size_t i = 0; i < bursts.size(); ++i) {
    const Burst& b = bursts[i];
    if (!(b.start_s >= 0.0) || !std::isfinite(b.start_s)) fail("burst start must be >= 0");
    if (!(b.duration_s > 0.0)) fail("burst duration must be positive");
    if (!(b.rate_pps > 0.0)) fail("burst rate must be positive");
    if (i > 0 && b.start_s < bursts[i - 1].end_s()) {
      fail("bursts must be sorted by start and must not overlap");
    }
  }
}

bool AttackScenario::active_at(double t) const {
  return std::any_of(bursts.begin(), bursts.end(), [t](const Burst& b) { return b.covers(t); });
}

AttackScenario reference_scenario(const std::string& target) {
  AttackScenario s;
  s.target_device_id = target;
  s.bursts.push_back({300.0, 60.0, FloodProtocol::Udp, 1000.0});
  return s;
}

StatusClass StatusSchedule::status_at(double t) const {
  if (spans.empty()) return StatusClass::Idle;
  if (period_s > 0.0) t = std::fmod(t, period_s);
  StatusClass s = spans.front().status;
  for (const auto& span : spans) {
    if (span.start_s <= t) s = span.status;
    else break;
  }
  return s;
}

void StatusSchedule::validate() const {
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (spans[i].status != StatusClass::Idle && spans[i].status != StatusClass::Active) {
      throw Error(ErrorCode::InvalidScenario, "baseline schedule may only use Idle and Active");
    }
    if (i > 0 && !(spans[i].start_s > spans[i - 1].start_s)) {
      throw Error(ErrorCode::InvalidScenario, "baseline schedule spans must be increasing");
    }
  }
  if (period_s < 0.0) throw Error(ErrorCode::InvalidScenario, "negative schedule period");
}

DeviceSim::DeviceSim(std::string device_id, DeviceProfile profile, std::uint64_t seed,
                     StatusSchedule schedule, SimParams params)
    : device_id_(std::move(device_id)),
      profile_(std::move(profile)),
      seed_(seed),
      schedule_(std::move(schedule)),
      params_(params),
      rng_(seed) {
  profile_.validate();
  schedule_.validate();
  if (params_.ramp_samples < 1 || params_.decay_samples < 1) {
    throw Error(ErrorCode::InvalidInput, "ramp and decay must span at least one sample");
  }
}

double DeviceSim::uniform(const Band& band) {
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  // Open-ended bands are sampled over [min, 2*min].
  const double hi = band.bounded() ? band.max : 2.0 * band.min;
  return band.min + u * (hi - band.min);
}

double DeviceSim::draw_aux(StatusClass status) {
  return uniform(profile_.aux_band(status));
}

void DeviceSim::start_decay() {
  phase_ = Phase::Decay;
  from_ = level_;
  to_ = quantize_fraction(uniform(profile_.active_mem));
  step_ = 0;
}

ResourceReading DeviceSim::sample(double t, bool attack_flag) {
  const bool reaches_memory = attack_flag && link_ == LinkState::Connected;
  StatusClass aux_status = StatusClass::Idle;
  double level = level_;

  if (reaches_memory) {
    if (phase_ != Phase::Attack) {
      from_ = sampled_ ? level_ : uniform(profile_.mem_band(schedule_.status_at(t)));
      to_ = uniform(profile_.attack_mem);
      step_ = 0;
      phase_ = Phase::Attack;
    }
    ++step_;
    if (step_ <= params_.ramp_samples) {
      level = from_ + (to_ - from_) * step_ / params_.ramp_samples;
    } else {
      level = uniform(profile_.attack_mem);
    }
    aux_status = StatusClass::UnderAttack;
  } else {
    if (phase_ == Phase::Attack) start_decay();
    if (phase_ == Phase::Decay) {
      ++step_;
      level = from_ + (to_ - from_) * step_ / params_.decay_samples;
      aux_status = StatusClass::Active;
      if (step_ >= params_.decay_samples) {
        level = to_;
        phase_ = rw_enabled_ ? Phase::Baseline : Phase::Frozen;
      }
    } else if (phase_ == Phase::Frozen || (!rw_enabled_ && sampled_)) {
      // Read/write halted: legitimate writes no longer move memory.
      phase_ = Phase::Frozen;
      aux_status = StatusClass::Idle;
    } else {
      aux_status = schedule_.status_at(t);
      level = uniform(profile_.mem_band(aux_status));
    }
  }

  ResourceReading r;
  r.device_id = device_id_;
  r.timestamp_s = t;
  r.mem_frac = std::clamp(level, 0.0, 1.0);
  const double aux = draw_aux(aux_status);
  if (profile_.architecture == Architecture::GeneralPurpose) {
    r.cpu_frac = std::clamp(aux, 0.0, 1.0);
  } else {
    r.thread_time_s = aux;
  }
  r.attack_flag = attack_flag;
  r = quantize(std::move(r));
  level_ = r.mem_frac;
  sampled_ = true;
  return r;
}

void DeviceSim::mitigate(const std::vector<MitigationAction>& actions, double at_s) {
  validate_mitigation_order(actions);
  if (last_mitigation_s_ >= 0.0 && at_s < last_mitigation_s_) {
    throw Error(ErrorCode::ProtocolViolation, "mitigation applied out of time order");
  }
  last_mitigation_s_ = at_s;
  for (auto a : actions) {
    switch (a) {
      case MitigationAction::Blacklist:
        break;  // registry-level; no physical effect on the device
      case MitigationAction::StopReadWrite:
        rw_enabled_ = false;
        break;
      case MitigationAction::Disconnect:
        link_ = LinkState::Disconnected;
        if (phase_ == Phase::Attack) start_decay();
        break;
    }
  }
}

DeviceSim apply_mitigation(DeviceSim device, const std::vector<MitigationAction>& actions,
                           double at_s) {
  device.mitigate(actions, at_s);
  return device;
}

namespace {

std::size_t sample_count(double interval_s, double total_s) {
  if (!(interval_s > 0.0)) throw Error(ErrorCode::InvalidInput, "interval must be positive");
  if (!(total_s >= interval_s)) {
    throw Error(ErrorCode::InvalidInput, "total duration must cover at least one interval");
  }
  return static_cast<std::size_t>(std::floor(total_s / interval_s + 1e-9));
}

void check_target(const DeviceSim& device, const AttackScenario& scenario) {
  scenario.validate();
  if (scenario.target_device_id != device.device_id()) {
    throw Error(ErrorCode::InvalidScenario, "scenario targets unknown device '" +
                                                scenario.target_device_id + "'");
  }
}

}  // namespace

std::vector<ResourceReading> simulate_trace(DeviceSim device, const AttackScenario& scenario,
                                            double interval_s, double total_s) {
  check_target(device, scenario);
  const std::size_t n = sample_count(interval_s, total_s);
  std::vector<ResourceReading> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = quantize_seconds(static_cast<double>(k) * interval_s);
    out.push_back(device.sample(t, scenario.active_at(t)));
  }
  return out;
}

ClosedLoopResult run_closed_loop(DeviceSim device, const AttackScenario& scenario,
                                 const DetectorConfig& config, double interval_s,
                                 double total_s) {
  check_target(device, scenario);
  config.validate();
  const std::size_t n = sample_count(interval_s, total_s);
  ClosedLoopResult result{{}, {}, device};
  result.readings.reserve(n);
  DetectorState state;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = quantize_seconds(static_cast<double>(k) * interval_s);
    ResourceReading r = result.device.sample(t, scenario.active_at(t));
    StepResult step = detector_step(state, config, r);
    state = std::move(step.state);
    for (auto& e : step.events) {
      if (e.kind == EventKind::MitigationApplied) result.device.mitigate(e.actions, t);
      result.events.push_back(std::move(e));
    }
    result.readings.push_back(std::move(r));
  }
  return result;
}

}  // namespace memguard
