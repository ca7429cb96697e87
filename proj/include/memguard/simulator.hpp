#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "memguard/detector.hpp"
#include "memguard/telemetry.hpp"

namespace memguard {

enum class FloodProtocol { Tcp, Udp };

std::string_view to_string(FloodProtocol protocol);
FloodProtocol flood_protocol_from_string(std::string_view text);

struct Burst {
  double start_s = 0.0;
  double duration_s = 0.0;
  FloodProtocol protocol = FloodProtocol::Udp;
  double rate_pps = 1000.0;

  double end_s() const { return start_s + duration_s; }
  bool covers(double t) const { return t >= start_s && t < end_s(); }
  bool operator==(const Burst&) const = default;
};

/// Flood bursts one attacker aims at one device's memory.
struct AttackScenario {
  std::string attacker_id = "attacker-0";
  std::string target_device_id;
  std::vector<Burst> bursts;

  /// Sorted, non-overlapping, positive durations and rates.
  void validate() const;
  bool active_at(double t) const;
  bool operator==(const AttackScenario&) const = default;
};

/// One 60 s UDP flood starting at 300 s against `target`.
AttackScenario reference_scenario(const std::string& target);

struct StatusSpan {
  double start_s = 0.0;
  StatusClass status = StatusClass::Idle;
  bool operator==(const StatusSpan&) const = default;
};

/// Legitimate (non-attack) activity over time. With a positive period the
/// spans repeat every period_s seconds.
struct StatusSchedule {
  std::vector<StatusSpan> spans{{0.0, StatusClass::Idle}, {60.0, StatusClass::Active}};
  double period_s = 120.0;

  StatusClass status_at(double t) const;
  void validate() const;
};

enum class LinkState { Connected, Disconnected };
std::string_view to_string(LinkState state);

struct SimParams {
  int ramp_samples = 2;
  int decay_samples = 4;
};

/// Deterministic simulated device. Sampling advances an internal random
/// stream, so a copy taken at any point replays identically.
class DeviceSim {
 public:
  DeviceSim(std::string device_id, DeviceProfile profile, std::uint64_t seed,
            StatusSchedule schedule = {}, SimParams params = {});

  const std::string& device_id() const { return device_id_; }
  const DeviceProfile& profile() const { return profile_; }
  const StatusSchedule& schedule() const { return schedule_; }
  const SimParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }
  LinkState link_state() const { return link_; }
  bool rw_enabled() const { return rw_enabled_; }
  /// Memory fraction of the most recent sample (0 before the first one).
  double level() const { return level_; }

  /// Produces the reading at time t. `attack_flag` is the scenario's ground
  /// truth; it only reaches the device's memory while the link is up.
  ResourceReading sample(double t, bool attack_flag);

  /// Applies mitigation steps in place.
  void mitigate(const std::vector<MitigationAction>& actions, double at_s);

 private:
  enum class Phase { Baseline, Attack, Decay, Frozen };

  double uniform(const Band& band);
  double draw_aux(StatusClass status);
  void start_decay();

  std::string device_id_;
  DeviceProfile profile_;
  std::uint64_t seed_;
  StatusSchedule schedule_;
  SimParams params_;
  std::mt19937_64 rng_;

  LinkState link_ = LinkState::Connected;
  bool rw_enabled_ = true;
  bool sampled_ = false;
  Phase phase_ = Phase::Baseline;
  double level_ = 0.0;
  double from_ = 0.0;
  double to_ = 0.0;
  int step_ = 0;
  double last_mitigation_s_ = -1.0;
};

/// Returns a copy of `device` with the mitigation steps applied.
DeviceSim apply_mitigation(DeviceSim device, const std::vector<MitigationAction>& actions,
                           double at_s);

/// floor(total/interval) readings at t = 0, interval, 2*interval, ...
std::vector<ResourceReading> simulate_trace(DeviceSim device, const AttackScenario& scenario,
                                            double interval_s, double total_s);

struct ClosedLoopResult {
  std::vector<ResourceReading> readings;
  std::vector<DetectionEvent> events;
  DeviceSim device;
};

/// Samples, detects and feeds mitigation back into the device before the
/// next sample.
ClosedLoopResult run_closed_loop(DeviceSim device, const AttackScenario& scenario,
                                 const DetectorConfig& config, double interval_s,
                                 double total_s);

}  // namespace memguard
