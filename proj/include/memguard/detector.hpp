#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memguard/telemetry.hpp"

namespace memguard {

enum class TriggerMode { Differential, Absolute, Both };

std::string_view to_string(TriggerMode mode);
TriggerMode trigger_mode_from_string(std::string_view text);

/// The mitigation steps, in the only order they may be applied.
enum class MitigationAction { Blacklist, StopReadWrite, Disconnect };

std::string_view to_string(MitigationAction action);
MitigationAction mitigation_action_from_string(std::string_view text);
std::vector<MitigationAction> full_mitigation();

/// Throws ProtocolViolation unless `actions` is a prefix-closed subsequence of
/// Blacklist, StopReadWrite, Disconnect: strictly increasing, no repeats.
void validate_mitigation_order(const std::vector<MitigationAction>& actions);

struct DetectorConfig {
  /// Largest memory-fraction jump expected between readings.
  double reading_threshold = 0.56;
  /// Memory fraction above which a reading is suspicious.
  double absolute_threshold = 0.37;
  TriggerMode trigger_mode = TriggerMode::Absolute;
  /// A start is declared once the suspicious counter exceeds this.
  int count_threshold = 3;
  /// A stop is declared once the quiet timer exceeds this.
  int time_threshold = 4;
  double sample_interval_s = 3.0;
  /// Carried by MitigationApplied events.
  std::vector<MitigationAction> mitigation_actions = full_mitigation();

  void validate() const;
  bool operator==(const DetectorConfig&) const = default;
};

enum class DetectorPhase { Monitoring, AttackActive };

struct DetectorState {
  std::optional<double> prev_mem;
  std::optional<double> prev_timestamp_s;
  int counter_c1 = 0;
  int timer_t1 = 0;
  bool alert = false;
  DetectorPhase phase = DetectorPhase::Monitoring;

  bool operator==(const DetectorState&) const = default;
};

enum class EventKind { AttackStarted, MitigationApplied, AttackStopped };

std::string_view to_string(EventKind kind);
EventKind event_kind_from_string(std::string_view text);

struct DetectionEvent {
  EventKind kind = EventKind::AttackStarted;
  std::string device_id;
  double timestamp_s = 0.0;
  double mem_frac = 0.0;
  std::vector<MitigationAction> actions;  // MitigationApplied only

  bool operator==(const DetectionEvent&) const = default;
};

struct StepResult {
  DetectorState state;
  std::vector<DetectionEvent> events;
};

/// Attack-band maximum minus the smallest pre-attack
/// (idle or active) memory fraction.
double derive_reading_threshold(const DeviceProfile& profile);

/// Highest legitimate usage plus a 0.02 margin, clamped to 0.99.
double default_absolute_threshold(const DeviceProfile& profile);

/// Both thresholds derived from `profile`, remaining fields at their defaults.
DetectorConfig default_detector_config(const DeviceProfile& profile);

/// Whether a reading counts as suspicious under `config`.
bool trigger_fires(const DetectorConfig& config, double diff, double mem_frac);

/// Advances the per-device detection state machine by one reading.
///
/// The first reading only primes the previous-value slot. Afterwards a
/// suspicious reading resets the quiet timer and, while no alert is raised,
/// bumps the counter; when the counter exceeds count_threshold the alert is
/// raised and AttackStarted plus MitigationApplied are emitted. A quiet
/// reading with a non-zero counter advances the timer; past time_threshold the
/// machine returns to its initial phase, emitting AttackStopped only if an
/// alert had been raised.
StepResult detector_step(const DetectorState& state, const DetectorConfig& config,
                         const ResourceReading& reading);

/// Folds detector_step over a stream, keeping independent state per device.
std::vector<DetectionEvent> detector_run(const std::vector<ResourceReading>& readings,
                                         const DetectorConfig& config);

}  // namespace memguard
