#pragma once

#include <atomic>
#include <functional>
#include <vector>

#include "memguard/detector.hpp"
#include "memguard/telemetry.hpp"

namespace memguard {

struct MonitorHooks {
  /// Every reading, in order, before it reaches the detector.
  std::function<void(const ResourceReading&)> on_reading;
  /// Every event as it is emitted. MitigationApplied handlers carry out the
  /// listed actions.
  std::function<void(const DetectionEvent&)> on_event;
};

struct MonitorResult {
  std::vector<ResourceReading> readings;
  std::vector<DetectionEvent> events;
  DetectorState state;
};

/// Sampler and detector as one ordered pipeline: each reading is detected
/// (and any mitigation carried out) before the next sample is taken.
MonitorResult monitor_stream(const SampleOptions& options, const DeviceProfile& profile,
                             const UsageSource& source, Pacer& pacer,
                             const DetectorConfig& config, const MonitorHooks& hooks,
                             const std::atomic<bool>* cancel = nullptr);

}  // namespace memguard
