#include "memguard/monitor.hpp"

namespace memguard {

MonitorResult monitor_stream(const SampleOptions& options, const DeviceProfile& profile,
                             const UsageSource& source, Pacer& pacer,
                             const DetectorConfig& config, const MonitorHooks& hooks,
                             const std::atomic<bool>* cancel) {
  config.validate();
  MonitorResult result;
  sample_host(options, profile, source, pacer, [&](const ResourceReading& r) {
    if (hooks.on_reading) hooks.on_reading(r);
    StepResult step = detector_step(result.state, config, r);
    result.state = std::move(step.state);
    result.readings.push_back(r);
    for (auto& e : step.events) {
      if (hooks.on_event) hooks.on_event(e);
      result.events.push_back(std::move(e));
    }
    return !(cancel && cancel->load());
  });
  return result;
}

}  // namespace memguard
