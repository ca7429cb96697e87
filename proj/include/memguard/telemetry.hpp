#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memguard/error.hpp"

namespace memguard {

enum class Architecture { GeneralPurpose, Microcontroller };

enum class StatusClass { Idle, Active, UnderAttack, Unknown };

std::string_view to_string(Architecture arch);
std::string_view to_string(StatusClass status);
Architecture architecture_from_string(std::string_view text);
StatusClass status_from_string(std::string_view text);

/// Closed interval of a resource metric. `max` may be +infinity for the
/// open-ended under-attack auxiliary band of microcontroller profiles.
struct Band {
  double min = 0.0;
  double max = 0.0;

  bool bounded() const { return max != std::numeric_limits<double>::infinity(); }
  double width() const { return max - min; }
  bool operator==(const Band&) const = default;
};

/// Per-status resource ranges for one device architecture.
///
/// The auxiliary metric is the CPU fraction on general-purpose boards and the
/// per-window thread time in seconds on microcontrollers.
struct DeviceProfile {
  std::string name;
  Architecture architecture = Architecture::GeneralPurpose;
  Band idle_mem;
  Band active_mem;
  Band attack_mem;
  Band idle_aux;
  Band active_aux;
  Band attack_aux;
  std::uint64_t total_mem_bytes = 0;

  const Band& mem_band(StatusClass status) const;
  const Band& aux_band(StatusClass status) const;

  /// Throws Error(InvalidProfile) when any invariant is violated.
  void validate() const;
};

/// Raspberry Pi column of the reference measurements (1 GiB board).
DeviceProfile raspberry_pi_profile();
/// Arduino column of the reference measurements (2 KiB SRAM board).
DeviceProfile arduino_profile();
/// Looks up a built-in profile by name ("raspberry-pi", "arduino").
DeviceProfile builtin_profile(std::string_view name);
std::vector<std::string> builtin_profile_names();

struct ResourceReading {
  std::string device_id;
  double timestamp_s = 0.0;
  double mem_frac = 0.0;
  std::optional<double> cpu_frac;
  std::optional<double> thread_time_s;
  std::optional<bool> attack_flag;

  bool operator==(const ResourceReading&) const = default;
};

/// Rounds a reading onto the log grid: milliseconds for timestamps, 1e-6 for
/// fractions and thread time. Readings on the grid survive a log round trip
/// bit-exactly.
ResourceReading quantize(ResourceReading reading);
double quantize_fraction(double value);
double quantize_seconds(double value);

/// Checks the per-reading invariants (ranges, exactly one auxiliary metric).
void validate_reading(const ResourceReading& reading);

double normalize_mem(std::uint64_t raw_used_bytes, const DeviceProfile& profile);
/// Microcontroller boards report free memory; converted as 1 - free/total.
double normalize_free_mem(std::uint64_t raw_free_bytes, const DeviceProfile& profile);
double normalize_cpu(double raw_cpu_percent);

StatusClass classify_status(const ResourceReading& reading, const DeviceProfile& profile);
/// Classification on the memory fraction alone, without the metric-set check.
StatusClass classify_mem(double mem_frac, const DeviceProfile& profile);

// ---------------------------------------------------------------------------
// Live acquisition

/// One raw acquisition from a usage source, before normalization.
struct RawUsage {
  std::uint64_t used_bytes = 0;
  std::optional<double> cpu_percent;
  std::optional<double> thread_time_s;
};

using UsageSource = std::function<RawUsage()>;

/// Reads /proc/meminfo and /proc/stat. CPU is the aggregate busy share
/// between consecutive calls.
class HostUsageProbe {
 public:
  HostUsageProbe();

  RawUsage read();
  std::uint64_t total_mem_bytes() const { return total_mem_bytes_; }

  /// Percent of aggregate CPU busy since the previous call.
  double cpu_percent();

 private:
  struct CpuTimes {
    std::uint64_t busy = 0;
    std::uint64_t total = 0;
  };
  static CpuTimes read_cpu_times();

  std::uint64_t total_mem_bytes_ = 0;
  CpuTimes last_cpu_;
};

/// Profile whose capacity is the local host's physical memory; bands are
/// taken from `bands_from`.
DeviceProfile host_profile(const DeviceProfile& bands_from);

/// Time base for the sampler. The default implementation uses the steady
/// clock; tests substitute a virtual one.
class Pacer {
 public:
  virtual ~Pacer() = default;
  virtual double now_s() = 0;
  virtual void sleep_until_s(double t) = 0;
};

class SteadyPacer final : public Pacer {
 public:
  SteadyPacer();
  double now_s() override;
  void sleep_until_s(double t) override;

 private:
  std::int64_t origin_ns_;
};

struct SampleOptions {
  std::string device_id = "host";
  double interval_s = 5.0;
  double duration_s = 60.0;
};

/// Emits floor(duration/interval) normalized readings, one every interval,
/// to `sink` in timestamp order. Returning false from the sink stops early.
/// Reports the number of readings emitted.
std::size_t sample_host(const SampleOptions& options, const DeviceProfile& profile,
                        const UsageSource& source, Pacer& pacer,
                        const std::function<bool(const ResourceReading&)>& sink);

/// Convenience overload: samples the local host in real time.
std::vector<ResourceReading> sample_host(double interval_s, double duration_s,
                                         const DeviceProfile& profile);

}  // namespace memguard
