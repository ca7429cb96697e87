#pragma once

#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "memguard/detector.hpp"
#include "memguard/simulator.hpp"
#include "memguard/telemetry.hpp"

namespace memguard {

inline constexpr int kLogSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Line formats. Timestamps carry exactly three fractional digits and
// fractions six, so values on the quantization grid round-trip bit-exactly.

std::string format_reading_line(const ResourceReading& reading);
ResourceReading parse_reading_line(std::string_view line);
std::string format_event_line(const DetectionEvent& event);
DetectionEvent parse_event_line(std::string_view line);

struct LogHeader {
  std::string schema;
  int version = kLogSchemaVersion;
  std::string profile;
};

/// Append-only reading log (readings.jsonl).
class ReadingLog {
 public:
  /// Starts a fresh log, replacing any existing file.
  static ReadingLog create(const std::filesystem::path& path, const std::string& profile_name);
  /// Reopens an existing log for appending. A torn final line left by an
  /// interrupted write is cut off first.
  static ReadingLog open(const std::filesystem::path& path);

  ReadingLog(ReadingLog&&) noexcept = default;
  ReadingLog& operator=(ReadingLog&&) noexcept = default;

  /// Validates and durably appends one reading. Timestamps must strictly
  /// increase per device.
  void append(const ResourceReading& reading);

  const LogHeader& header() const { return header_; }
  const std::filesystem::path& path() const { return path_; }
  std::size_t size() const { return count_; }

 private:
  struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
  };

  ReadingLog(std::filesystem::path path, LogHeader header,
             std::unique_ptr<std::FILE, FileCloser> file);

  std::filesystem::path path_;
  LogHeader header_;
  std::unique_ptr<std::FILE, FileCloser> file_;
  std::map<std::string, double> last_timestamp_;
  std::size_t count_ = 0;
};

void append_reading(ReadingLog& log, const ResourceReading& reading);

struct ReadingFilter {
  std::optional<std::string> device_id;
  std::optional<double> from_s;  // inclusive
  std::optional<double> to_s;    // exclusive
};

struct LoadedReadings {
  LogHeader header;
  std::vector<ResourceReading> readings;
  bool truncated_tail = false;
};

LoadedReadings load_reading_log(const std::filesystem::path& path, const ReadingFilter& filter = {});
std::vector<ResourceReading> load_readings(const std::filesystem::path& path,
                                           const ReadingFilter& filter = {});

void write_events(const std::filesystem::path& path, const std::vector<DetectionEvent>& events);
std::vector<DetectionEvent> load_events(const std::filesystem::path& path);

// ---------------------------------------------------------------------------

/// Throws Error(Parse) unless `ip` is a dotted-quad IPv4 address.
void require_ipv4(std::string_view ip);

/// Set of blacklisted IPv4 addresses, rewritten on every mutation.
class Blacklist {
 public:
  /// Loads `path` if it exists, otherwise starts empty.
  static Blacklist open(const std::filesystem::path& path);

  bool add(const std::string& ip);     // true when newly added
  bool remove(const std::string& ip);  // true when it was present
  bool contains(const std::string& ip) const;
  const std::set<std::string>& entries() const { return entries_; }

 private:
  void persist() const;

  std::filesystem::path path_;
  std::set<std::string> entries_;
};

enum class DeviceStatus { Online, Offline };
std::string_view to_string(DeviceStatus status);

struct DeviceRecord {
  std::string ip;
  std::optional<std::string> mac;
  DeviceStatus status = DeviceStatus::Offline;
  std::vector<int> open_ports;
  bool blacklisted = false;
  double last_seen_s = 0.0;

  bool operator==(const DeviceRecord&) const = default;
};

/// One compact JSON object per record.
std::string format_device_record(const DeviceRecord& record);

/// Scanned devices keyed by IP (registry.json).
class Registry {
 public:
  static Registry open(const std::filesystem::path& path);

  /// Inserts or replaces the record with the same IP; keeps the blacklist
  /// flag of an existing record.
  void upsert(DeviceRecord record);
  const DeviceRecord* find(const std::string& ip) const;
  DeviceRecord* find(const std::string& ip);
  const std::vector<DeviceRecord>& devices() const { return devices_; }
  void save() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::vector<DeviceRecord> devices_;
};

// ---------------------------------------------------------------------------

/// Outcome metrics of one experiment, recomputable from readings and events.
struct SummaryMetrics {
  std::size_t samples = 0;
  std::size_t attack_samples = 0;
  std::size_t attacks_started = 0;
  std::size_t attacks_stopped = 0;
  std::size_t false_positives = 0;
  /// Samples from the labelled onset of the attack to the first AttackStarted.
  std::optional<long> detection_latency_samples;
  std::optional<double> detection_latency_s;
  /// Samples from the first post-start reading back inside the legitimate
  /// bands to the following AttackStopped.
  std::optional<long> stop_latency_samples;
  std::optional<double> stop_latency_s;
  bool attack_ongoing_at_end = false;

  bool operator==(const SummaryMetrics&) const = default;
};

SummaryMetrics compute_summary(const std::vector<ResourceReading>& readings,
                               const std::vector<DetectionEvent>& events,
                               const DeviceProfile& profile);

std::string format_summary(const SummaryMetrics& summary);

struct ExperimentRecord {
  std::string device_id;
  std::string device_ip;
  DeviceProfile profile;
  AttackScenario scenario;
  DetectorConfig config;
  std::uint64_t seed = 0;
  double interval_s = 0.0;
  double duration_s = 0.0;
  std::vector<DetectionEvent> events;
  SummaryMetrics summary;
};

/// Writes readings.jsonl, events.jsonl, experiment.json, registry.json and
/// blacklist.json into `dir`, creating it if needed.
void write_experiment(const std::filesystem::path& dir, const ExperimentRecord& record,
                      const std::vector<ResourceReading>& readings);

struct LoadedExperiment {
  ExperimentRecord record;
  std::vector<ResourceReading> readings;
  std::vector<DetectionEvent> events;
};

/// Loads an experiment directory and checks that the stored summary and
/// event list agree with what the readings imply; raises a corruption error
/// otherwise.
LoadedExperiment load_experiment(const std::filesystem::path& dir);

}  // namespace memguard
