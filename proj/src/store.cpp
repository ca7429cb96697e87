#include "memguard/store.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "memguard/json_io.hpp"

namespace memguard {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kReadingsSchema = "memguard/readings";
constexpr std::string_view kEventsSchema = "memguard/events";
constexpr std::string_view kExperimentSchema = "memguard/experiment";

std::string quoted(const std::string& s) { return json(s).dump(); }

std::string fixed3(double v) { return fmt::format("{:.3f}", v); }
std::string fixed6(double v) { return fmt::format("{:.6f}", v); }

std::string header_line(std::string_view schema, const std::string& profile) {
  std::string line = fmt::format("{{\"schema\":\"{}\",\"version\":{}", schema, kLogSchemaVersion);
  if (!profile.empty()) line += ",\"profile\":" + quoted(profile);
  return line + "}";
}

LogHeader parse_header(std::string_view line, std::string_view expected_schema) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error&) {
    throw CorruptionError(1, "log header is not valid JSON");
  }
  if (!j.is_object() || !j.contains("schema") || !j.contains("version")) {
    throw CorruptionError(1, "log header lacks schema/version");
  }
  LogHeader h;
  h.schema = j.at("schema").get<std::string>();
  h.version = j.at("version").get<int>();
  if (j.contains("profile")) h.profile = j.at("profile").get<std::string>();
  if (h.schema != expected_schema) {
    throw Error(ErrorCode::Version, "expected a " + std::string(expected_schema) +
                                        " log, found " + h.schema);
  }
  if (h.version != kLogSchemaVersion) {
    throw Error(ErrorCode::Version, fmt::format("log schema version {} is not supported (want {})",
                                                h.version, kLogSchemaVersion));
  }
  return h;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes via a sibling temp file and rename so readers never see a torn file.
void write_atomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Transport, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::Transport, "short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

struct SplitLines {
  std::vector<std::string_view> lines;
  bool last_unterminated = false;
};

SplitLines split_lines(std::string_view text) {
  SplitLines out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      out.lines.push_back(text.substr(pos));
      out.last_unterminated = true;
      break;
    }
    out.lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

}  // namespace

std::string format_reading_line(const ResourceReading& r) {
  std::string line = "{\"device\":" + quoted(r.device_id) + ",\"t\":" + fixed3(r.timestamp_s) +
                     ",\"mem\":" + fixed6(r.mem_frac);
  if (r.cpu_frac) line += ",\"cpu\":" + fixed6(*r.cpu_frac);
  if (r.thread_time_s) line += ",\"thread_time\":" + fixed6(*r.thread_time_s);
  if (r.attack_flag) line += std::string(",\"attack\":") + (*r.attack_flag ? "true" : "false");
  return line + "}";
}

ResourceReading parse_reading_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("reading is not valid JSON: ") + e.what());
  }
  reject_unknown_keys(j, {"device", "t", "mem", "cpu", "thread_time", "attack"}, "reading");
  try {
    ResourceReading r;
    r.device_id = j.at("device").get<std::string>();
    r.timestamp_s = j.at("t").get<double>();
    r.mem_frac = j.at("mem").get<double>();
    if (j.contains("cpu")) r.cpu_frac = j.at("cpu").get<double>();
    if (j.contains("thread_time")) r.thread_time_s = j.at("thread_time").get<double>();
    if (j.contains("attack")) r.attack_flag = j.at("attack").get<bool>();
    validate_reading(r);
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed reading: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::Parse, std::string("invalid reading: ") + e.what());
  }
}

std::string format_event_line(const DetectionEvent& e) {
  std::string line = "{\"kind\":\"" + std::string(to_string(e.kind)) +
                     "\",\"device\":" + quoted(e.device_id) + ",\"t\":" + fixed3(e.timestamp_s) +
                     ",\"mem\":" + fixed6(e.mem_frac);
  if (e.kind == EventKind::MitigationApplied) {
    line += ",\"actions\":[";
    for (std::size_t i = 0; i < e.actions.size(); ++i) {
      if (i) line += ",";
      line += "\"" + std::string(to_string(e.actions[i])) + "\"";
    }
    line += "]";
  }
  return line + "}";
}

DetectionEvent parse_event_line(std::string_view line) {
  try {
    return json::parse(line).get<DetectionEvent>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed event: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

ReadingLog::ReadingLog(fs::path path, LogHeader header,
                       std::unique_ptr<std::FILE, FileCloser> file)
    : path_(std::move(path)), header_(std::move(header)), file_(std::move(file)) {}

ReadingLog ReadingLog::create(const fs::path& path, const std::string& profile_name) {
  std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "wb"));
  if (!f) throw Error(ErrorCode::Transport, "cannot create " + path.string());
  const std::string line = header_line(kReadingsSchema, profile_name) + "\n";
  std::fwrite(line.data(), 1, line.size(), f.get());
  std::fflush(f.get());
  LogHeader h{std::string(kReadingsSchema), kLogSchemaVersion, profile_name};
  return ReadingLog(path, std::move(h), std::move(f));
}

ReadingLog ReadingLog::open(const fs::path& path) {
  const std::string text = read_file(path);
  const SplitLines split = split_lines(text);
  if (split.lines.empty()) throw CorruptionError(1, path.string() + ": missing log header");
  LogHeader header = parse_header(split.lines.front(), kReadingsSchema);

  std::map<std::string, double> last;
  std::size_t count = 0;
  std::size_t keep_bytes = text.size();
  for (std::size_t i = 1; i < split.lines.size(); ++i) {
    const bool tail = i + 1 == split.lines.size() && split.last_unterminated;
    try {
      const auto r = parse_reading_line(split.lines[i]);
      last[r.device_id] = r.timestamp_s;
      ++count;
    } catch (const Error&) {
      if (!tail) {
        throw CorruptionError(i + 1, fmt::format("{}:{}: unparseable reading", path.string(), i + 1));
      }
      keep_bytes = static_cast<std::size_t>(split.lines[i].data() - text.data());
    }
  }
  if (keep_bytes != text.size()) fs::resize_file(path, keep_bytes);
  else if (split.last_unterminated) {
    // Complete final record without its newline: terminate it.
    std::ofstream(path, std::ios::app | std::ios::binary) << '\n';
  }

  std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "ab"));
  if (!f) throw Error(ErrorCode::Transport, "cannot append to " + path.string());
  ReadingLog log(path, std::move(header), std::move(f));
  log.last_timestamp_ = std::move(last);
  log.count_ = count;
  return log;
}

void ReadingLog::append(const ResourceReading& reading) {
  validate_reading(reading);
  const ResourceReading r = quantize(reading);
  auto it = last_timestamp_.find(r.device_id);
  if (it != last_timestamp_.end() && !(r.timestamp_s > it->second)) {
    throw Error(ErrorCode::Ordering, fmt::format("reading at t={:.3f} for '{}' is not newer than {:.3f}",
                                                 r.timestamp_s, r.device_id, it->second));
  }
  const std::string line = format_reading_line(r) + "\n";
  if (std::fwrite(line.data(), 1, line.size(), file_.get()) != line.size() ||
      std::fflush(file_.get()) != 0) {
    throw Error(ErrorCode::Transport, "short write to " + path_.string());
  }
  last_timestamp_[r.device_id] = r.timestamp_s;
  ++count_;
}

void append_reading(ReadingLog& log, const ResourceReading& reading) { log.append(reading); }

LoadedReadings load_reading_log(const fs::path& path, const ReadingFilter& filter) {
  const std::string text = read_file(path);
  const SplitLines split = split_lines(text);
  if (split.lines.empty()) throw CorruptionError(1, path.string() + ": missing log header");

  LoadedReadings out;
  out.header = parse_header(split.lines.front(), kReadingsSchema);
  std::map<std::string, double> last;
  for (std::size_t i = 1; i < split.lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const bool tail = i + 1 == split.lines.size() && split.last_unterminated;
    if (split.lines[i].empty() && !tail) {
      throw CorruptionError(line_no, fmt::format("{}:{}: empty line", path.string(), line_no));
    }
    ResourceReading r;
    try {
      r = parse_reading_line(split.lines[i]);
    } catch (const Error& e) {
      if (tail) {
        out.truncated_tail = true;
        break;
      }
      throw CorruptionError(line_no, fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
    auto it = last.find(r.device_id);
    if (it != last.end() && r.timestamp_s < it->second) {
      throw CorruptionError(line_no, fmt::format("{}:{}: timestamp goes backwards for '{}'",
                                                 path.string(), line_no, r.device_id));
    }
    last[r.device_id] = r.timestamp_s;
    if (filter.device_id && r.device_id != *filter.device_id) continue;
    if (filter.from_s && r.timestamp_s < *filter.from_s) continue;
    if (filter.to_s && r.timestamp_s >= *filter.to_s) continue;
    out.readings.push_back(std::move(r));
  }
  std::stable_sort(out.readings.begin(), out.readings.end(),
                   [](const ResourceReading& a, const ResourceReading& b) {
                     return a.timestamp_s < b.timestamp_s;
                   });
  return out;
}

std::vector<ResourceReading> load_readings(const fs::path& path, const ReadingFilter& filter) {
  return load_reading_log(path, filter).readings;
}

void write_events(const fs::path& path, const std::vector<DetectionEvent>& events) {
  std::string content = header_line(kEventsSchema, "") + "\n";
  for (const auto& e : events) content += format_event_line(e) + "\n";
  write_atomically(path, content);
}

std::vector<DetectionEvent> load_events(const fs::path& path) {
  const std::string text = read_file(path);
  const SplitLines split = split_lines(text);
  if (split.lines.empty()) throw CorruptionError(1, path.string() + ": missing log header");
  parse_header(split.lines.front(), kEventsSchema);
  std::vector<DetectionEvent> out;
  for (std::size_t i = 1; i < split.lines.size(); ++i) {
    const bool tail = i + 1 == split.lines.size() && split.last_unterminated;
    try {
      out.push_back(parse_event_line(split.lines[i]));
    } catch (const Error& e) {
      if (tail) break;
      throw CorruptionError(i + 1, fmt::format("{}:{}: {}", path.string(), i + 1, e.what()));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

void require_ipv4(std::string_view ip) {
  in_addr addr{};
  const std::string s(ip);
  if (inet_pton(AF_INET, s.c_str(), &addr) != 1) {
    throw Error(ErrorCode::Parse, "'" + s + "' is not an IPv4 address");
  }
}

Blacklist Blacklist::open(const fs::path& path) {
  Blacklist b;
  b.path_ = path;
  if (fs::exists(path)) {
    const json j = read_json_file(path.string());
    reject_unknown_keys(j, {"schema", "version", "blacklist"}, "blacklist");
    for (const auto& ip : j.at("blacklist")) {
      const auto s = ip.get<std::string>();
      require_ipv4(s);
      b.entries_.insert(s);
    }
  }
  return b;
}

bool Blacklist::add(const std::string& ip) {
  require_ipv4(ip);
  const bool inserted = entries_.insert(ip).second;
  if (inserted) persist();
  return inserted;
}

bool Blacklist::remove(const std::string& ip) {
  require_ipv4(ip);
  const bool erased = entries_.erase(ip) > 0;
  if (erased) persist();
  return erased;
}

bool Blacklist::contains(const std::string& ip) const {
  require_ipv4(ip);
  return entries_.count(ip) > 0;
}

void Blacklist::persist() const {
  json j{{"schema", "memguard/blacklist"}, {"version", kLogSchemaVersion},
         {"blacklist", json(std::vector<std::string>(entries_.begin(), entries_.end()))}};
  write_atomically(path_, j.dump(2) + "\n");
}

std::string_view to_string(DeviceStatus status) {
  return status == DeviceStatus::Online ? "Online" : "Offline";
}

namespace {

json record_to_json(const DeviceRecord& d) {
  return json{{"ip", d.ip},
              {"mac", d.mac ? json(*d.mac) : json(nullptr)},
              {"status", std::string(to_string(d.status))},
              {"open_ports", d.open_ports},
              {"blacklisted", d.blacklisted},
              {"last_seen_s", d.last_seen_s}};
}

DeviceRecord record_from_json(const json& j) {
  reject_unknown_keys(j, {"ip", "mac", "status", "open_ports", "blacklisted", "last_seen_s"},
                      "device record");
  DeviceRecord d;
  d.ip = j.at("ip").get<std::string>();
  require_ipv4(d.ip);
  if (j.contains("mac") && !j.at("mac").is_null()) d.mac = j.at("mac").get<std::string>();
  const auto status = j.at("status").get<std::string>();
  if (status == "Online") d.status = DeviceStatus::Online;
  else if (status == "Offline") d.status = DeviceStatus::Offline;
  else throw Error(ErrorCode::Parse, "unknown device status '" + status + "'");
  d.open_ports = j.at("open_ports").get<std::vector<int>>();
  d.blacklisted = j.at("blacklisted").get<bool>();
  d.last_seen_s = j.at("last_seen_s").get<double>();
  return d;
}

}  // namespace

Registry Registry::open(const fs::path& path) {
  Registry r;
  r.path_ = path;
  if (fs::exists(path)) {
    const json j = read_json_file(path.string());
    reject_unknown_keys(j, {"schema", "version", "devices"}, "registry");
    try {
      for (const auto& d : j.at("devices")) r.devices_.push_back(record_from_json(d));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
    }
  }
  return r;
}

void Registry::upsert(DeviceRecord record) {
  require_ipv4(record.ip);
  if (auto* existing = find(record.ip)) {
    record.blacklisted = record.blacklisted || existing->blacklisted;
    *existing = std::move(record);
    return;
  }
  devices_.push_back(std::move(record));
}

const DeviceRecord* Registry::find(const std::string& ip) const {
  auto it = std::find_if(devices_.begin(), devices_.end(),
                         [&](const DeviceRecord& d) { return d.ip == ip; });
  return it == devices_.end() ? nullptr : &*it;
}

DeviceRecord* Registry::find(const std::string& ip) {
  return const_cast<DeviceRecord*>(std::as_const(*this).find(ip));
}

void Registry::save() const {
  json devices = json::array();
  for (const auto& d : devices_) devices.push_back(record_to_json(d));
  json j{{"schema", "memguard/registry"}, {"version", kLogSchemaVersion}, {"devices", devices}};
  write_atomically(path_, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

SummaryMetrics compute_summary(const std::vector<ResourceReading>& readings,
                               const std::vector<DetectionEvent>& events,
                               const DeviceProfile& profile) {
  SummaryMetrics m;
  m.samples = readings.size();
  bool labelled = false;
  for (const auto& r : readings) {
    labelled = labelled || r.attack_flag.has_value();
    if (r.attack_flag.value_or(false)) ++m.attack_samples;
  }

  auto index_of = [&](const DetectionEvent& e) -> std::size_t {
    for (std::size_t i = 0; i < readings.size(); ++i) {
      if (readings[i].device_id == e.device_id && readings[i].timestamp_s == e.timestamp_s) {
        return i;
      }
    }
    throw CorruptionError(0, fmt::format("event {} at t={:.3f} has no matching reading",
                                         to_string(e.kind), e.timestamp_s));
  };

  std::optional<std::size_t> first_start;
  for (const auto& e : events) {
    if (e.kind == EventKind::AttackStarted) {
      ++m.attacks_started;
      const std::size_t idx = index_of(e);
      const bool truth = readings[idx].attack_flag.value_or(false);
      if (labelled && !truth) ++m.false_positives;
      if (!first_start) first_start = idx;
      if (labelled && truth && !m.detection_latency_samples) {
        std::size_t onset = idx;
        while (onset > 0 && readings[onset - 1].device_id == e.device_id &&
               readings[onset - 1].attack_flag.value_or(false)) {
          --onset;
        }
        m.detection_latency_samples = static_cast<long>(idx - onset);
        m.detection_latency_s = quantize_seconds(readings[idx].timestamp_s - readings[onset].timestamp_s);
      }
    } else if (e.kind == EventKind::AttackStopped) {
      ++m.attacks_stopped;
      const std::size_t idx = index_of(e);
      if (first_start && !m.stop_latency_samples && idx > *first_start) {
        for (std::size_t j = *first_start + 1; j <= idx; ++j) {
          if (readings[j].device_id == e.device_id &&
              readings[j].mem_frac <= profile.active_mem.max) {
            m.stop_latency_samples = static_cast<long>(idx - j);
            m.stop_latency_s = quantize_seconds(readings[idx].timestamp_s - readings[j].timestamp_s);
            break;
          }
        }
      }
    }
  }
  m.attack_ongoing_at_end = m.attacks_started > m.attacks_stopped;
  return m;
}

namespace {

json summary_to_json(const SummaryMetrics& m) {
  auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
  return json{{"samples", m.samples},
              {"attack_samples", m.attack_samples},
              {"attacks_started", m.attacks_started},
              {"attacks_stopped", m.attacks_stopped},
              {"false_positives", m.false_positives},
              {"detection_latency_samples", opt(m.detection_latency_samples)},
              {"detection_latency_s", opt(m.detection_latency_s)},
              {"stop_latency_samples", opt(m.stop_latency_samples)},
              {"stop_latency_s", opt(m.stop_latency_s)},
              {"attack_ongoing_at_end", m.attack_ongoing_at_end}};
}

SummaryMetrics summary_from_json(const json& j) {
  SummaryMetrics m;
  m.samples = j.at("samples").get<std::size_t>();
  m.attack_samples = j.at("attack_samples").get<std::size_t>();
  m.attacks_started = j.at("attacks_started").get<std::size_t>();
  m.attacks_stopped = j.at("attacks_stopped").get<std::size_t>();
  m.false_positives = j.at("false_positives").get<std::size_t>();
  auto opt_long = [&](const char* k) -> std::optional<long> {
    return j.at(k).is_null() ? std::nullopt : std::optional<long>(j.at(k).get<long>());
  };
  auto opt_double = [&](const char* k) -> std::optional<double> {
    return j.at(k).is_null() ? std::nullopt : std::optional<double>(j.at(k).get<double>());
  };
  m.detection_latency_samples = opt_long("detection_latency_samples");
  m.detection_latency_s = opt_double("detection_latency_s");
  m.stop_latency_samples = opt_long("stop_latency_samples");
  m.stop_latency_s = opt_double("stop_latency_s");
  m.attack_ongoing_at_end = j.at("attack_ongoing_at_end").get<bool>();
  return m;
}

}  // namespace

void write_experiment(const fs::path& dir, const ExperimentRecord& record,
                      const std::vector<ResourceReading>& readings) {
  fs::create_directories(dir);
  {
    ReadingLog log = ReadingLog::create(dir / "readings.jsonl", record.profile.name);
    for (const auto& r : readings) log.append(r);
  }
  write_events(dir / "events.jsonl", record.events);

  json events = json::array();
  for (const auto& e : record.events) events.push_back(json::parse(format_event_line(e)));
  json j{{"schema", kExperimentSchema},
         {"version", kLogSchemaVersion},
         {"device_id", record.device_id},
         {"device_ip", record.device_ip},
         {"profile", record.profile},
         {"scenario", record.scenario},
         {"config", record.config},
         {"seed", record.seed},
         {"interval_s", record.interval_s},
         {"duration_s", record.duration_s},
         {"events", events},
         {"summary", summary_to_json(record.summary)}};
  write_atomically(dir / "experiment.json", j.dump(2) + "\n");

  Registry registry = Registry::open(dir / "registry.json");
  Blacklist blacklist = Blacklist::open(dir / "blacklist.json");
  if (!record.device_ip.empty()) {
    DeviceRecord d;
    d.ip = record.device_ip;
    d.status = DeviceStatus::Online;
    d.last_seen_s = readings.empty() ? 0.0 : readings.back().timestamp_s;
    for (const auto& e : record.events) {
      const bool blacklists =
          e.kind == EventKind::MitigationApplied &&
          std::find(e.actions.begin(), e.actions.end(), MitigationAction::Blacklist) != e.actions.end();
      if (blacklists) {
        d.blacklisted = true;
        blacklist.add(record.device_ip);
      }
      if (e.kind == EventKind::MitigationApplied &&
          std::find(e.actions.begin(), e.actions.end(), MitigationAction::Disconnect) != e.actions.end()) {
        d.status = DeviceStatus::Offline;
      }
    }
    registry.upsert(d);
  }
  registry.save();
  if (!fs::exists(dir / "blacklist.json")) {
    json empty{{"schema", "memguard/blacklist"}, {"version", kLogSchemaVersion},
               {"blacklist", json::array()}};
    write_atomically(dir / "blacklist.json", empty.dump(2) + "\n");
  }
}

LoadedExperiment load_experiment(const fs::path& dir) {
  for (const char* name : {"readings.jsonl", "events.jsonl", "experiment.json"}) {
    if (!fs::exists(dir / name)) {
      throw Error(ErrorCode::NotFound, "experiment file missing: " + (dir / name).string());
    }
  }
  LoadedExperiment out;
  const json j = read_json_file((dir / "experiment.json").string());
  try {
    reject_unknown_keys(j, {"schema", "version", "device_id", "device_ip", "profile", "scenario",
                            "config", "seed", "interval_s", "duration_s", "events", "summary"},
                        "experiment record");
    if (j.at("schema").get<std::string>() != kExperimentSchema ||
        j.at("version").get<int>() != kLogSchemaVersion) {
      throw Error(ErrorCode::Version, "unsupported experiment record schema");
    }
    ExperimentRecord& rec = out.record;
    rec.device_id = j.at("device_id").get<std::string>();
    rec.device_ip = j.at("device_ip").get<std::string>();
    rec.profile = profile_from_json(j.at("profile"));
    rec.scenario = j.at("scenario").get<AttackScenario>();
    rec.config = j.at("config").get<DetectorConfig>();
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.interval_s = j.at("interval_s").get<double>();
    rec.duration_s = j.at("duration_s").get<double>();
    for (const auto& e : j.at("events")) rec.events.push_back(e.get<DetectionEvent>());
    rec.summary = summary_from_json(j.at("summary"));
  } catch (const json::exception& e) {
    throw CorruptionError(0, "experiment.json: " + std::string(e.what()));
  }

  out.readings = load_readings(dir / "readings.jsonl");
  out.events = load_events(dir / "events.jsonl");
  if (out.events != out.record.events) {
    throw CorruptionError(0, "events.jsonl disagrees with the event list in experiment.json");
  }
  if (compute_summary(out.readings, out.events, out.record.profile) != out.record.summary) {
    throw CorruptionError(0, "stored summary metrics do not match the readings and events");
  }
  return out;
}

std::string format_device_record(const DeviceRecord& record) {
  return record_to_json(record).dump();
}

std::string format_summary(const SummaryMetrics& summary) {
  return summary_to_json(summary).dump();
}

}  // namespace memguard
