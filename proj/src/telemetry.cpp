#include "memguard/telemetry.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace memguard {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidProfile: return "invalid-profile";
    case ErrorCode::InvalidMeasurement: return "invalid-measurement";
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::InvalidConfig: return "invalid-config";
    case ErrorCode::Ordering: return "ordering";
    case ErrorCode::Acquisition: return "acquisition";
    case ErrorCode::InvalidScenario: return "invalid-scenario";
    case ErrorCode::ProtocolViolation: return "protocol-violation";
    case ErrorCode::Version: return "version";
    case ErrorCode::Corruption: return "corruption";
    case ErrorCode::NotFound: return "not-found";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Refused: return "refused";
    case ErrorCode::Transport: return "transport";
    case ErrorCode::Startup: return "startup";
    case ErrorCode::Scan: return "scan";
  }
  return "unknown";
}

std::string_view to_string(Architecture arch) {
  return arch == Architecture::GeneralPurpose ? "general-purpose" : "microcontroller";
}

std::string_view to_string(StatusClass status) {
  switch (status) {
    case StatusClass::Idle: return "Idle";
    case StatusClass::Active: return "Active";
    case StatusClass::UnderAttack: return "UnderAttack";
    case StatusClass::Unknown: return "Unknown";
  }
  return "Unknown";
}

Architecture architecture_from_string(std::string_view text) {
  if (text == "general-purpose") return Architecture::GeneralPurpose;
  if (text == "microcontroller") return Architecture::Microcontroller;
  throw Error(ErrorCode::InvalidProfile, "unknown architecture '" + std::string(text) + "'");
}

StatusClass status_from_string(std::string_view text) {
  for (auto s : {StatusClass::Idle, StatusClass::Active, StatusClass::UnderAttack,
                 StatusClass::Unknown}) {
    if (to_string(s) == text) return s;
  }
  throw Error(ErrorCode::Parse, "unknown status '" + std::string(text) + "'");
}

const Band& DeviceProfile::mem_band(StatusClass status) const {
  switch (status) {
    case StatusClass::Idle: return idle_mem;
    case StatusClass::Active: return active_mem;
    case StatusClass::UnderAttack: return attack_mem;
    case StatusClass::Unknown: break;
  }
  throw Error(ErrorCode::InvalidInput, "no memory band for status Unknown");
}

const Band& DeviceProfile::aux_band(StatusClass status) const {
  switch (status) {
    case StatusClass::Idle: return idle_aux;
    case StatusClass::Active: return active_aux;
    case StatusClass::UnderAttack: return attack_aux;
    case StatusClass::Unknown: break;
  }
  throw Error(ErrorCode::InvalidInput, "no auxiliary band for status Unknown");
}

namespace {

void check_band(const Band& band, std::string_view what, bool fraction, bool allow_unbounded) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::InvalidProfile, std::string(what) + ": " + why);
  };
  if (std::isnan(band.min) || std::isnan(band.max)) fail("NaN bound");
  if (band.min > band.max) fail("min exceeds max");
  if (!band.bounded() && !allow_unbounded) fail("unbounded max not allowed here");
  if (band.min < 0.0) fail("negative bound");
  if (fraction && band.max > 1.0) fail("fraction bound above 1");
}

}  // namespace

void DeviceProfile::validate() const {
  if (total_mem_bytes == 0) {
    throw Error(ErrorCode::InvalidProfile, "profile '" + name + "' has zero memory capacity");
  }
  const bool cpu_aux = architecture == Architecture::GeneralPurpose;
  check_band(idle_mem, "idle_mem", true, false);
  check_band(active_mem, "active_mem", true, false);
  check_band(attack_mem, "attack_mem", true, false);
  check_band(idle_aux, "idle_aux", cpu_aux, false);
  check_band(active_aux, "active_aux", cpu_aux, false);
  check_band(attack_aux, "attack_aux", cpu_aux, true);
  if (!(idle_mem.max <= active_mem.max && active_mem.max <= attack_mem.max)) {
    throw Error(ErrorCode::InvalidProfile,
                "memory bands of '" + name + "' do not escalate monotonically");
  }
}

DeviceProfile raspberry_pi_profile() {
  DeviceProfile p;
  p.name = "raspberry-pi";
  p.architecture = Architecture::GeneralPurpose;
  p.idle_mem = {0.10, 0.20};
  p.active_mem = {0.20, 0.35};
  p.attack_mem = {0.36, 0.66};
  p.idle_aux = {0.0055, 0.0088};
  p.active_aux = {0.0088, 0.015};
  p.attack_aux = {0.015, 0.165};
  p.total_mem_bytes = 1ULL << 30;
  return p;
}

DeviceProfile arduino_profile() {
  DeviceProfile p;
  p.name = "arduino";
  p.architecture = Architecture::Microcontroller;
  p.idle_mem = {0.08, 0.11};
  p.active_mem = {0.11, 0.16};
  p.attack_mem = {0.17, 0.45};
  p.idle_aux = {1.0, 20.0};
  p.active_aux = {21.0, 45.0};
  p.attack_aux = {45.0, std::numeric_limits<double>::infinity()};
  p.total_mem_bytes = 2048;
  return p;
}

DeviceProfile builtin_profile(std::string_view name) {
  if (name == "raspberry-pi" || name == "rpi") return raspberry_pi_profile();
  if (name == "arduino") return arduino_profile();
  throw Error(ErrorCode::NotFound, "no built-in profile named '" + std::string(name) + "'");
}

std::vector<std::string> builtin_profile_names() { return {"raspberry-pi", "arduino"}; }

double quantize_fraction(double value) { return std::round(value * 1e6) / 1e6; }

double quantize_seconds(double value) { return std::round(value * 1e3) / 1e3; }

ResourceReading quantize(ResourceReading r) {
  r.timestamp_s = quantize_seconds(r.timestamp_s);
  r.mem_frac = quantize_fraction(r.mem_frac);
  if (r.cpu_frac) r.cpu_frac = quantize_fraction(*r.cpu_frac);
  if (r.thread_time_s) r.thread_time_s = quantize_fraction(*r.thread_time_s);
  return r;
}

void validate_reading(const ResourceReading& r) {
  if (!std::isfinite(r.timestamp_s) || r.timestamp_s < 0.0) {
    throw Error(ErrorCode::InvalidMeasurement, "timestamp must be a non-negative number");
  }
  if (!(r.mem_frac >= 0.0 && r.mem_frac <= 1.0)) {
    throw Error(ErrorCode::InvalidMeasurement, "mem_frac outside [0,1]");
  }
  if (r.cpu_frac && !(*r.cpu_frac >= 0.0 && *r.cpu_frac <= 1.0)) {
    throw Error(ErrorCode::InvalidMeasurement, "cpu_frac outside [0,1]");
  }
  if (r.thread_time_s && !(*r.thread_time_s >= 0.0 && std::isfinite(*r.thread_time_s))) {
    throw Error(ErrorCode::InvalidMeasurement, "thread_time_s must be non-negative");
  }
  if (r.cpu_frac.has_value() == r.thread_time_s.has_value()) {
    throw Error(ErrorCode::InvalidInput,
                "reading must carry exactly one of cpu_frac and thread_time_s");
  }
}

double normalize_mem(std::uint64_t raw_used_bytes, const DeviceProfile& profile) {
  if (profile.total_mem_bytes == 0) {
    throw Error(ErrorCode::InvalidProfile, "memory capacity of zero");
  }
  const double frac =
      static_cast<double>(raw_used_bytes) / static_cast<double>(profile.total_mem_bytes);
  return std::min(frac, 1.0);
}

double normalize_free_mem(std::uint64_t raw_free_bytes, const DeviceProfile& profile) {
  if (profile.total_mem_bytes == 0) {
    throw Error(ErrorCode::InvalidProfile, "memory capacity of zero");
  }
  const double free_frac =
      std::min(static_cast<double>(raw_free_bytes) / static_cast<double>(profile.total_mem_bytes), 1.0);
  return 1.0 - free_frac;
}

double normalize_cpu(double raw_cpu_percent) {
  if (std::isnan(raw_cpu_percent) || raw_cpu_percent < 0.0) {
    throw Error(ErrorCode::InvalidMeasurement, "CPU percentage must be non-negative");
  }
  return std::clamp(raw_cpu_percent / 100.0, 0.0, 1.0);
}

StatusClass classify_mem(double mem_frac, const DeviceProfile& profile) {
  if (std::isnan(mem_frac)) return StatusClass::Unknown;

  // Severity order; later entries win ties at shared boundaries.
  constexpr std::array<StatusClass, 3> order{StatusClass::Idle, StatusClass::Active,
                                             StatusClass::UnderAttack};
  double lo = profile.idle_mem.min;
  double hi = profile.idle_mem.max;
  for (auto s : order) {
    lo = std::min(lo, profile.mem_band(s).min);
    hi = std::max(hi, profile.mem_band(s).max);
  }
  if (mem_frac < lo || mem_frac > hi) return StatusClass::Unknown;

  // Nearest band by distance; a value inside a gap goes to whichever side of
  // the gap midpoint it falls on.
  StatusClass best = StatusClass::Unknown;
  double best_dist = std::numeric_limits<double>::infinity();
  for (auto s : order) {
    const Band& b = profile.mem_band(s);
    double dist = 0.0;
    if (mem_frac < b.min) dist = b.min - mem_frac;
    else if (mem_frac > b.max) dist = mem_frac - b.max;
    if (dist <= best_dist) {
      best_dist = dist;
      best = s;
    }
  }
  return best;
}

StatusClass classify_status(const ResourceReading& reading, const DeviceProfile& profile) {
  const bool general = profile.architecture == Architecture::GeneralPurpose;
  if (general && (reading.thread_time_s || !reading.cpu_frac)) {
    throw Error(ErrorCode::InvalidInput,
                "general-purpose profile expects a CPU reading and no thread time");
  }
  if (!general && (reading.cpu_frac || !reading.thread_time_s)) {
    throw Error(ErrorCode::InvalidInput,
                "microcontroller profile expects a thread-time reading and no CPU");
  }
  return classify_mem(reading.mem_frac, profile);
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t meminfo_field_kib(const std::string& text, std::string_view key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.compare(0, key.size(), key) == 0 && line.size() > key.size() &&
        line[key.size()] == ':') {
      std::istringstream fields(line.substr(key.size() + 1));
      std::uint64_t kib = 0;
      if (fields >> kib) return kib;
    }
  }
  throw Error(ErrorCode::Acquisition, "memory metric '" + std::string(key) +
                                          "' unavailable in /proc/meminfo");
}

std::string slurp(const char* path, std::string_view metric) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::Acquisition,
                std::string(metric) + " source " + path + " is not readable");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

HostUsageProbe::HostUsageProbe() {
  const std::string meminfo = slurp("/proc/meminfo", "memory");
  total_mem_bytes_ = meminfo_field_kib(meminfo, "MemTotal") * 1024;
  last_cpu_ = read_cpu_times();
}

HostUsageProbe::CpuTimes HostUsageProbe::read_cpu_times() {
  const std::string stat = slurp("/proc/stat", "cpu");
  std::istringstream in(stat);
  std::string label;
  in >> label;
  if (label != "cpu") throw Error(ErrorCode::Acquisition, "cpu metric missing from /proc/stat");
  std::array<std::uint64_t, 8> v{};
  for (auto& x : v) {
    if (!(in >> x)) throw Error(ErrorCode::Acquisition, "cpu metric truncated in /proc/stat");
  }
  // user nice system idle iowait irq softirq steal
  CpuTimes t;
  const std::uint64_t idle = v[3] + v[4];
  for (auto x : v) t.total += x;
  t.busy = t.total - idle;
  return t;
}

double HostUsageProbe::cpu_percent() {
  const CpuTimes now = read_cpu_times();
  const std::uint64_t dtotal = now.total - last_cpu_.total;
  const std::uint64_t dbusy = now.busy - last_cpu_.busy;
  last_cpu_ = now;
  if (dtotal == 0) return 0.0;
  return 100.0 * static_cast<double>(dbusy) / static_cast<double>(dtotal);
}

RawUsage HostUsageProbe::read() {
  const std::string meminfo = slurp("/proc/meminfo", "memory");
  const std::uint64_t total = meminfo_field_kib(meminfo, "MemTotal");
  const std::uint64_t available = meminfo_field_kib(meminfo, "MemAvailable");
  RawUsage u;
  u.used_bytes = (total > available ? total - available : 0) * 1024;
  u.cpu_percent = cpu_percent();
  return u;
}

DeviceProfile host_profile(const DeviceProfile& bands_from) {
  DeviceProfile p = bands_from;
  p.name = "host";
  p.architecture = Architecture::GeneralPurpose;
  if (bands_from.architecture != Architecture::GeneralPurpose) {
    p.idle_aux = raspberry_pi_profile().idle_aux;
    p.active_aux = raspberry_pi_profile().active_aux;
    p.attack_aux = raspberry_pi_profile().attack_aux;
  }
  p.total_mem_bytes = HostUsageProbe().total_mem_bytes();
  return p;
}

SteadyPacer::SteadyPacer()
    : origin_ns_(std::chrono::steady_clock::now().time_since_epoch().count()) {}

double SteadyPacer::now_s() {
  const auto ns = std::chrono::steady_clock::now().time_since_epoch().count() - origin_ns_;
  return static_cast<double>(ns) * 1e-9;
}

void SteadyPacer::sleep_until_s(double t) {
  const auto target = std::chrono::steady_clock::time_point(std::chrono::nanoseconds(
      origin_ns_ + static_cast<std::int64_t>(t * 1e9)));
  std::this_thread::sleep_until(target);
}

std::size_t sample_host(const SampleOptions& options, const DeviceProfile& profile,
                        const UsageSource& source, Pacer& pacer,
                        const std::function<bool(const ResourceReading&)>& sink) {
  if (!(options.interval_s > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "sampling interval must be positive");
  }
  if (!(options.duration_s >= options.interval_s)) {
    throw Error(ErrorCode::InvalidInput, "sampling duration must cover at least one interval");
  }
  profile.validate();
  const auto count =
      static_cast<std::size_t>(std::floor(options.duration_s / options.interval_s + 1e-9));
  const double start = pacer.now_s();
  double last_t = -1.0;
  for (std::size_t k = 1; k <= count; ++k) {
    pacer.sleep_until_s(start + static_cast<double>(k) * options.interval_s);
    const RawUsage raw = source();
    ResourceReading r;
    r.device_id = options.device_id;
    r.timestamp_s = quantize_seconds(std::max(pacer.now_s() - start, last_t + 1e-3));
    last_t = r.timestamp_s;
    r.mem_frac = normalize_mem(raw.used_bytes, profile);
    if (profile.architecture == Architecture::GeneralPurpose) {
      r.cpu_frac = normalize_cpu(raw.cpu_percent.value_or(0.0));
    } else {
      r.thread_time_s = raw.thread_time_s.value_or(0.0);
    }
    if (!sink(quantize(std::move(r)))) return k;
  }
  return count;
}

std::vector<ResourceReading> sample_host(double interval_s, double duration_s,
                                         const DeviceProfile& profile) {
  HostUsageProbe probe;
  SteadyPacer pacer;
  std::vector<ResourceReading> out;
  SampleOptions opts;
  opts.interval_s = interval_s;
  opts.duration_s = duration_s;
  sample_host(opts, profile, [&probe] { return probe.read(); }, pacer,
              [&out](const ResourceReading& r) {
                out.push_back(r);
                return true;
              });
  return out;
}

}  // namespace memguard
