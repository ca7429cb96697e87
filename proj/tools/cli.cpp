#include "cli.hpp"

#include <fmt/format.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "CLI11.hpp"
#include "memguard/json_io.hpp"
#include "memguard/monitor.hpp"
#include "memguard/netprobe.hpp"
#include "memguard/simulator.hpp"
#include "memguard/store.hpp"

namespace memguard::cli {
namespace {

namespace fs = std::filesystem;

volatile std::sig_atomic_t g_interrupted = 0;

void on_signal(int) { g_interrupted = 1; }

fs::path experiment_root() {
  const char* env = std::getenv("MEMGUARD_EXPERIMENT_ROOT");
  return env && *env ? fs::path(env) : fs::path("experiments");
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidProfile:
    case ErrorCode::InvalidMeasurement:
    case ErrorCode::InvalidInput:
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidScenario:
    case ErrorCode::ProtocolViolation:
    case ErrorCode::Parse:
      return kExitUsage;
    case ErrorCode::Corruption:
    case ErrorCode::Version:
    case ErrorCode::NotFound:
    case ErrorCode::Ordering:
      return kExitData;
    case ErrorCode::Refused:
      return kExitRefused;
    default:
      return kExitFailure;
  }
}

json load_config_file(const std::string& path) {
  try {
    return read_json_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
}

struct DetectorFlags {
  std::string config_path;
  std::string mode;
  int count_threshold = 0;
  int time_threshold = 0;
  double reading_threshold = 0.0;
  double absolute_threshold = 0.0;
  std::string profile;

  void add_to(CLI::App& app) {
    app.add_option("--config", config_path,
                   "JSON document with optional \"profile\" and \"detector\" sections");
    app.add_option("--mode", mode, "Trigger mode")
        ->check(CLI::IsMember({"differential", "absolute", "both"}, CLI::ignore_case));
    app.add_option("--count-threshold", count_threshold, "Suspicious samples tolerated");
    app.add_option("--time-threshold", time_threshold, "Quiet samples before a stop");
    app.add_option("--reading-threshold", reading_threshold, "Override the derived reading threshold");
    app.add_option("--absolute-threshold", absolute_threshold, "Override the absolute threshold");
  }

  /// Profile named on the command line, else the config file's, else `fallback`.
  DeviceProfile resolve_profile(const DeviceProfile& fallback) const {
    if (!profile.empty()) return builtin_profile(profile);
    if (!config_path.empty()) {
      const json doc = load_config_file(config_path);
      if (doc.contains("profile")) {
        try {
          return profile_from_json(doc.at("profile"));
        } catch (const Error& e) {
          throw Error(ErrorCode::InvalidConfig, e.what());
        }
      }
    }
    return fallback;
  }

  DetectorConfig resolve_config(const DetectorConfig& base) const {
    json merged = base;
    if (!config_path.empty()) {
      const json doc = load_config_file(config_path);
      if (!doc.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
      reject_unknown_keys(doc, {"profile", "detector"}, "config");
      if (doc.contains("detector")) {
        if (!doc.at("detector").is_object()) {
          throw Error(ErrorCode::InvalidConfig, "\"detector\" must be an object");
        }
        merged.update(doc.at("detector"));
      }
    }
    DetectorConfig c;
    try {
      c = merged.get<DetectorConfig>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidConfig, e.what());
    }
    if (!mode.empty()) {
      std::string m = mode;
      for (auto& ch : m) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      c.trigger_mode = trigger_mode_from_string(m);
    }
    if (count_threshold != 0) c.count_threshold = count_threshold;
    if (time_threshold != 0) c.time_threshold = time_threshold;
    if (reading_threshold != 0.0) c.reading_threshold = reading_threshold;
    if (absolute_threshold != 0.0) c.absolute_threshold = absolute_threshold;
    c.validate();
    return c;
  }
};

std::string opt_or_dash(const std::optional<long>& n, const std::optional<double>& s) {
  if (!n) return "n/a";
  return fmt::format("{} samples ({:.3f} s)", *n, *s);
}

void print_summary(std::ostream& out, const SummaryMetrics& m) {
  out << fmt::format("samples: {}\n", m.samples);
  out << fmt::format("attacks started: {}\n", m.attacks_started);
  out << fmt::format("attacks stopped: {}\n", m.attacks_stopped);
  out << fmt::format("detection latency: {}\n",
                     opt_or_dash(m.detection_latency_samples, m.detection_latency_s));
  out << fmt::format("stop latency: {}\n", opt_or_dash(m.stop_latency_samples, m.stop_latency_s));
  out << fmt::format("false positives: {}\n", m.false_positives);
  if (m.attacks_started == 0) out << "no attack detected\n";
  if (m.attack_ongoing_at_end) out << "attack ongoing at end-of-log\n";
}

// ---------------------------------------------------------------------------

struct SimulateCmd {
  DetectorFlags detector;
  std::string scenario_path;
  std::uint64_t seed = 42;
  double interval_s = 3.0;
  double duration_s = 600.0;
  std::string out_dir;
  std::string device_id = "device-1";
  std::string device_ip = "192.0.2.10";

  int run(std::ostream& out) {
    DeviceProfile profile = detector.resolve_profile(raspberry_pi_profile());
    AttackScenario scenario = reference_scenario(device_id);
    if (!scenario_path.empty()) {
      json doc = load_config_file(scenario_path);
      if (doc.is_object()) {
        if (doc.contains("seed")) seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("profile") && detector.profile.empty()) {
          profile = profile_from_json(doc.at("profile"));
        }
        if (doc.contains("device_ip")) device_ip = doc.at("device_ip").get<std::string>();
      }
      try {
        scenario = doc.get<AttackScenario>();
      } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidScenario, e.what());
      }
      device_id = scenario.target_device_id;
    }
    require_ipv4(device_ip);
    DetectorConfig config = detector.resolve_config(default_detector_config(profile));
    config.sample_interval_s = interval_s;
    const fs::path dir = out_dir.empty()
                             ? experiment_root() / fmt::format("{}-seed{}", device_id, seed)
                             : fs::path(out_dir);

    auto result = run_closed_loop(DeviceSim(device_id, profile, seed), scenario, config,
                                  interval_s, duration_s);
    ExperimentRecord rec;
    rec.device_id = device_id;
    rec.device_ip = device_ip;
    rec.profile = profile;
    rec.scenario = scenario;
    rec.config = config;
    rec.seed = seed;
    rec.interval_s = interval_s;
    rec.duration_s = duration_s;
    rec.events = result.events;
    rec.summary = compute_summary(result.readings, result.events, profile);
    write_experiment(dir, rec, result.readings);

    out << "experiment: " << dir.string() << "\n";
    out << "readings: " << result.readings.size() << "\n";
    out << "events: " << result.events.size() << "\n";
    for (const auto& e : result.events) out << format_event_line(e) << "\n";
    print_summary(out, rec.summary);
    return kExitOk;
  }
};

struct DetectCmd {
  DetectorFlags detector;
  std::string input;

  int run(std::ostream& out) {
    fs::path log = input;
    std::optional<DeviceProfile> stored_profile;
    std::optional<DetectorConfig> stored_config;
    if (fs::is_directory(log)) {
      if (fs::exists(log / "experiment.json")) {
        const json rec = read_json_file((log / "experiment.json").string());
        stored_profile = profile_from_json(rec.at("profile"));
        stored_config = rec.at("config").get<DetectorConfig>();
      }
      log /= "readings.jsonl";
    }
    const LoadedReadings loaded = load_reading_log(log);
    DeviceProfile fallback = raspberry_pi_profile();
    if (stored_profile) {
      fallback = *stored_profile;
    } else if (!loaded.header.profile.empty()) {
      try {
        fallback = builtin_profile(loaded.header.profile);
      } catch (const Error&) {
        // unknown profile names fall back to the default bands
      }
    }
    const DeviceProfile profile = detector.resolve_profile(fallback);
    const DetectorConfig config =
        detector.resolve_config(stored_config ? *stored_config : default_detector_config(profile));

    const auto events = detector_run(loaded.readings, config);
    for (const auto& e : events) out << format_event_line(e) << "\n";
    out << "events: " << events.size() << "\n";
    if (loaded.truncated_tail) out << "note: skipped a truncated final line\n";
    print_summary(out, compute_summary(loaded.readings, events, profile));
    return kExitOk;
  }
};

struct MonitorCmd {
  DetectorFlags detector;
  double interval_s = 5.0;
  double duration_s = 60.0;
  std::string out_dir;
  std::string device_id = "host";
  int victim_control = 0;
  std::string victim_ip = "127.0.0.1";

  int run(std::ostream& out) {
    const DeviceProfile bands = detector.resolve_profile(raspberry_pi_profile());
    HostUsageProbe probe;
    UsageSource source;
    DeviceProfile profile;
    if (victim_control > 0) {
      const VictimStats first =
          victim_stats_from_json(victim_command(victim_ip, victim_control, "STATS"));
      profile = bands;
      profile.total_mem_bytes = first.cap_bytes;
      source = [&] {
        const VictimStats s =
            victim_stats_from_json(victim_command(victim_ip, victim_control, "STATS"));
        RawUsage u;
        u.used_bytes = s.bytes_buffered;
        u.cpu_percent = probe.cpu_percent();
        if (profile.architecture == Architecture::Microcontroller) {
          u.cpu_percent.reset();
          u.thread_time_s = s.duration_s;
        }
        return u;
      };
    } else {
      profile = host_profile(bands);
      source = [&] {
        RawUsage u = probe.read();
        if (profile.architecture == Architecture::Microcontroller) {
          u.thread_time_s = u.cpu_percent.value_or(0.0);
          u.cpu_percent.reset();
        }
        return u;
      };
    }
    const DetectorConfig config = detector.resolve_config(default_detector_config(profile));

    const fs::path dir = out_dir.empty() ? experiment_root() / ("monitor-" + device_id)
                                         : fs::path(out_dir);
    fs::create_directories(dir);
    auto log = ReadingLog::create(dir / "readings.jsonl", bands.name);
    auto blacklist = Blacklist::open(dir / "blacklist.json");

    MonitorHooks hooks;
    hooks.on_reading = [&](const ResourceReading& r) { log.append(r); };
    hooks.on_event = [&](const DetectionEvent& e) {
      out << format_event_line(e) << std::endl;
      if (e.kind != EventKind::MitigationApplied || victim_control <= 0) return;
      for (auto action : e.actions) {
        switch (action) {
          case MitigationAction::Blacklist:
            blacklist.add(victim_ip);
            break;
          case MitigationAction::StopReadWrite:
            victim_command(victim_ip, victim_control, "STOPRW");
            break;
          case MitigationAction::Disconnect:
            victim_command(victim_ip, victim_control, "DISCONNECT");
            break;
        }
      }
    };

    SampleOptions opts;
    opts.device_id = device_id;
    opts.interval_s = interval_s;
    opts.duration_s = duration_s;
    SteadyPacer pacer;
    std::atomic<bool> cancel{false};
    std::signal(SIGINT, on_signal);
    std::thread watcher([&] {
      while (!cancel.load()) {
        if (g_interrupted) cancel = true;
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
      }
    });
    MonitorResult result;
    try {
      result = monitor_stream(opts, profile, source, pacer, config, hooks, &cancel);
    } catch (...) {
      cancel = true;
      watcher.join();
      throw;
    }
    cancel = true;
    watcher.join();
    write_events(dir / "events.jsonl", result.events);
    out << "log: " << (dir / "readings.jsonl").string() << "\n";
    out << "readings: " << result.readings.size() << "\n";
    print_summary(out, compute_summary(result.readings, result.events, profile));
    return kExitOk;
  }
};

struct AttackCmd {
  FloodRequest request;
  std::string protocol = "udp";
  std::string allowlist;
  std::string blacklist_path;

  int run(std::ostream& out) {
    request.protocol = flood_protocol_from_string(protocol);
    const Allowlist allow = allowlist.empty() ? Allowlist{} : Allowlist::parse(allowlist);
    std::optional<Blacklist> bl;
    const fs::path bl_path =
        blacklist_path.empty() ? experiment_root() / "blacklist.json" : fs::path(blacklist_path);
    if (fs::exists(bl_path)) bl = Blacklist::open(bl_path);
    std::atomic<bool> cancel{false};
    std::signal(SIGINT, on_signal);
    std::thread watcher([&] {
      while (!cancel.load()) {
        if (g_interrupted) cancel = true;
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
      }
    });
    FloodStats stats;
    try {
      stats = flood(request, allow, bl ? &*bl : nullptr, &cancel);
    } catch (...) {
      cancel = true;
      watcher.join();
      throw;
    }
    cancel = true;
    watcher.join();
    out << json{{"target", request.ip},
                {"port", request.port},
                {"protocol", std::string(to_string(request.protocol))},
                {"packets_sent", stats.packets_sent},
                {"duration_s", stats.duration_s}}
               .dump()
        << "\n";
    return kExitOk;
  }
};

struct ScanCmd {
  ScanRequest request;
  std::string allowlist;
  std::string registry_path;

  int run(std::ostream& out) {
    const Allowlist allow = allowlist.empty() ? Allowlist{} : Allowlist::parse(allowlist);
    const fs::path path =
        registry_path.empty() ? experiment_root() / "registry.json" : fs::path(registry_path);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    auto registry = Registry::open(path);
    const auto records = scan(request, allow, &registry);
    for (const auto& r : records) out << format_device_record(r) << "\n";
    out << "registry: " << path.string() << "\n";
    return kExitOk;
  }
};

struct ReportCmd {
  std::string dir;
  std::string out_dir;

  int run(std::ostream& out) {
    const fs::path in(dir);
    const LoadedExperiment ex = load_experiment(in);
    const auto& rec = ex.record;
    if (detector_run(ex.readings, rec.config) != ex.events) {
      throw CorruptionError(0, "stored events differ from a fresh detector replay");
    }
    const fs::path target = out_dir.empty() ? in : fs::path(out_dir);
    fs::create_directories(target);

    std::ofstream samples(target / "samples.csv");
    samples << "timestamp_s,mem_frac,cpu_or_thread_time,status,attack_flag,alert\n";
    DetectorState state;
    for (const auto& r : ex.readings) {
      state = detector_step(state, rec.config, r).state;
      const double aux = r.cpu_frac ? *r.cpu_frac : r.thread_time_s.value_or(0.0);
      const std::string flag = r.attack_flag ? (*r.attack_flag ? "1" : "0") : "";
      samples << fmt::format("{:.3f},{:.6f},{:.6f},{},{},{}\n", r.timestamp_s, r.mem_frac, aux,
                             to_string(classify_status(r, rec.profile)), flag,
                             state.alert ? 1 : 0);
    }

    const SummaryMetrics& m = rec.summary;
    auto opt = [](const auto& v) { return v ? fmt::format("{}", *v) : std::string(); };
    std::ofstream metrics(target / "metrics.csv");
    metrics << "metric,value\n";
    metrics << "samples," << m.samples << "\n";
    metrics << "attack_samples," << m.attack_samples << "\n";
    metrics << "attacks_started," << m.attacks_started << "\n";
    metrics << "attacks_stopped," << m.attacks_stopped << "\n";
    metrics << "false_positives," << m.false_positives << "\n";
    metrics << "detection_latency_samples," << opt(m.detection_latency_samples) << "\n";
    metrics << "detection_latency_s," << opt(m.detection_latency_s) << "\n";
    metrics << "stop_latency_samples," << opt(m.stop_latency_samples) << "\n";
    metrics << "stop_latency_s," << opt(m.stop_latency_s) << "\n";
    metrics << "attack_ongoing_at_end," << (m.attack_ongoing_at_end ? 1 : 0) << "\n";
    if (!samples || !metrics) throw Error(ErrorCode::Transport, "failed to write report files");

    out << "samples: " << (target / "samples.csv").string() << "\n";
    out << "metrics: " << (target / "metrics.csv").string() << "\n";
    print_summary(out, m);
    return kExitOk;
  }
};

struct VictimCmd {
  VictimOptions options;
  double duration_s = 60.0;

  int run(std::ostream& out) {
    VictimStub stub(options);
    out << json{{"port", stub.port()}, {"control_port", stub.control_port()}}.dump() << std::endl;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration<double>(duration_s);
    while (!g_interrupted && (duration_s <= 0 || std::chrono::steady_clock::now() < deadline)) {
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    out << victim_stats_json(stub.stats()) << "\n";
    return kExitOk;
  }
};

struct BlacklistCmd {
  std::string store;
  std::string ip;

  fs::path path() const {
    return store.empty() ? experiment_root() / "blacklist.json" : fs::path(store);
  }
  Blacklist open() const {
    const fs::path p = path();
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return Blacklist::open(p);
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Memory-usage attack detection toolkit", "memguard"};
  app.require_subcommand(1);

  SimulateCmd sim;
  auto* simulate = app.add_subcommand("simulate", "Run a simulated closed-loop experiment");
  simulate->add_option("--profile", sim.detector.profile, "Built-in device profile")
      ->check(CLI::IsMember(builtin_profile_names()));
  simulate->add_option("--scenario", sim.scenario_path, "Attack scenario JSON file");
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate->add_option("--interval-s", sim.interval_s, "Sampling interval")->capture_default_str();
  simulate->add_option("--duration-s", sim.duration_s, "Experiment length")->capture_default_str();
  simulate->add_option("--out", sim.out_dir, "Experiment directory");
  simulate->add_option("--device-id", sim.device_id, "Simulated device id")->capture_default_str();
  simulate->add_option("--device-ip", sim.device_ip, "Address recorded for the device")
      ->capture_default_str();
  sim.detector.add_to(*simulate);

  DetectCmd det;
  auto* detect = app.add_subcommand("detect", "Replay a reading log through the detector");
  detect->add_option("input", det.input, "readings.jsonl or an experiment directory")->required();
  detect->add_option("--profile", det.detector.profile, "Built-in device profile")
      ->check(CLI::IsMember(builtin_profile_names()));
  det.detector.add_to(*detect);

  MonitorCmd mon;
  auto* monitor = app.add_subcommand("monitor", "Sample live memory usage and detect inline");
  monitor->add_option("--profile", mon.detector.profile, "Bands to classify against")
      ->check(CLI::IsMember(builtin_profile_names()));
  monitor->add_option("--interval-s", mon.interval_s, "Sampling interval")->capture_default_str();
  monitor->add_option("--duration-s", mon.duration_s, "Monitoring window")->capture_default_str();
  monitor->add_option("--out", mon.out_dir, "Output directory");
  monitor->add_option("--device-id", mon.device_id, "Device id in the log")->capture_default_str();
  monitor->add_option("--victim-control", mon.victim_control,
                      "Monitor a victim stub through its control port instead of the host");
  monitor->add_option("--victim-ip", mon.victim_ip, "Victim stub address")->capture_default_str();
  mon.detector.add_to(*monitor);

  AttackCmd atk;
  auto* attack = app.add_subcommand("attack", "Send a TCP or UDP flood to an allowlisted target");
  attack->add_option("--target", atk.request.ip, "Target IPv4 address")->capture_default_str();
  attack->add_option("--port", atk.request.port, "Target port")->required()->check(CLI::Range(1, 65535));
  attack->add_option("--protocol", atk.protocol, "udp or tcp")->capture_default_str();
  attack->add_option("--rate-pps", atk.request.rate_pps, "Packets per second")->capture_default_str();
  attack->add_option("--duration-s", atk.request.duration_s, "Flood length")->capture_default_str();
  attack->add_option("--payload-bytes", atk.request.payload_bytes, "Payload size")
      ->capture_default_str();
  attack->add_option("--allowlist", atk.allowlist, "Comma-separated CIDR blocks");
  attack->add_option("--blacklist", atk.blacklist_path, "Blacklist store to honour");

  ScanCmd sc;
  auto* scan_cmd = app.add_subcommand("scan", "Probe hosts and ports and update the registry");
  scan_cmd->add_option("--targets", sc.request.targets, "Address, range a-b or CIDR")->required();
  scan_cmd->add_option("--ports", sc.request.ports, "Comma-separated ports")->delimiter(',');
  scan_cmd->add_option("--timeout-ms", sc.request.timeout_ms, "Per-probe timeout")
      ->capture_default_str();
  scan_cmd->add_option("--allowlist", sc.allowlist, "Comma-separated CIDR blocks");
  scan_cmd->add_option("--registry", sc.registry_path, "Registry file");

  ReportCmd rep;
  auto* report = app.add_subcommand("report", "Write CSV tables for an experiment directory");
  report->add_option("dir", rep.dir, "Experiment directory")->required();
  report->add_option("--out", rep.out_dir, "Where to write the CSV files");

  VictimCmd vic;
  auto* victim = app.add_subcommand("victim", "Run a loopback victim stub");
  victim->add_option("--listen", vic.options.listen_ip, "Listen address")->capture_default_str();
  victim->add_option("--port", vic.options.port, "Data port (0 = ephemeral)")->capture_default_str();
  victim->add_option("--control-port", vic.options.control_port, "Control port (0 = ephemeral)")
      ->capture_default_str();
  victim->add_option("--retain-bytes", vic.options.retain_bytes_per_packet,
                     "Bytes kept per received packet")
      ->capture_default_str();
  victim->add_option("--cap-bytes", vic.options.cap_bytes, "Retention cap")->capture_default_str();
  victim->add_option("--duration-s", vic.duration_s, "Run time, 0 until interrupted")
      ->capture_default_str();

  BlacklistCmd bl;
  auto* blacklist = app.add_subcommand("blacklist", "Inspect or edit the blacklist store");
  blacklist->add_option("--store", bl.store, "Blacklist file");
  blacklist->require_subcommand(1);
  auto* bl_add = blacklist->add_subcommand("add", "Add an address");
  auto* bl_remove = blacklist->add_subcommand("remove", "Remove an address");
  auto* bl_check = blacklist->add_subcommand("check", "Print whether an address is listed");
  auto* bl_list = blacklist->add_subcommand("list", "Print all addresses");
  for (auto* s : {bl_add, bl_remove, bl_check}) s->add_option("ip", bl.ip)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  g_interrupted = 0;
  try {
    if (*simulate) return sim.run(out);
    if (*detect) return det.run(out);
    if (*monitor) return mon.run(out);
    if (*attack) return atk.run(out);
    if (*scan_cmd) return sc.run(out);
    if (*report) return rep.run(out);
    if (*victim) return vic.run(out);
    if (*blacklist) {
      auto store = bl.open();
      if (*bl_add) out << (store.add(bl.ip) ? "added " : "already listed ") << bl.ip << "\n";
      if (*bl_remove) out << (store.remove(bl.ip) ? "removed " : "not listed ") << bl.ip << "\n";
      if (*bl_check) out << (store.contains(bl.ip) ? "true" : "false") << "\n";
      if (*bl_list) {
        for (const auto& ip : store.entries()) out << ip << "\n";
      }
      return kExitOk;
    }
  } catch (const CorruptionError& e) {
    err << "error: " << e.what();
    if (e.line() > 0 && std::string(e.what()).find(fmt::format(":{}:", e.line())) == std::string::npos) {
      err << " (line " << e.line() << ")";
    }
    err << "\n";
    return kExitData;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace memguard::cli
