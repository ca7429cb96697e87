#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "memguard/simulator.hpp"
#include "memguard/store.hpp"
#include "memguard/telemetry.hpp"

namespace memguard {

// ---------------------------------------------------------------------------
// Addresses

std::uint32_t parse_ipv4(std::string_view text);  // host byte order
std::string format_ipv4(std::uint32_t addr);

struct Cidr {
  std::uint32_t network = 0;
  int prefix = 32;

  static Cidr parse(std::string_view text);
  bool contains(std::uint32_t addr) const;
};

/// Addresses this module may send packets to. Defaults to loopback only.
class Allowlist {
 public:
  Allowlist();
  /// Comma-separated CIDR blocks or single addresses.
  static Allowlist parse(std::string_view text);

  bool allows(std::uint32_t addr) const;
  bool allows(const std::string& ip) const { return allows(parse_ipv4(ip)); }
  /// Throws Error(Refused) for addresses outside the allowlist.
  void require(const std::string& ip) const;

 private:
  std::vector<Cidr> blocks_;
};

/// Expands "a.b.c.d", "a.b.c.d-e.f.g.h" or "a.b.c.d/nn" (at most 4096 hosts).
std::vector<std::string> expand_targets(std::string_view range);

// ---------------------------------------------------------------------------
// Scanner

struct ScanRequest {
  std::string targets;
  std::vector<int> ports;
  int timeout_ms = 200;
};

/// Probes every address with TCP connects. A host counts as Online when any
/// probe gets a transport-level answer (handshake or reset); only completed
/// handshakes list the port as open. With no ports, one liveness probe per
/// host decides the status. Results are merged into `registry` when given.
std::vector<DeviceRecord> scan(const ScanRequest& request, const Allowlist& allowlist,
                               Registry* registry = nullptr);

// ---------------------------------------------------------------------------
// Flood generator

inline constexpr double kMaxFloodRatePps = 20000.0;
inline constexpr double kMaxFloodDurationS = 600.0;
inline constexpr int kMaxPayloadBytes = 65507;

struct FloodStats {
  std::uint64_t packets_sent = 0;
  std::uint64_t packets_received = 0;
  std::uint64_t bytes_buffered = 0;
  double duration_s = 0.0;
};

struct FloodRequest {
  std::string ip = "127.0.0.1";
  int port = 0;
  FloodProtocol protocol = FloodProtocol::Udp;
  double rate_pps = 1000.0;
  double duration_s = 60.0;
  int payload_bytes = 64;
};

/// Sends rate_pps * duration_s packets paced on the steady clock. TCP packets
/// are connect/send/abort cycles. Refuses blacklisted or non-allowlisted
/// targets before any packet leaves. `cancel` stops the flood early.
FloodStats flood(const FloodRequest& request, const Allowlist& allowlist,
                 const Blacklist* blacklist = nullptr,
                 const std::atomic<bool>* cancel = nullptr);

// ---------------------------------------------------------------------------
// Victim stub

struct VictimOptions {
  std::string listen_ip = "127.0.0.1";
  int port = 0;          // 0 picks an ephemeral port; UDP and TCP share it
  int control_port = 0;  // 0 picks an ephemeral port
  std::uint64_t retain_bytes_per_packet = 512;
  std::uint64_t cap_bytes = 64ULL << 20;
  /// Memory the victim already uses before any flood, reported by the
  /// usage source on top of the retained bytes.
  std::uint64_t baseline_bytes = 0;
};

struct VictimStats {
  std::uint64_t packets_received = 0;
  std::uint64_t packets_dropped = 0;
  std::uint64_t bytes_buffered = 0;
  std::uint64_t cap_bytes = 0;
  bool rw_enabled = true;
  bool connected = true;
  double duration_s = 0.0;

  /// bytes_buffered / cap, saturating at 1.
  double readout() const;
};

std::string victim_stats_json(const VictimStats& stats);
VictimStats victim_stats_from_json(std::string_view line);

/// Flood target that keeps `retain_bytes_per_packet` of every packet it
/// receives, up to `cap_bytes`, so traffic turns into real resident memory.
///
/// A control socket accepts line commands: STATS (one JSON line of
/// counters), STOPRW (stop retaining), DISCONNECT (close the data sockets),
/// BLACKLIST <ip> (drop that source from now on).
class VictimStub {
 public:
  explicit VictimStub(VictimOptions options);
  ~VictimStub();
  VictimStub(const VictimStub&) = delete;
  VictimStub& operator=(const VictimStub&) = delete;

  int port() const { return port_; }
  int control_port() const { return control_port_; }
  const VictimOptions& options() const { return options_; }

  VictimStats stats() const;
  double readout() const { return stats().readout(); }
  /// Usage source for sample_host: baseline + retained bytes.
  UsageSource usage_source() const;
  /// Profile sized for usage_source(): capacity is baseline + cap.
  DeviceProfile profile(const DeviceProfile& bands_from) const;

  void stop_read_write();
  void disconnect();
  void blacklist_source(const std::string& ip);

 private:
  void run();
  void handle_udp();
  void handle_tcp_accept();
  void retain(std::size_t payload_len);
  bool source_blocked(std::uint32_t addr) const;
  std::string handle_command(const std::string& line);
  void close_data_sockets();

  VictimOptions options_;
  int port_ = 0;
  int control_port_ = 0;
  int udp_fd_ = -1;
  int tcp_fd_ = -1;
  int control_fd_ = -1;
  int wake_pipe_[2] = {-1, -1};

  std::atomic<std::uint64_t> packets_received_{0};
  std::atomic<std::uint64_t> packets_dropped_{0};
  std::atomic<std::uint64_t> bytes_buffered_{0};
  std::atomic<bool> rw_enabled_{true};
  std::atomic<bool> connected_{true};
  std::atomic<bool> disconnect_requested_{false};
  std::atomic<bool> stopping_{false};
  std::int64_t started_ns_ = 0;

  mutable std::mutex blocked_mutex_;
  std::set<std::uint32_t> blocked_sources_;

  std::vector<std::unique_ptr<char[]>> retained_;
  std::uint64_t block_fill_ = 0;

  std::thread thread_;
};

/// Sends one command line to a victim control port and returns its reply.
std::string victim_command(const std::string& ip, int control_port, const std::string& command,
                           int timeout_ms = 2000);

/// Coherent attacker/victim view of one flood run.
FloodStats combine_stats(const FloodStats& attacker, const VictimStats& victim);

// ---------------------------------------------------------------------------

/// Marks `device_id` (its IP) blacklisted in the registry and the blacklist
/// store, persisting both. Idempotent. Unknown devices raise NotFound.
void blacklist_enforce(Registry& registry, Blacklist& blacklist, const std::string& device_id);

}  // namespace memguard
