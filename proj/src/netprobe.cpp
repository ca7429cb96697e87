#include "memguard/netprobe.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <map>

#include <fmt/format.h>

#include "memguard/json_io.hpp"

namespace memguard {

namespace {

std::int64_t steady_ns() {
  return std::chrono::steady_clock::now().time_since_epoch().count();
}

double wall_seconds() {
  return std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

class Fd {
 public:
  explicit Fd(int fd = -1) : fd_(fd) {}
  ~Fd() { reset(); }
  Fd(Fd&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  Fd& operator=(Fd&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }
  int get() const { return fd_; }
  int release() { return std::exchange(fd_, -1); }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_;
};

void set_nonblocking(int fd) { ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL, 0) | O_NONBLOCK); }

sockaddr_in make_addr(std::uint32_t ip, int port) {
  sockaddr_in a{};
  a.sin_family = AF_INET;
  a.sin_addr.s_addr = htonl(ip);
  a.sin_port = htons(static_cast<std::uint16_t>(port));
  return a;
}

enum class ConnectResult { Connected, Refused, NoAnswer };

// Non-blocking connect bounded by timeout_ms. On success the connected
// socket is handed back through `out`.
ConnectResult timed_connect(std::uint32_t ip, int port, int timeout_ms, Fd* out = nullptr) {
  Fd fd(::socket(AF_INET, SOCK_STREAM, 0));
  if (fd.get() < 0) throw Error(ErrorCode::Transport, std::string("socket: ") + std::strerror(errno));
  set_nonblocking(fd.get());
  const sockaddr_in addr = make_addr(ip, port);
  int rc = ::connect(fd.get(), reinterpret_cast<const sockaddr*>(&addr), sizeof addr);
  if (rc != 0 && errno != EINPROGRESS) {
    return errno == ECONNREFUSED ? ConnectResult::Refused : ConnectResult::NoAnswer;
  }
  if (rc != 0) {
    pollfd p{fd.get(), POLLOUT, 0};
    rc = ::poll(&p, 1, timeout_ms);
    if (rc <= 0) return ConnectResult::NoAnswer;
    int err = 0;
    socklen_t len = sizeof err;
    ::getsockopt(fd.get(), SOL_SOCKET, SO_ERROR, &err, &len);
    if (err == ECONNREFUSED) return ConnectResult::Refused;
    if (err != 0) return ConnectResult::NoAnswer;
  }
  if (out) *out = std::move(fd);
  return ConnectResult::Connected;
}

// Close without TIME_WAIT; a flood would otherwise exhaust ephemeral ports.
void abortive_close(Fd& fd) {
  linger lg{1, 0};
  ::setsockopt(fd.get(), SOL_SOCKET, SO_LINGER, &lg, sizeof lg);
  fd.reset();
}

}  // namespace

// ---------------------------------------------------------------------------

std::uint32_t parse_ipv4(std::string_view text) {
  in_addr addr{};
  const std::string s(text);
  if (::inet_pton(AF_INET, s.c_str(), &addr) != 1) {
    throw Error(ErrorCode::Parse, "'" + s + "' is not an IPv4 address");
  }
  return ntohl(addr.s_addr);
}

std::string format_ipv4(std::uint32_t addr) {
  return fmt::format("{}.{}.{}.{}", addr >> 24, (addr >> 16) & 0xff, (addr >> 8) & 0xff, addr & 0xff);
}

Cidr Cidr::parse(std::string_view text) {
  Cidr c;
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    c.network = parse_ipv4(text);
    c.prefix = 32;
    return c;
  }
  const std::string prefix(text.substr(slash + 1));
  try {
    std::size_t used = 0;
    c.prefix = std::stoi(prefix, &used);
    if (used != prefix.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "bad prefix length in '" + std::string(text) + "'");
  }
  if (c.prefix < 0 || c.prefix > 32) {
    throw Error(ErrorCode::Parse, "prefix length out of range in '" + std::string(text) + "'");
  }
  const std::uint32_t mask = c.prefix == 0 ? 0 : ~0U << (32 - c.prefix);
  c.network = parse_ipv4(text.substr(0, slash)) & mask;
  return c;
}

bool Cidr::contains(std::uint32_t addr) const {
  const std::uint32_t mask = prefix == 0 ? 0 : ~0U << (32 - prefix);
  return (addr & mask) == network;
}

Allowlist::Allowlist() : blocks_{Cidr::parse("127.0.0.0/8")} {}

Allowlist Allowlist::parse(std::string_view text) {
  Allowlist a;
  a.blocks_.clear();
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    auto item = text.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) a.blocks_.push_back(Cidr::parse(item));
    pos = comma + 1;
  }
  if (a.blocks_.empty()) throw Error(ErrorCode::Parse, "allowlist is empty");
  return a;
}

bool Allowlist::allows(std::uint32_t addr) const {
  return std::any_of(blocks_.begin(), blocks_.end(),
                     [addr](const Cidr& c) { return c.contains(addr); });
}

void Allowlist::require(const std::string& ip) const {
  if (!allows(ip)) throw Error(ErrorCode::Refused, ip + " is outside the allowlist");
}

std::vector<std::string> expand_targets(std::string_view range) {
  constexpr std::uint64_t kMaxHosts = 4096;
  std::uint32_t first = 0;
  std::uint32_t last = 0;
  if (const auto dash = range.find('-'); dash != std::string_view::npos) {
    first = parse_ipv4(range.substr(0, dash));
    last = parse_ipv4(range.substr(dash + 1));
  } else {
    const Cidr c = Cidr::parse(range);
    first = c.network;
    last = c.prefix == 0 ? ~0U : c.network | ~(~0U << (32 - c.prefix));
    if (c.prefix == 32) last = first;
  }
  if (last < first) throw Error(ErrorCode::Scan, "empty address range '" + std::string(range) + "'");
  if (static_cast<std::uint64_t>(last) - first + 1 > kMaxHosts) {
    throw Error(ErrorCode::Scan, "address range '" + std::string(range) + "' is too large");
  }
  std::vector<std::string> out;
  for (std::uint64_t a = first; a <= last; ++a) {
    const auto addr = static_cast<std::uint32_t>(a);
    const std::uint32_t top = addr >> 24;
    if (top == 0 || top >= 224) {
      throw Error(ErrorCode::Scan, format_ipv4(addr) + " is not a routable unicast address");
    }
    out.push_back(format_ipv4(addr));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<DeviceRecord> scan(const ScanRequest& request, const Allowlist& allowlist,
                               Registry* registry) {
  for (int p : request.ports) {
    if (p < 1 || p > 65535) throw Error(ErrorCode::InvalidInput, fmt::format("port {} out of range", p));
  }
  if (request.timeout_ms <= 0) throw Error(ErrorCode::InvalidInput, "timeout must be positive");
  const auto hosts = expand_targets(request.targets);
  // Check the whole range before the first probe leaves.
  for (const auto& h : hosts) allowlist.require(h);

  constexpr int kLivenessPort = 9;  // discard; any answer proves the host is up
  std::vector<DeviceRecord> out;
  for (const auto& host : hosts) {
    const std::uint32_t ip = parse_ipv4(host);
    DeviceRecord rec;
    rec.ip = host;
    bool answered = false;
    if (request.ports.empty()) {
      answered = timed_connect(ip, kLivenessPort, request.timeout_ms) != ConnectResult::NoAnswer;
    }
    for (int port : request.ports) {
      const auto res = timed_connect(ip, port, request.timeout_ms);
      if (res == ConnectResult::Connected) rec.open_ports.push_back(port);
      answered = answered || res != ConnectResult::NoAnswer;
    }
    rec.status = answered ? DeviceStatus::Online : DeviceStatus::Offline;
    if (answered) rec.last_seen_s = wall_seconds();
    if (registry) {
      if (const auto* prev = registry->find(host); prev && !answered) rec.last_seen_s = prev->last_seen_s;
      registry->upsert(rec);
      rec.blacklisted = registry->find(host)->blacklisted;
    }
    out.push_back(std::move(rec));
  }
  if (registry) registry->save();
  return out;
}

// ---------------------------------------------------------------------------

FloodStats flood(const FloodRequest& req, const Allowlist& allowlist, const Blacklist* blacklist,
                 const std::atomic<bool>* cancel) {
  const std::uint32_t ip = parse_ipv4(req.ip);
  allowlist.require(req.ip);
  if (blacklist && blacklist->contains(req.ip)) {
    throw Error(ErrorCode::Refused, req.ip + " is blacklisted; refusing to flood it");
  }
  if (!(req.rate_pps > 0.0) || req.rate_pps > kMaxFloodRatePps) {
    throw Error(ErrorCode::InvalidInput,
                fmt::format("rate must lie in (0, {}] packets/s", kMaxFloodRatePps));
  }
  if (!(req.duration_s > 0.0) || req.duration_s > kMaxFloodDurationS) {
    throw Error(ErrorCode::InvalidInput,
                fmt::format("duration must lie in (0, {}] s", kMaxFloodDurationS));
  }
  if (req.payload_bytes < 1 || req.payload_bytes > kMaxPayloadBytes) {
    throw Error(ErrorCode::InvalidInput, "payload size out of range");
  }
  if (req.port < 1 || req.port > 65535) throw Error(ErrorCode::InvalidInput, "target port out of range");

  const auto total = static_cast<std::uint64_t>(std::max(1.0, std::floor(req.rate_pps * req.duration_s + 1e-9)));
  const std::string payload(static_cast<std::size_t>(req.payload_bytes), 'M');
  const sockaddr_in addr = make_addr(ip, req.port);

  Fd udp;
  if (req.protocol == FloodProtocol::Udp) {
    udp = Fd(::socket(AF_INET, SOCK_DGRAM, 0));
    if (udp.get() < 0) throw Error(ErrorCode::Transport, std::string("socket: ") + std::strerror(errno));
  }

  FloodStats stats;
  const std::int64_t start = steady_ns();
  const double ns_per_packet = 1e9 / req.rate_pps;
  for (std::uint64_t i = 0; i < total; ++i) {
    if (cancel && cancel->load(std::memory_order_relaxed)) break;
    const auto due = start + static_cast<std::int64_t>(static_cast<double>(i) * ns_per_packet);
    if (steady_ns() < due) {
      std::this_thread::sleep_until(std::chrono::steady_clock::time_point(std::chrono::nanoseconds(due)));
    }
    if (req.protocol == FloodProtocol::Udp) {
      const auto n = ::sendto(udp.get(), payload.data(), payload.size(), 0,
                              reinterpret_cast<const sockaddr*>(&addr), sizeof addr);
      if (n == static_cast<ssize_t>(payload.size())) ++stats.packets_sent;
    } else {
      Fd conn;
      if (timed_connect(ip, req.port, 100, &conn) == ConnectResult::Connected) {
        const auto n = ::send(conn.get(), payload.data(), payload.size(), MSG_NOSIGNAL);
        if (n == static_cast<ssize_t>(payload.size())) ++stats.packets_sent;
        abortive_close(conn);
      }
    }
  }
  stats.duration_s = static_cast<double>(steady_ns() - start) * 1e-9;
  return stats;
}

FloodStats combine_stats(const FloodStats& attacker, const VictimStats& victim) {
  FloodStats s = attacker;
  s.packets_received = std::min(victim.packets_received, attacker.packets_sent);
  s.bytes_buffered = victim.bytes_buffered;
  return s;
}

// ---------------------------------------------------------------------------

double VictimStats::readout() const {
  if (cap_bytes == 0) return 0.0;
  return std::min(1.0, static_cast<double>(bytes_buffered) / static_cast<double>(cap_bytes));
}

std::string victim_stats_json(const VictimStats& s) {
  json j{{"packets_received", s.packets_received}, {"packets_dropped", s.packets_dropped},
         {"bytes_buffered", s.bytes_buffered},     {"cap_bytes", s.cap_bytes},
         {"readout", s.readout()},                 {"rw_enabled", s.rw_enabled},
         {"connected", s.connected},               {"duration_s", s.duration_s}};
  return j.dump();
}

VictimStats victim_stats_from_json(std::string_view line) {
  try {
    const json j = json::parse(line);
    VictimStats s;
    s.packets_received = j.at("packets_received").get<std::uint64_t>();
    s.packets_dropped = j.at("packets_dropped").get<std::uint64_t>();
    s.bytes_buffered = j.at("bytes_buffered").get<std::uint64_t>();
    s.cap_bytes = j.at("cap_bytes").get<std::uint64_t>();
    s.rw_enabled = j.at("rw_enabled").get<bool>();
    s.connected = j.at("connected").get<bool>();
    s.duration_s = j.at("duration_s").get<double>();
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("bad STATS reply: ") + e.what());
  }
}

namespace {

constexpr std::size_t kRetainBlock = 1 << 20;

Fd bind_socket(int type, const std::string& ip, int port) {
  Fd fd(::socket(AF_INET, type, 0));
  if (fd.get() < 0) throw Error(ErrorCode::Startup, std::string("socket: ") + std::strerror(errno));
  int one = 1;
  ::setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  const sockaddr_in addr = make_addr(parse_ipv4(ip), port);
  if (::bind(fd.get(), reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
    throw Error(ErrorCode::Startup,
                fmt::format("cannot bind {}:{}: {}", ip, port, std::strerror(errno)));
  }
  if (type == SOCK_STREAM && ::listen(fd.get(), 512) != 0) {
    throw Error(ErrorCode::Startup, std::string("listen: ") + std::strerror(errno));
  }
  set_nonblocking(fd.get());
  return fd;
}

int bound_port(int fd) {
  sockaddr_in a{};
  socklen_t len = sizeof a;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&a), &len);
  return ntohs(a.sin_port);
}

}  // namespace

VictimStub::VictimStub(VictimOptions options) : options_(std::move(options)) {
  if (options_.cap_bytes == 0) throw Error(ErrorCode::Startup, "victim cap must be positive");
  // UDP first: with an ephemeral request the TCP listener then reuses the
  // same port number.
  Fd udp = bind_socket(SOCK_DGRAM, options_.listen_ip, options_.port);
  port_ = bound_port(udp.get());
  Fd tcp = bind_socket(SOCK_STREAM, options_.listen_ip, port_);
  Fd control = bind_socket(SOCK_STREAM, "127.0.0.1", options_.control_port);
  control_port_ = bound_port(control.get());
  int rcvbuf = 4 << 20;
  ::setsockopt(udp.get(), SOL_SOCKET, SO_RCVBUF, &rcvbuf, sizeof rcvbuf);
  if (::pipe(wake_pipe_) != 0) throw Error(ErrorCode::Startup, "pipe failed");
  set_nonblocking(wake_pipe_[0]);
  udp_fd_ = udp.release();
  tcp_fd_ = tcp.release();
  control_fd_ = control.release();
  started_ns_ = steady_ns();
  thread_ = std::thread([this] { run(); });
}

VictimStub::~VictimStub() {
  stopping_ = true;
  const char c = 'q';
  [[maybe_unused]] auto n = ::write(wake_pipe_[1], &c, 1);
  if (thread_.joinable()) thread_.join();
  close_data_sockets();
  for (int fd : {control_fd_, wake_pipe_[0], wake_pipe_[1]}) {
    if (fd >= 0) ::close(fd);
  }
}

VictimStats VictimStub::stats() const {
  VictimStats s;
  s.packets_received = packets_received_.load();
  s.packets_dropped = packets_dropped_.load();
  s.bytes_buffered = bytes_buffered_.load();
  s.cap_bytes = options_.cap_bytes;
  s.rw_enabled = rw_enabled_.load();
  s.connected = connected_.load();
  s.duration_s = static_cast<double>(steady_ns() - started_ns_) * 1e-9;
  return s;
}

UsageSource VictimStub::usage_source() const {
  return [this] {
    RawUsage u;
    u.used_bytes = options_.baseline_bytes + bytes_buffered_.load();
    return u;
  };
}

DeviceProfile VictimStub::profile(const DeviceProfile& bands_from) const {
  DeviceProfile p = bands_from;
  p.name = "victim-stub";
  p.total_mem_bytes = options_.baseline_bytes + options_.cap_bytes;
  return p;
}

void VictimStub::stop_read_write() { rw_enabled_ = false; }

void VictimStub::disconnect() {
  connected_ = false;
  disconnect_requested_ = true;
  const char c = 'd';
  [[maybe_unused]] auto n = ::write(wake_pipe_[1], &c, 1);
}

void VictimStub::blacklist_source(const std::string& ip) {
  const auto addr = parse_ipv4(ip);
  std::lock_guard lock(blocked_mutex_);
  blocked_sources_.insert(addr);
}

bool VictimStub::source_blocked(std::uint32_t addr) const {
  std::lock_guard lock(blocked_mutex_);
  return blocked_sources_.count(addr) > 0;
}

void VictimStub::close_data_sockets() {
  if (udp_fd_ >= 0) ::close(udp_fd_);
  if (tcp_fd_ >= 0) ::close(tcp_fd_);
  udp_fd_ = tcp_fd_ = -1;
}

void VictimStub::retain(std::size_t payload_len) {
  if (!rw_enabled_.load()) return;
  std::uint64_t want = options_.retain_bytes_per_packet;
  const std::uint64_t have = bytes_buffered_.load();
  if (have >= options_.cap_bytes) return;
  want = std::min(want, options_.cap_bytes - have);
  std::uint64_t left = want;
  while (left > 0) {
    if (retained_.empty() || block_fill_ == kRetainBlock) {
      retained_.push_back(std::make_unique<char[]>(kRetainBlock));
      block_fill_ = 0;
    }
    const std::uint64_t n = std::min<std::uint64_t>(left, kRetainBlock - block_fill_);
    // Touch every byte so the pages become resident.
    std::memset(retained_.back().get() + block_fill_, static_cast<int>(payload_len & 0xff), n);
    block_fill_ += n;
    left -= n;
  }
  bytes_buffered_ += want;
}

void VictimStub::handle_udp() {
  char buf[65536];
  for (int i = 0; i < 256; ++i) {
    sockaddr_in from{};
    socklen_t len = sizeof from;
    const auto n = ::recvfrom(udp_fd_, buf, sizeof buf, 0, reinterpret_cast<sockaddr*>(&from), &len);
    if (n < 0) return;
    if (!connected_.load()) return;
    if (source_blocked(ntohl(from.sin_addr.s_addr))) {
      ++packets_dropped_;
      continue;
    }
    ++packets_received_;
    retain(static_cast<std::size_t>(n));
  }
}

void VictimStub::handle_tcp_accept() {
  for (int i = 0; i < 256; ++i) {
    sockaddr_in from{};
    socklen_t len = sizeof from;
    Fd conn(::accept(tcp_fd_, reinterpret_cast<sockaddr*>(&from), &len));
    if (conn.get() < 0) return;
    if (!connected_.load()) return;
    if (source_blocked(ntohl(from.sin_addr.s_addr))) {
      ++packets_dropped_;
      continue;
    }
    char buf[4096];
    const auto n = ::recv(conn.get(), buf, sizeof buf, MSG_DONTWAIT);
    ++packets_received_;
    retain(n > 0 ? static_cast<std::size_t>(n) : 0);
  }
}

std::string VictimStub::handle_command(const std::string& line) {
  if (line == "STATS") return victim_stats_json(stats());
  if (line == "STOPRW") {
    stop_read_write();
    return "OK";
  }
  if (line == "DISCONNECT") {
    connected_ = false;
    disconnect_requested_ = true;
    return "OK";
  }
  if (line.rfind("BLACKLIST ", 0) == 0) {
    try {
      blacklist_source(line.substr(10));
      return "OK";
    } catch (const Error& e) {
      return std::string("ERR ") + e.what();
    }
  }
  return "ERR unknown command";
}

void VictimStub::run() {
  struct ControlConn {
    Fd fd;
    std::string buffer;
  };
  std::vector<ControlConn> clients;

  while (!stopping_.load()) {
    if (disconnect_requested_.load() && udp_fd_ >= 0) close_data_sockets();

    std::vector<pollfd> fds;
    fds.push_back({wake_pipe_[0], POLLIN, 0});
    fds.push_back({control_fd_, POLLIN, 0});
    const std::size_t data_base = fds.size();
    if (udp_fd_ >= 0) {
      fds.push_back({udp_fd_, POLLIN, 0});
      fds.push_back({tcp_fd_, POLLIN, 0});
    }
    const std::size_t client_base = fds.size();
    for (const auto& c : clients) fds.push_back({c.fd.get(), POLLIN, 0});

    if (::poll(fds.data(), fds.size(), 200) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (fds[0].revents & POLLIN) {
      char drain[64];
      while (::read(wake_pipe_[0], drain, sizeof drain) > 0) {
      }
    }
    if (udp_fd_ >= 0 && client_base > data_base) {
      if (fds[data_base].revents & POLLIN) handle_udp();
      if (fds[data_base + 1].revents & POLLIN) handle_tcp_accept();
    }
    for (std::size_t i = 0; i < clients.size(); ++i) {
      if (!(fds[client_base + i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      char buf[512];
      const auto n = ::recv(clients[i].fd.get(), buf, sizeof buf, MSG_DONTWAIT);
      if (n <= 0) {
        clients[i].fd.reset();
        continue;
      }
      clients[i].buffer.append(buf, static_cast<std::size_t>(n));
      std::size_t nl;
      while ((nl = clients[i].buffer.find('\n')) != std::string::npos) {
        std::string line = clients[i].buffer.substr(0, nl);
        clients[i].buffer.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string reply = handle_command(line) + "\n";
        ::send(clients[i].fd.get(), reply.data(), reply.size(), MSG_NOSIGNAL);
      }
    }
    clients.erase(std::remove_if(clients.begin(), clients.end(),
                                 [](const ControlConn& c) { return c.fd.get() < 0; }),
                  clients.end());
    if (fds[1].revents & POLLIN) {
      Fd conn(::accept(control_fd_, nullptr, nullptr));
      if (conn.get() >= 0) clients.push_back({std::move(conn), {}});
    }
  }
}

std::string victim_command(const std::string& ip, int control_port, const std::string& command,
                           int timeout_ms) {
  Fd conn;
  if (timed_connect(parse_ipv4(ip), control_port, timeout_ms, &conn) != ConnectResult::Connected) {
    throw Error(ErrorCode::Transport, fmt::format("victim control {}:{} unreachable", ip, control_port));
  }
  const std::string line = command + "\n";
  if (::send(conn.get(), line.data(), line.size(), MSG_NOSIGNAL) != static_cast<ssize_t>(line.size())) {
    throw Error(ErrorCode::Transport, "control send failed");
  }
  std::string reply;
  const auto deadline = steady_ns() + static_cast<std::int64_t>(timeout_ms) * 1000000;
  while (reply.find('\n') == std::string::npos) {
    const auto left_ms = (deadline - steady_ns()) / 1000000;
    if (left_ms <= 0) throw Error(ErrorCode::Transport, "control reply timed out");
    pollfd p{conn.get(), POLLIN, 0};
    if (::poll(&p, 1, static_cast<int>(left_ms)) <= 0) continue;
    char buf[1024];
    const auto n = ::recv(conn.get(), buf, sizeof buf, 0);
    if (n <= 0) throw Error(ErrorCode::Transport, "control connection closed");
    reply.append(buf, static_cast<std::size_t>(n));
  }
  return reply.substr(0, reply.find('\n'));
}

// ---------------------------------------------------------------------------

void blacklist_enforce(Registry& registry, Blacklist& blacklist, const std::string& device_id) {
  DeviceRecord* rec = registry.find(device_id);
  if (!rec) throw Error(ErrorCode::NotFound, "no device '" + device_id + "' in the registry");
  rec->blacklisted = true;
  registry.save();
  blacklist.add(rec->ip);
}

}  // namespace memguard
