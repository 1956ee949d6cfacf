#include "webdep/probes/live_transport.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <csignal>
#include <cstring>
#include <random>

#include <fmt/format.h>
#include <openssl/err.h>
#include <openssl/ssl.h>
#include <openssl/x509.h>

#include "webdep/util/error.hpp"
#include "webdep/util/url.hpp"

namespace webdep {

namespace {

using Clock = std::chrono::steady_clock;

class Fd {
 public:
  explicit Fd(int fd = -1) : fd_(fd) {}
  ~Fd() {
    if (fd_ >= 0) ::close(fd_);
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  Fd(Fd&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }
  Fd& operator=(Fd&& o) noexcept {
    std::swap(fd_, o.fd_);
    return *this;
  }
  int get() const { return fd_; }

 private:
  int fd_;
};

struct SslFree {
  void operator()(SSL* s) const { SSL_free(s); }
};
using SslPtr = std::unique_ptr<SSL, SslFree>;

struct Connected {
  Fd fd;
  ExchangeStatus status = ExchangeStatus::kFailed;
  std::string note;
};

Exchange finish(ExchangeStatus status, std::string note, std::vector<std::uint8_t> payload = {}) {
  return Exchange{status, std::move(payload), std::move(note), now_utc()};
}

ExchangeStatus status_of_errno(int err) {
  switch (err) {
    case ECONNREFUSED: return ExchangeStatus::kRefused;
    case ETIMEDOUT:
    case EAGAIN: return ExchangeStatus::kTimeout;
    case ENETUNREACH:
    case EHOSTUNREACH:
    case ENETDOWN: return ExchangeStatus::kUnreachable;
    default: return ExchangeStatus::kFailed;
  }
}

std::optional<sockaddr_in> ipv4(const std::string& address, std::uint16_t port) {
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(port);
  if (::inet_pton(AF_INET, address.c_str(), &sa.sin_addr) != 1) return std::nullopt;
  return sa;
}

int remaining_ms(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
  return left.count() > 0 ? static_cast<int>(left.count()) : 0;
}

void set_io_timeout(int fd, std::chrono::milliseconds t) {
  timeval tv{};
  tv.tv_sec = static_cast<time_t>(t.count() / 1000);
  tv.tv_usec = static_cast<suseconds_t>((t.count() % 1000) * 1000);
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
  ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
}

// Non-blocking connect bounded by `timeout`; the socket is left blocking with
// I/O timeouts of the same length.
Connected connect_tcp(const std::string& address, std::uint16_t port, std::chrono::milliseconds timeout) {
  Connected c;
  const auto sa = ipv4(address, port);
  if (!sa) {
    c.note = fmt::format("not an IPv4 address: {}", address);
    return c;
  }
  Fd fd(::socket(AF_INET, SOCK_STREAM, 0));
  if (fd.get() < 0) {
    c.note = fmt::format("socket: {}", std::strerror(errno));
    return c;
  }
  const int flags = ::fcntl(fd.get(), F_GETFL, 0);
  ::fcntl(fd.get(), F_SETFL, flags | O_NONBLOCK);
  int rc = ::connect(fd.get(), reinterpret_cast<const sockaddr*>(&*sa), sizeof *sa);
  if (rc != 0 && errno != EINPROGRESS) {
    c.status = status_of_errno(errno);
    c.note = std::strerror(errno);
    return c;
  }
  if (rc != 0) {
    pollfd p{fd.get(), POLLOUT, 0};
    rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
    if (rc == 0) {
      c.status = ExchangeStatus::kTimeout;
      c.note = "connect timed out";
      return c;
    }
    int err = 0;
    socklen_t len = sizeof err;
    ::getsockopt(fd.get(), SOL_SOCKET, SO_ERROR, &err, &len);
    if (rc < 0 || err != 0) {
      const int e = rc < 0 ? errno : err;
      c.status = status_of_errno(e);
      c.note = std::strerror(e);
      return c;
    }
  }
  ::fcntl(fd.get(), F_SETFL, flags);
  set_io_timeout(fd.get(), timeout);
  c.fd = std::move(fd);
  c.status = ExchangeStatus::kOk;
  return c;
}

std::string ssl_error_text() {
  const unsigned long e = ERR_get_error();
  if (e == 0) return errno != 0 ? std::strerror(errno) : "handshake failed";
  char buf[256];
  ERR_error_string_n(e, buf, sizeof buf);
  ERR_clear_error();
  return buf;
}

struct Handshake {
  SslPtr ssl;
  ExchangeStatus status = ExchangeStatus::kFailed;
  std::string note;
};

Handshake start_tls(SSL_CTX* ctx, int fd, const std::string& host) {
  Handshake h;
  h.ssl.reset(SSL_new(ctx));
  if (!h.ssl) {
    h.note = ssl_error_text();
    return h;
  }
  SSL_set_fd(h.ssl.get(), fd);
  in_addr probe{};
  if (::inet_pton(AF_INET, host.c_str(), &probe) != 1) {
    SSL_set_tlsext_host_name(h.ssl.get(), host.c_str());
  }
  SSL_set_tlsext_status_type(h.ssl.get(), TLSEXT_STATUSTYPE_ocsp);
  errno = 0;
  if (SSL_connect(h.ssl.get()) != 1) {
    h.status = (errno == EAGAIN || errno == EWOULDBLOCK) ? ExchangeStatus::kTimeout : ExchangeStatus::kFailed;
    h.note = ssl_error_text();
    return h;
  }
  h.status = ExchangeStatus::kOk;
  return h;
}

bool send_all(int fd, const std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    const ssize_t w = ::send(fd, data, n, MSG_NOSIGNAL);
    if (w <= 0) return false;
    data += w;
    n -= static_cast<std::size_t>(w);
  }
  return true;
}

bool recv_exact(int fd, std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    const ssize_t r = ::recv(fd, data, n, 0);
    if (r <= 0) return false;
    data += r;
    n -= static_cast<std::size_t>(r);
  }
  return true;
}

}  // namespace

LiveTransport::LiveTransport(const ProbeConfig& config) : config_(config) {
  config_.validate();
  const auto colon = config_.recursive_resolver.rfind(':');
  resolver_address_ = config_.recursive_resolver.substr(0, colon);
  const std::string port = config_.recursive_resolver.substr(colon + 1);
  try {
    const int p = std::stoi(port);
    if (p <= 0 || p > 65535) throw std::out_of_range("port");
    resolver_port_ = static_cast<std::uint16_t>(p);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kConfigError, fmt::format("bad resolver port '{}'", port));
  }
  if (!ipv4(resolver_address_, resolver_port_)) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("resolver must be an IPv4 address, got '{}'", resolver_address_));
  }
  std::signal(SIGPIPE, SIG_IGN);
  ssl_ctx_ = SSL_CTX_new(TLS_client_method());
  if (ssl_ctx_ == nullptr) throw Error(ErrorCode::kConfigError, "cannot create TLS context");
  SSL_CTX_set_verify(ssl_ctx_, SSL_VERIFY_NONE, nullptr);
}

LiveTransport::~LiveTransport() { SSL_CTX_free(ssl_ctx_); }

Exchange LiveTransport::exchange(const ProbeRequest& request) {
  switch (request.kind) {
    case RequestKind::kDns: return dns(request);
    case RequestKind::kTcp: return tcp(request);
    case RequestKind::kTls: return tls(request);
    case RequestKind::kHttp: return http(request);
  }
  return finish(ExchangeStatus::kFailed, "unknown request kind");
}

Exchange LiveTransport::dns(const ProbeRequest& request) {
  thread_local std::mt19937 ids{std::random_device{}()};
  const auto id = static_cast<std::uint16_t>(ids());
  std::vector<std::uint8_t> query;
  try {
    query = encode_query(id, request.host, request.qtype);
  } catch (const Error& e) {
    return finish(ExchangeStatus::kFailed, e.what());
  }
  const auto sa = *ipv4(resolver_address_, resolver_port_);

  std::vector<std::uint8_t> reply;
  bool truncated = false;
  ExchangeStatus last = ExchangeStatus::kTimeout;
  std::string last_note = "no reply from resolver";
  for (std::uint32_t attempt = 0; attempt < config_.dns_attempts && reply.empty(); ++attempt) {
    Fd fd(::socket(AF_INET, SOCK_DGRAM, 0));
    if (fd.get() < 0) return finish(ExchangeStatus::kFailed, fmt::format("socket: {}", std::strerror(errno)));
    if (::connect(fd.get(), reinterpret_cast<const sockaddr*>(&sa), sizeof sa) != 0 ||
        ::send(fd.get(), query.data(), query.size(), 0) < 0) {
      last = status_of_errno(errno);
      last_note = std::strerror(errno);
      continue;
    }
    const auto deadline = Clock::now() + config_.dns_timeout;
    std::vector<std::uint8_t> buf(65535);
    while (reply.empty()) {
      pollfd p{fd.get(), POLLIN, 0};
      const int rc = ::poll(&p, 1, remaining_ms(deadline));
      if (rc <= 0) break;
      const ssize_t n = ::recv(fd.get(), buf.data(), buf.size(), 0);
      if (n < 0) {
        last = status_of_errno(errno);
        last_note = std::strerror(errno);
        break;
      }
      // Ignore stray datagrams that do not answer this query.
      if (n < 12 || buf[0] != static_cast<std::uint8_t>(id >> 8) ||
          buf[1] != static_cast<std::uint8_t>(id) || (buf[2] & 0x80) == 0) {
        continue;
      }
      reply.assign(buf.begin(), buf.begin() + n);
      truncated = (buf[2] & 0x02) != 0;
    }
  }
  if (reply.empty()) return finish(last, last_note);
  if (!truncated) return finish(ExchangeStatus::kOk, {}, std::move(reply));

  // Truncated over UDP: repeat over TCP with a 2-byte length prefix.
  Connected c = connect_tcp(resolver_address_, resolver_port_, config_.dns_timeout);
  if (c.status != ExchangeStatus::kOk) return finish(c.status, "TCP fallback: " + c.note);
  std::vector<std::uint8_t> framed{static_cast<std::uint8_t>(query.size() >> 8),
                                   static_cast<std::uint8_t>(query.size())};
  framed.insert(framed.end(), query.begin(), query.end());
  std::uint8_t len[2];
  if (!send_all(c.fd.get(), framed.data(), framed.size()) || !recv_exact(c.fd.get(), len, 2)) {
    return finish(status_of_errno(errno), "TCP fallback: no reply");
  }
  std::vector<std::uint8_t> full(static_cast<std::size_t>((len[0] << 8) | len[1]));
  if (!recv_exact(c.fd.get(), full.data(), full.size())) {
    return finish(status_of_errno(errno), "TCP fallback: short reply");
  }
  return finish(ExchangeStatus::kOk, {}, std::move(full));
}

Exchange LiveTransport::tcp(const ProbeRequest& request) {
  Connected c = connect_tcp(request.address, request.port, config_.tcp_timeout);
  return finish(c.status, std::move(c.note));
}

Exchange LiveTransport::tls(const ProbeRequest& request) {
  Connected c = connect_tcp(request.address, request.port, config_.tcp_timeout);
  if (c.status != ExchangeStatus::kOk) return finish(c.status, std::move(c.note));
  Handshake h = start_tls(ssl_ctx_, c.fd.get(), request.host);
  if (h.status != ExchangeStatus::kOk) return finish(h.status, std::move(h.note));

  TlsHandshake out;
  if (X509* leaf = SSL_get1_peer_certificate(h.ssl.get())) {
    const int len = i2d_X509(leaf, nullptr);
    if (len > 0) {
      out.leaf_der.resize(static_cast<std::size_t>(len));
      unsigned char* p = out.leaf_der.data();
      i2d_X509(leaf, &p);
    }
    X509_free(leaf);
  }
  const unsigned char* staple = nullptr;
  const long staple_len = SSL_get_tlsext_status_ocsp_resp(h.ssl.get(), &staple);
  if (staple != nullptr && staple_len > 0) out.ocsp_staple.assign(staple, staple + staple_len);
  out.protocol = SSL_get_version(h.ssl.get());
  SSL_shutdown(h.ssl.get());
  return finish(ExchangeStatus::kOk, {}, encode_tls_handshake(out));
}

Exchange LiveTransport::http(const ProbeRequest& request) {
  const auto url = parse_url(request.url);
  if (!url) return finish(ExchangeStatus::kFailed, "unusable URL");
  Connected c = connect_tcp(request.address, request.port, config_.tcp_timeout);
  if (c.status != ExchangeStatus::kOk) return finish(c.status, std::move(c.note));
  set_io_timeout(c.fd.get(), config_.http_timeout);

  SslPtr ssl;
  if (url->scheme == "https") {
    Handshake h = start_tls(ssl_ctx_, c.fd.get(), url->host);
    if (h.status != ExchangeStatus::kOk) return finish(h.status, "TLS: " + h.note);
    ssl = std::move(h.ssl);
  }

  const std::string host_header = url->default_port() ? url->host : fmt::format("{}:{}", url->host, url->port);
  const std::string req = fmt::format(
      "GET {} HTTP/1.1\r\nHost: {}\r\nUser-Agent: {}\r\nAccept: text/html,*/*;q=0.8\r\n"
      "Accept-Encoding: identity\r\nConnection: close\r\n\r\n",
      url->target, host_header, config_.user_agent);
  const auto* data = reinterpret_cast<const std::uint8_t*>(req.data());
  const bool sent = ssl ? SSL_write(ssl.get(), req.data(), static_cast<int>(req.size())) == static_cast<int>(req.size())
                        : send_all(c.fd.get(), data, req.size());
  if (!sent) return finish(ExchangeStatus::kFailed, "failed to send request");

  const auto deadline = Clock::now() + config_.http_timeout;
  // Headers on top of the body budget.
  const std::size_t cap = config_.max_body_bytes + 64 * 1024;
  std::vector<std::uint8_t> raw;
  std::uint8_t buf[16384];
  bool timed_out = false;
  while (raw.size() < cap) {
    if (Clock::now() >= deadline) {
      timed_out = true;
      break;
    }
    errno = 0;
    const int n = ssl ? SSL_read(ssl.get(), buf, sizeof buf)
                      : static_cast<int>(::recv(c.fd.get(), buf, sizeof buf, 0));
    if (n <= 0) {
      timed_out = errno == EAGAIN || errno == EWOULDBLOCK;
      break;
    }
    raw.insert(raw.end(), buf, buf + std::min<std::size_t>(static_cast<std::size_t>(n), cap - raw.size()));
  }
  if (raw.empty()) {
    return finish(timed_out ? ExchangeStatus::kTimeout : ExchangeStatus::kFailed, "empty response");
  }
  if (ssl) SSL_shutdown(ssl.get());
  return finish(ExchangeStatus::kOk, timed_out ? "response cut short by timeout" : "", std::move(raw));
}

}  // namespace webdep
