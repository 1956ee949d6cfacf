#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "webdep/probes/dns_message.hpp"
#include "webdep/util/time.hpp"

namespace webdep {

// The four network primitives the probes are built from. Everything a probe
// learns comes back through a Transport, which is what makes record/replay
// possible.
enum class RequestKind : std::uint8_t { kDns, kTcp, kTls, kHttp };
std::string_view to_token(RequestKind k) noexcept;
std::optional<RequestKind> parse_request_kind(std::string_view token) noexcept;

struct ProbeRequest {
  RequestKind kind = RequestKind::kDns;
  // kDns: query name. kTcp / kTls: server name (SNI). kHttp: URL host.
  std::string host;
  RrType qtype = RrType::kA;  // kDns only
  std::string address;        // kTcp / kTls / kHttp: IPv4 address to connect to
  std::uint16_t port = 0;     // kTcp / kTls / kHttp
  std::string url;            // kHttp only

  static ProbeRequest dns(std::string_view name, RrType type);
  static ProbeRequest tcp(std::string_view host, std::string_view address, std::uint16_t port);
  static ProbeRequest tls(std::string_view host, std::string_view address, std::uint16_t port);
  static ProbeRequest http(std::string_view url, std::string_view host, std::string_view address,
                           std::uint16_t port);

  // Canonical one-line description; the replay lookup key.
  std::string key() const;
  friend bool operator==(const ProbeRequest&, const ProbeRequest&) = default;
};

enum class ExchangeStatus : std::uint8_t { kOk, kTimeout, kRefused, kUnreachable, kFailed };
std::string_view to_token(ExchangeStatus s) noexcept;
std::optional<ExchangeStatus> parse_exchange_status(std::string_view token) noexcept;

// Result of one request. The payload is
//   kDns:  the raw response message,
//   kTcp:  empty,
//   kTls:  an encoded TlsHandshake,
//   kHttp: the raw response bytes as read from the socket.
struct Exchange {
  ExchangeStatus status = ExchangeStatus::kFailed;
  std::vector<std::uint8_t> payload;
  std::string note;
  Timestamp at{};

  bool ok() const noexcept { return status == ExchangeStatus::kOk; }
  friend bool operator==(const Exchange&, const Exchange&) = default;
};

struct TlsHandshake {
  std::vector<std::uint8_t> leaf_der;
  std::vector<std::uint8_t> ocsp_staple;  // empty when the server did not staple
  std::string protocol;

  friend bool operator==(const TlsHandshake&, const TlsHandshake&) = default;
};
std::vector<std::uint8_t> encode_tls_handshake(const TlsHandshake& h);
// Throws kMalformedRecord.
TlsHandshake decode_tls_handshake(const std::vector<std::uint8_t>& payload);

// Implementations must be safe to call from several threads at once.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual Exchange exchange(const ProbeRequest& request) = 0;
  // Clock used for snapshot metadata. Replay returns the recorded time.
  virtual Timestamp now() { return now_utc(); }
};

}  // namespace webdep
