#pragma once

#include <cstdint>
#include <string>

#include "webdep/probes/probe_config.hpp"
#include "webdep/probes/transport.hpp"

struct ssl_ctx_st;

namespace webdep {

// Real network I/O: DNS over UDP to the configured resolver with TCP
// fallback on truncation, plain TCP connects, TLS handshakes that request
// OCSP stapling, and HTTP/1.1 GETs (over TLS for https URLs). Certificates
// are never verified; the probes only read them.
class LiveTransport final : public Transport {
 public:
  explicit LiveTransport(const ProbeConfig& config);
  ~LiveTransport() override;
  LiveTransport(const LiveTransport&) = delete;
  LiveTransport& operator=(const LiveTransport&) = delete;

  Exchange exchange(const ProbeRequest& request) override;

 private:
  Exchange dns(const ProbeRequest& request);
  Exchange tcp(const ProbeRequest& request);
  Exchange tls(const ProbeRequest& request);
  Exchange http(const ProbeRequest& request);

  ProbeConfig config_;
  std::string resolver_address_;
  std::uint16_t resolver_port_ = 53;
  ssl_ctx_st* ssl_ctx_ = nullptr;
};

}  // namespace webdep
