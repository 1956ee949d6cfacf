#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "webdep/classify/public_suffix.hpp"
#include "webdep/ingest/observation.hpp"
#include "webdep/probes/probe_config.hpp"
#include "webdep/probes/transport.hpp"

namespace webdep {

// Everything a probe needs. The probes themselves are stateless; all I/O goes
// through `transport`.
struct ProbeContext {
  Transport& transport;
  const ProbeConfig& config;
  const PublicSuffixList& psl;
};

// A probe result plus the time its first network exchange completed.
template <class T>
struct Probed {
  T value;
  Timestamp at{};
};

struct DnsAnswer {
  DnsStatus status = DnsStatus::kError;
  DnsMessage message;
  std::string note;
};
Probed<DnsAnswer> dns_query(const ProbeContext& ctx, std::string_view name, RrType type);

// Sorted IPv4 addresses of `host` from the answer's A records.
struct Addresses {
  DnsStatus status = DnsStatus::kError;
  std::vector<std::string> ipv4;
  std::string note;
};
Probed<Addresses> resolve_ipv4(const ProbeContext& ctx, std::string_view host);

Probed<NsResult> probe_ns(const ProbeContext& ctx, std::string_view domain);

struct HttpsResult {
  TriState https = TriState::kProbeFailed;
  std::string note;
  std::string address;  // the address probed, when one was found
};
Probed<HttpsResult> probe_https(const ProbeContext& ctx, std::string_view domain);

struct HandshakeResult {
  ExchangeStatus status = ExchangeStatus::kFailed;
  TlsHandshake handshake;
  std::string note;
};
Probed<HandshakeResult> tls_handshake(const ProbeContext& ctx, std::string_view domain,
                                      std::string_view address);

// Interpretations of a single handshake, so one connection serves both.
CertificateInfo certificate_of(const HandshakeResult& h);
TriState stapling_of(const HandshakeResult& h);

// Stand-alone forms: resolve, connect, handshake. Not-attempted / probe-failed
// when the site does not speak HTTPS.
Probed<CertificateInfo> probe_certificate(const ProbeContext& ctx, std::string_view domain);
Probed<TriState> probe_stapling(const ProbeContext& ctx, std::string_view domain);

// Follows CNAME records one hop at a time, stopping at max_cname_chain hops
// (status too-long) or at a name already in the chain (status loop).
Probed<CnameChain> cname_chain(const ProbeContext& ctx, std::string_view host);

// Landing-page fetch over https when `https` is set (else http), redirects
// inside the registered domain, same-site link hosts, CNAME chains for the
// landing host, the final host and every link host.
Probed<CdnEvidence> probe_cdn(const ProbeContext& ctx, std::string_view domain, bool https);

// All website probes; the TLS handshake is done once.
WebsiteObservation probe_website(const ProbeContext& ctx, std::string_view domain, std::uint32_t rank);

}  // namespace webdep
