#include "webdep/probes/prober.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

#include "webdep/probes/certificate.hpp"
#include "webdep/probes/http.hpp"
#include "webdep/util/error.hpp"
#include "webdep/util/hostname.hpp"
#include "webdep/util/url.hpp"

namespace webdep {

namespace {

DnsStatus status_of_rcode(std::uint8_t rc) {
  switch (rc) {
    case rcode::kNoError: return DnsStatus::kOk;
    case rcode::kServFail: return DnsStatus::kServfail;
    case rcode::kNxDomain: return DnsStatus::kNxdomain;
    case rcode::kRefused: return DnsStatus::kRefused;
    default: return DnsStatus::kError;
  }
}

std::string describe(const Exchange& e) {
  return e.note.empty() || e.note == to_token(e.status) ? std::string(to_token(e.status))
                        : fmt::format("{}: {}", to_token(e.status), e.note);
}

std::uint16_t port_for(const ProbeContext& ctx, const Url& url) {
  if (!url.default_port()) return url.port;
  return url.scheme == "https" ? ctx.config.https_port : ctx.config.http_port;
}

std::string site_of(const ProbeContext& ctx, std::string_view host) {
  return ctx.psl.registered_domain(host).value_or(std::string(host));
}

}  // namespace

Probed<DnsAnswer> dns_query(const ProbeContext& ctx, std::string_view name, RrType type) {
  const Exchange e = ctx.transport.exchange(ProbeRequest::dns(name, type));
  Probed<DnsAnswer> out;
  out.at = e.at;
  if (!e.ok()) {
    out.value.status = e.status == ExchangeStatus::kTimeout ? DnsStatus::kTimeout : DnsStatus::kError;
    out.value.note = describe(e);
    return out;
  }
  try {
    out.value.message = parse_dns_message(e.payload);
  } catch (const Error& err) {
    out.value.status = DnsStatus::kError;
    out.value.note = err.what();
    return out;
  }
  if (!out.value.message.response) {
    out.value.status = DnsStatus::kError;
    out.value.note = "reply is not a DNS response";
    return out;
  }
  out.value.status = status_of_rcode(out.value.message.rcode);
  if (out.value.status != DnsStatus::kOk) {
    out.value.note = fmt::format("rcode {}", out.value.message.rcode);
  }
  return out;
}

Probed<Addresses> resolve_ipv4(const ProbeContext& ctx, std::string_view host) {
  const auto q = dns_query(ctx, host, RrType::kA);
  Probed<Addresses> out;
  out.at = q.at;
  out.value.status = q.value.status;
  out.value.note = q.value.note;
  for (const auto& rr : q.value.message.answers) {
    if (rr.type == static_cast<std::uint16_t>(RrType::kA)) out.value.ipv4.push_back(rr.data);
  }
  std::sort(out.value.ipv4.begin(), out.value.ipv4.end());
  out.value.ipv4.erase(std::unique(out.value.ipv4.begin(), out.value.ipv4.end()), out.value.ipv4.end());
  return out;
}

Probed<NsResult> probe_ns(const ProbeContext& ctx, std::string_view domain) {
  const auto q = dns_query(ctx, domain, RrType::kNs);
  Probed<NsResult> out;
  out.at = q.at;
  out.value.status = q.value.status;
  out.value.note = q.value.note;
  if (q.value.status != DnsStatus::kOk) return out;
  for (const auto& rr : q.value.message.answers) {
    if (rr.type != static_cast<std::uint16_t>(RrType::kNs)) continue;
    std::string host = normalize_hostname(rr.data);
    if (!host.empty()) out.value.nameservers.push_back(std::move(host));
  }
  auto& ns = out.value.nameservers;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  return out;
}

Probed<HttpsResult> probe_https(const ProbeContext& ctx, std::string_view domain) {
  const auto addrs = resolve_ipv4(ctx, domain);
  Probed<HttpsResult> out;
  out.at = addrs.at;
  if (addrs.value.ipv4.empty()) {
    out.value.https = TriState::kProbeFailed;
    out.value.note = addrs.value.status == DnsStatus::kOk
                         ? "no IPv4 address"
                         : fmt::format("address lookup failed ({})", addrs.value.note);
    return out;
  }
  out.value.address = addrs.value.ipv4.front();
  const Exchange e =
      ctx.transport.exchange(ProbeRequest::tcp(domain, out.value.address, ctx.config.https_port));
  switch (e.status) {
    case ExchangeStatus::kOk: out.value.https = TriState::kYes; break;
    case ExchangeStatus::kRefused: out.value.https = TriState::kNo; break;
    default: out.value.https = TriState::kProbeFailed; break;
  }
  out.value.note = e.ok() ? std::string() : describe(e);
  return out;
}

Probed<HandshakeResult> tls_handshake(const ProbeContext& ctx, std::string_view domain,
                                      std::string_view address) {
  const Exchange e = ctx.transport.exchange(ProbeRequest::tls(domain, address, ctx.config.https_port));
  Probed<HandshakeResult> out;
  out.at = e.at;
  out.value.status = e.status;
  if (!e.ok()) {
    out.value.note = describe(e);
    return out;
  }
  try {
    out.value.handshake = decode_tls_handshake(e.payload);
  } catch (const Error& err) {
    out.value.status = ExchangeStatus::kFailed;
    out.value.note = err.what();
  }
  return out;
}

CertificateInfo certificate_of(const HandshakeResult& h) {
  CertificateInfo info;
  if (h.status != ExchangeStatus::kOk) {
    info.status = CertStatus::kHandshakeFailure;
    info.note = h.note;
    return info;
  }
  try {
    return parse_certificate(h.handshake.leaf_der);
  } catch (const Error& err) {
    info.status = CertStatus::kParseError;
    info.note = err.what();
    return info;
  }
}

TriState stapling_of(const HandshakeResult& h) {
  if (h.status != ExchangeStatus::kOk) return TriState::kProbeFailed;
  return h.handshake.ocsp_staple.empty() ? TriState::kNo : TriState::kYes;
}

Probed<CertificateInfo> probe_certificate(const ProbeContext& ctx, std::string_view domain) {
  const auto https = probe_https(ctx, domain);
  Probed<CertificateInfo> out;
  out.at = https.at;
  if (https.value.https != TriState::kYes) {
    out.value.note = "site does not accept HTTPS connections";
    return out;
  }
  const auto h = tls_handshake(ctx, domain, https.value.address);
  out.value = certificate_of(h.value);
  return out;
}

Probed<TriState> probe_stapling(const ProbeContext& ctx, std::string_view domain) {
  const auto https = probe_https(ctx, domain);
  Probed<TriState> out{TriState::kProbeFailed, https.at};
  if (https.value.https != TriState::kYes) return out;
  out.value = stapling_of(tls_handshake(ctx, domain, https.value.address).value);
  return out;
}

Probed<CnameChain> cname_chain(const ProbeContext& ctx, std::string_view host) {
  Probed<CnameChain> out;
  CnameChain& chain = out.value;
  chain.host = normalize_hostname(host);
  std::set<std::string, std::less<>> seen{chain.host};
  std::string current = chain.host;
  for (bool first = true;; first = false) {
    const auto q = dns_query(ctx, current, RrType::kCname);
    if (first) out.at = q.at;
    // A missing target ends the chain; a missing starting host is an error.
    if (q.value.status == DnsStatus::kNxdomain && !first) break;
    if (q.value.status != DnsStatus::kOk) {
      chain.status = ChainStatus::kError;
      chain.note = fmt::format("{}: {}", current, q.value.note);
      break;
    }
    const auto it = std::find_if(q.value.message.answers.begin(), q.value.message.answers.end(),
                                 [&](const ResourceRecord& rr) {
                                   return rr.type == static_cast<std::uint16_t>(RrType::kCname) &&
                                          rr.name == current;
                                 });
    if (it == q.value.message.answers.end()) break;
    std::string target = normalize_hostname(it->data);
    if (seen.contains(target)) {
      chain.status = ChainStatus::kLoop;
      chain.note = fmt::format("{} points back to {}", current, target);
      break;
    }
    if (chain.targets.size() >= ctx.config.max_cname_chain) {
      chain.status = ChainStatus::kTooLong;
      chain.note = fmt::format("more than {} hops", ctx.config.max_cname_chain);
      break;
    }
    seen.insert(target);
    chain.targets.push_back(target);
    current = std::move(target);
  }
  return out;
}

Probed<CdnEvidence> probe_cdn(const ProbeContext& ctx, std::string_view domain, bool https) {
  Probed<CdnEvidence> out;
  CdnEvidence& ev = out.value;
  bool have_time = false;
  auto stamp = [&](Timestamp t) {
    if (!have_time) out.at = t;
    have_time = true;
  };

  const std::string landing_host = normalize_hostname(domain);
  const std::string site = site_of(ctx, landing_host);
  std::map<std::string, std::string, std::less<>> address_cache;

  std::optional<Url> url = parse_url(fmt::format("{}://{}/", https ? "https" : "http", landing_host));
  std::optional<HttpResponse> final_response;
  ev.fetch_status = FetchStatus::kFailed;
  for (std::uint32_t hop = 0; url; ++hop) {
    auto cached = address_cache.find(url->host);
    if (cached == address_cache.end()) {
      const auto addrs = resolve_ipv4(ctx, url->host);
      stamp(addrs.at);
      if (addrs.value.ipv4.empty()) {
        ev.note = fmt::format("cannot resolve {}", url->host);
        break;
      }
      cached = address_cache.emplace(url->host, addrs.value.ipv4.front()).first;
    }
    const Exchange e = ctx.transport.exchange(
        ProbeRequest::http(url->to_string(), url->host, cached->second, port_for(ctx, *url)));
    stamp(e.at);
    if (!e.ok()) {
      ev.note = fmt::format("fetch {}: {}", url->to_string(), describe(e));
      break;
    }
    HttpResponse resp;
    try {
      resp = parse_http_response(e.payload);
    } catch (const Error& err) {
      ev.note = fmt::format("fetch {}: {}", url->to_string(), err.what());
      break;
    }
    const std::string* location = resp.header("location");
    std::optional<Url> next;
    if (resp.status >= 300 && resp.status < 400 && location != nullptr) {
      next = resolve_reference(*url, *location);
    }
    if (next && site_of(ctx, next->host) != site) {
      ev.offsite_redirects.push_back(next->to_string());
      next.reset();
    } else if (next && hop >= ctx.config.max_redirects) {
      ev.note = fmt::format("stopped after {} redirects", ctx.config.max_redirects);
      next.reset();
    }
    if (!next) {
      ev.fetch_status = FetchStatus::kOk;
      ev.final_url = url->to_string();
      ev.headers = resp.headers;
      final_response = std::move(resp);
      break;
    }
    url = std::move(next);
  }

  std::vector<std::string> hosts;
  if (final_response) {
    if (url->host != landing_host) hosts.push_back(url->host);
    std::set<std::string, std::less<>> seen{landing_host, url->host};
    std::uint32_t links = 0;
    for (const auto& ref : extract_link_attributes(final_response->body)) {
      if (links >= ctx.config.max_landing_links) break;
      const auto target = resolve_reference(*url, ref);
      if (!target || site_of(ctx, target->host) != site) continue;
      if (seen.insert(target->host).second) {
        hosts.push_back(target->host);
        ++links;
      }
    }
  }
  std::sort(hosts.begin(), hosts.end());
  hosts.insert(hosts.begin(), landing_host);
  for (const auto& h : hosts) {
    auto chain = cname_chain(ctx, h);
    stamp(chain.at);
    ev.chains.push_back(std::move(chain.value));
  }
  return out;
}

WebsiteObservation probe_website(const ProbeContext& ctx, std::string_view domain, std::uint32_t rank) {
  WebsiteObservation obs;
  obs.domain = normalize_hostname(domain);
  obs.rank = rank;

  auto ns = probe_ns(ctx, obs.domain);
  obs.ns = std::move(ns.value);
  obs.probe_timestamps.emplace(probe_kind::kNs, ns.at);

  const auto https = probe_https(ctx, obs.domain);
  obs.https = https.value.https;
  obs.https_note = https.value.note;
  obs.probe_timestamps.emplace(probe_kind::kHttps, https.at);

  if (obs.https == TriState::kYes) {
    const auto h = tls_handshake(ctx, obs.domain, https.value.address);
    obs.certificate = certificate_of(h.value);
    obs.stapling = stapling_of(h.value);
    obs.probe_timestamps.emplace(probe_kind::kCertificate, h.at);
    obs.probe_timestamps.emplace(probe_kind::kStapling, h.at);
  }

  auto cdn = probe_cdn(ctx, obs.domain, obs.https == TriState::kYes);
  obs.cdn = std::move(cdn.value);
  obs.probe_timestamps.emplace(probe_kind::kCdn, cdn.at);
  return obs;
}

}  // namespace webdep
