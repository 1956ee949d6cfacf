#include "webdep/probes/transport.hpp"

#include <array>

#include <fmt/format.h>

#include "webdep/util/error.hpp"

namespace webdep {

namespace {

constexpr std::array kKindTokens{"dns", "tcp", "tls", "http"};
constexpr std::array kStatusTokens{"ok", "timeout", "refused", "unreachable", "failed"};

void put_block(std::vector<std::uint8_t>& out, const void* data, std::size_t n) {
  const auto len = static_cast<std::uint32_t>(n);
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(len >> shift));
  const auto* p = static_cast<const std::uint8_t*>(data);
  out.insert(out.end(), p, p + n);
}

std::vector<std::uint8_t> take_block(const std::vector<std::uint8_t>& in, std::size_t& at) {
  if (in.size() - at < 4) throw Error(ErrorCode::kMalformedRecord, "TLS record truncated");
  std::uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len = (len << 8) | in[at + i];
  at += 4;
  if (in.size() - at < len) throw Error(ErrorCode::kMalformedRecord, "TLS record truncated");
  std::vector<std::uint8_t> out(in.begin() + static_cast<std::ptrdiff_t>(at),
                                in.begin() + static_cast<std::ptrdiff_t>(at + len));
  at += len;
  return out;
}

}  // namespace

std::string_view to_token(RequestKind k) noexcept { return kKindTokens[static_cast<int>(k)]; }

std::optional<RequestKind> parse_request_kind(std::string_view token) noexcept {
  for (std::size_t i = 0; i < kKindTokens.size(); ++i) {
    if (token == kKindTokens[i]) return static_cast<RequestKind>(i);
  }
  return std::nullopt;
}

std::string_view to_token(ExchangeStatus s) noexcept { return kStatusTokens[static_cast<int>(s)]; }

std::optional<ExchangeStatus> parse_exchange_status(std::string_view token) noexcept {
  for (std::size_t i = 0; i < kStatusTokens.size(); ++i) {
    if (token == kStatusTokens[i]) return static_cast<ExchangeStatus>(i);
  }
  return std::nullopt;
}

ProbeRequest ProbeRequest::dns(std::string_view name, RrType type) {
  ProbeRequest r;
  r.kind = RequestKind::kDns;
  r.host = name;
  r.qtype = type;
  return r;
}

ProbeRequest ProbeRequest::tcp(std::string_view host, std::string_view address, std::uint16_t port) {
  ProbeRequest r;
  r.kind = RequestKind::kTcp;
  r.host = host;
  r.address = address;
  r.port = port;
  return r;
}

ProbeRequest ProbeRequest::tls(std::string_view host, std::string_view address, std::uint16_t port) {
  ProbeRequest r = tcp(host, address, port);
  r.kind = RequestKind::kTls;
  return r;
}

ProbeRequest ProbeRequest::http(std::string_view url, std::string_view host,
                                std::string_view address, std::uint16_t port) {
  ProbeRequest r = tcp(host, address, port);
  r.kind = RequestKind::kHttp;
  r.url = url;
  return r;
}

std::string ProbeRequest::key() const {
  switch (kind) {
    case RequestKind::kDns: return fmt::format("dns {} {}", to_token(qtype), host);
    case RequestKind::kTcp: return fmt::format("tcp {} {}:{}", host, address, port);
    case RequestKind::kTls: return fmt::format("tls {} {}:{}", host, address, port);
    case RequestKind::kHttp: return fmt::format("http {} @{}:{}", url, address, port);
  }
  return {};
}

std::vector<std::uint8_t> encode_tls_handshake(const TlsHandshake& h) {
  std::vector<std::uint8_t> out;
  put_block(out, h.leaf_der.data(), h.leaf_der.size());
  put_block(out, h.ocsp_staple.data(), h.ocsp_staple.size());
  put_block(out, h.protocol.data(), h.protocol.size());
  return out;
}

TlsHandshake decode_tls_handshake(const std::vector<std::uint8_t>& payload) {
  std::size_t at = 0;
  TlsHandshake h;
  h.leaf_der = take_block(payload, at);
  h.ocsp_staple = take_block(payload, at);
  const auto proto = take_block(payload, at);
  h.protocol.assign(proto.begin(), proto.end());
  if (at != payload.size()) throw Error(ErrorCode::kMalformedRecord, "trailing bytes in TLS record");
  return h;
}

}  // namespace webdep
