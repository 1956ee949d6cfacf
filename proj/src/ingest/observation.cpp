#include "webdep/ingest/observation.hpp"

#include <array>
#include <set>
#include <utility>

#include <fmt/format.h>

namespace webdep {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<E, std::string_view>, N>& table,
                        std::string_view token) noexcept {
  for (const auto& [value, name] : table) {
    if (name == token) return value;
  }
  return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table,
                         E value) noexcept {
  for (const auto& [v, name] : table) {
    if (v == value) return name;
  }
  return "?";
}

constexpr std::array<std::pair<TriState, std::string_view>, 3> kTriStates{{
    {TriState::kYes, "yes"}, {TriState::kNo, "no"}, {TriState::kProbeFailed, "probe-failed"}}};

constexpr std::array<std::pair<DnsStatus, std::string_view>, 6> kDnsStatuses{{
    {DnsStatus::kOk, "ok"},
    {DnsStatus::kTimeout, "timeout"},
    {DnsStatus::kServfail, "servfail"},
    {DnsStatus::kNxdomain, "nxdomain"},
    {DnsStatus::kRefused, "refused"},
    {DnsStatus::kError, "error"}}};

constexpr std::array<std::pair<ChainStatus, std::string_view>, 4> kChainStatuses{{
    {ChainStatus::kOk, "ok"},
    {ChainStatus::kLoop, "loop"},
    {ChainStatus::kTooLong, "too-long"},
    {ChainStatus::kError, "error"}}};

constexpr std::array<std::pair<FetchStatus, std::string_view>, 3> kFetchStatuses{{
    {FetchStatus::kOk, "ok"}, {FetchStatus::kFailed, "failed"},
    {FetchStatus::kNotAttempted, "not-attempted"}}};

constexpr std::array<std::pair<CertStatus, std::string_view>, 4> kCertStatuses{{
    {CertStatus::kOk, "ok"},
    {CertStatus::kNotAttempted, "not-attempted"},
    {CertStatus::kHandshakeFailure, "handshake-failure"},
    {CertStatus::kParseError, "parse-error"}}};

std::optional<std::string> validate_evidence(const CdnEvidence& ev, std::uint32_t max_chain) {
  for (const auto& chain : ev.chains) {
    if (chain.targets.size() > max_chain) {
      return fmt::format("CNAME chain for '{}' has {} hops (max {})", chain.host,
                         chain.targets.size(), max_chain);
    }
    std::set<std::string_view> seen{chain.host};
    for (const auto& t : chain.targets) {
      if (!seen.insert(t).second) {
        return fmt::format("CNAME chain for '{}' repeats '{}'", chain.host, t);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_token(TriState t) noexcept { return name_of(kTriStates, t); }
std::optional<TriState> parse_tristate(std::string_view token) noexcept {
  return lookup(kTriStates, token);
}
std::string_view to_token(DnsStatus s) noexcept { return name_of(kDnsStatuses, s); }
std::optional<DnsStatus> parse_dns_status(std::string_view token) noexcept {
  return lookup(kDnsStatuses, token);
}
std::string_view to_token(ChainStatus s) noexcept { return name_of(kChainStatuses, s); }
std::optional<ChainStatus> parse_chain_status(std::string_view token) noexcept {
  return lookup(kChainStatuses, token);
}
std::string_view to_token(FetchStatus s) noexcept { return name_of(kFetchStatuses, s); }
std::optional<FetchStatus> parse_fetch_status(std::string_view token) noexcept {
  return lookup(kFetchStatuses, token);
}
std::string_view to_token(CertStatus s) noexcept { return name_of(kCertStatuses, s); }
std::optional<CertStatus> parse_cert_status(std::string_view token) noexcept {
  return lookup(kCertStatuses, token);
}

bool WebsiteObservation::all_probes_failed() const noexcept {
  if (ns.measured() || https != TriState::kProbeFailed) return false;
  for (const auto& c : cdn.chains) {
    if (c.status != ChainStatus::kError) return false;
  }
  return cdn.fetch_status != FetchStatus::kOk;
}

std::optional<std::string> validate(const WebsiteObservation& obs, std::uint32_t max_chain) {
  if (obs.domain.empty()) return "website observation without domain";
  if (obs.rank == 0) return fmt::format("'{}' has rank 0", obs.domain);
  if (!obs.ns.measured() && !obs.ns.nameservers.empty()) {
    return fmt::format("'{}' lists nameservers for a failed NS lookup", obs.domain);
  }
  if (obs.https != TriState::kYes) {
    const auto& c = obs.certificate;
    if (!c.ocsp_urls.empty() || !c.crl_urls.empty() || obs.stapling.has_value() ||
        c.status != CertStatus::kNotAttempted) {
      return fmt::format("'{}' carries certificate/stapling data without HTTPS", obs.domain);
    }
  }
  return validate_evidence(obs.cdn, max_chain);
}

std::optional<std::string> validate(const ProviderObservation& obs, std::uint32_t max_chain) {
  if (obs.provider_name.empty()) return "provider observation without name";
  if (obs.provider_type != ServiceType::kCdnProvider &&
      obs.provider_type != ServiceType::kOcspProvider) {
    return fmt::format("provider '{}' has type {}; only CDN and OCSP providers are probed",
                       obs.provider_name, to_string(obs.provider_type));
  }
  if (!obs.ns.measured() && !obs.ns.nameservers.empty()) {
    return fmt::format("provider '{}' lists nameservers for a failed NS lookup", obs.provider_name);
  }
  if (obs.cdn) {
    if (obs.provider_type != ServiceType::kOcspProvider) {
      return fmt::format("CDN provider '{}' carries CDN evidence", obs.provider_name);
    }
    return validate_evidence(*obs.cdn, max_chain);
  }
  return std::nullopt;
}

}  // namespace webdep
