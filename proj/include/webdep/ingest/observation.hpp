#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "webdep/core/types.hpp"
#include "webdep/util/time.hpp"

namespace webdep {

// Probe outcome that keeps "could not measure" apart from "measured: no".
enum class TriState : std::uint8_t { kYes, kNo, kProbeFailed };
std::string_view to_token(TriState t) noexcept;  // yes / no / probe-failed
std::optional<TriState> parse_tristate(std::string_view token) noexcept;

enum class DnsStatus : std::uint8_t { kOk, kTimeout, kServfail, kNxdomain, kRefused, kError };
std::string_view to_token(DnsStatus s) noexcept;
std::optional<DnsStatus> parse_dns_status(std::string_view token) noexcept;

struct NsResult {
  DnsStatus status = DnsStatus::kOk;
  // Lower-cased, trailing dot stripped, deduplicated, sorted.
  std::vector<std::string> nameservers;
  std::string note;

  bool measured() const noexcept { return status == DnsStatus::kOk; }
  friend bool operator==(const NsResult&, const NsResult&) = default;
};

enum class ChainStatus : std::uint8_t { kOk, kLoop, kTooLong, kError };
std::string_view to_token(ChainStatus s) noexcept;
std::optional<ChainStatus> parse_chain_status(std::string_view token) noexcept;

// CNAME chain for one probed host. `targets` are the hops after `host`;
// chain length == targets.size(). Never contains a repeated name.
struct CnameChain {
  std::string host;
  std::vector<std::string> targets;
  ChainStatus status = ChainStatus::kOk;
  std::string note;

  friend bool operator==(const CnameChain&, const CnameChain&) = default;
};

struct HeaderField {
  std::string name;  // lower-cased
  std::string value;
  friend bool operator==(const HeaderField&, const HeaderField&) = default;
};

enum class FetchStatus : std::uint8_t { kOk, kFailed, kNotAttempted };
std::string_view to_token(FetchStatus s) noexcept;
std::optional<FetchStatus> parse_fetch_status(std::string_view token) noexcept;

// Raw CDN evidence; pattern matching happens in classify.
struct CdnEvidence {
  std::vector<CnameChain> chains;
  std::vector<HeaderField> headers;
  FetchStatus fetch_status = FetchStatus::kNotAttempted;
  std::string final_url;
  std::vector<std::string> offsite_redirects;
  std::string note;

  bool empty() const noexcept { return chains.empty() && headers.empty(); }
  friend bool operator==(const CdnEvidence&, const CdnEvidence&) = default;
};

enum class CertStatus : std::uint8_t { kOk, kNotAttempted, kHandshakeFailure, kParseError };
std::string_view to_token(CertStatus s) noexcept;
std::optional<CertStatus> parse_cert_status(std::string_view token) noexcept;

struct CertificateInfo {
  CertStatus status = CertStatus::kNotAttempted;
  std::vector<std::string> ocsp_urls;  // AIA OCSP URIs in certificate order
  std::vector<std::string> crl_urls;   // CRL distribution point URIs in certificate order
  std::string issuer;
  std::string fingerprint;  // SHA-256 of the leaf DER, lower-case hex
  std::string note;

  friend bool operator==(const CertificateInfo&, const CertificateInfo&) = default;
};

// Probe kinds used as keys of probe_timestamps.
namespace probe_kind {
inline constexpr std::string_view kNs = "ns";
inline constexpr std::string_view kHttps = "https";
inline constexpr std::string_view kCertificate = "certificate";
inline constexpr std::string_view kStapling = "stapling";
inline constexpr std::string_view kCdn = "cdn";
}  // namespace probe_kind

struct WebsiteObservation {
  std::string domain;
  std::uint32_t rank = 0;
  NsResult ns;
  TriState https = TriState::kProbeFailed;
  std::string https_note;
  CertificateInfo certificate;
  std::optional<TriState> stapling;  // unset unless https == yes
  CdnEvidence cdn;
  std::map<std::string, Timestamp, std::less<>> probe_timestamps;

  // True when every probe failed to produce a measurement.
  bool all_probes_failed() const noexcept;
  friend bool operator==(const WebsiteObservation&, const WebsiteObservation&) = default;
};

struct ProviderObservation {
  std::string provider_name;
  ServiceType provider_type = ServiceType::kCdnProvider;  // CDN or OCSP only
  std::string probed_host;
  NsResult ns;
  std::optional<CdnEvidence> cdn;  // OCSP providers only
  std::map<std::string, Timestamp, std::less<>> probe_timestamps;

  friend bool operator==(const ProviderObservation&, const ProviderObservation&) = default;
};

// Checks the per-observation invariants; returns a description of the first
// violation, or nullopt.
std::optional<std::string> validate(const WebsiteObservation& obs, std::uint32_t max_cname_chain);
std::optional<std::string> validate(const ProviderObservation& obs, std::uint32_t max_cname_chain);

}  // namespace webdep
