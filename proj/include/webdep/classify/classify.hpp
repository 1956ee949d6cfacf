#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "webdep/classify/config.hpp"
#include "webdep/core/types.hpp"
#include "webdep/ingest/snapshot.hpp"

namespace webdep {

enum class Verdict : std::uint8_t { kThirdParty, kPrivate, kUnknown };
std::string_view to_token(Verdict v) noexcept;  // third-party / private / unknown
std::optional<Verdict> parse_verdict(std::string_view token) noexcept;

struct ProviderVerdict {
  Verdict verdict = Verdict::kUnknown;
  std::string evidence;
  std::uint32_t customer_count = 0;  // distinct websites using the provider
  bool candidate = false;            // DNS only: unknown and at/above the threshold

  friend bool operator==(const ProviderVerdict&, const ProviderVerdict&) = default;
};

// Provider labels one website was observed using. Labels equal to the
// website's own provider label (self-hosted DNS or OCSP) are kept apart: they
// count towards customer counts but never become third-party edges.
struct SiteLinks {
  std::vector<std::string> dns;
  std::vector<std::string> cdn;
  std::vector<std::string> ocsp;
  std::vector<std::string> self_hosted_dns;
  std::vector<std::string> self_hosted_ocsp;

  friend bool operator==(const SiteLinks&, const SiteLinks&) = default;
};

// Intra-provider relations discovered by the second-stage probes.
struct ProviderLinks {
  std::vector<std::string> dns;
  std::vector<std::string> cdn;
  std::vector<std::string> self_hosted_dns;

  friend bool operator==(const ProviderLinks&, const ProviderLinks&) = default;
};

struct ClassificationResult {
  std::map<NodeKey, ProviderVerdict> providers;
  std::map<std::string, SiteLinks, std::less<>> sites;
  std::map<NodeKey, ProviderLinks> provider_links;
  // Observations skipped for a classification purpose (e.g. malformed OCSP URL).
  std::vector<std::string> issues;

  const ProviderVerdict* find(ServiceType type, std::string_view label) const;
  // DNS labels flagged for manual curation, ordered by customer count desc.
  std::vector<std::pair<std::string, ProviderVerdict>> candidates() const;
  // Union with another partial result. Entries present in both are merged
  // field-wise (link lists are unioned).
  void merge(ClassificationResult other);

  friend bool operator==(const ClassificationResult&, const ClassificationResult&) = default;
};

// Registered domain of a nameserver host, folded through the curated DNS
// alias tables. Throws kUnparsableHostname.
std::string provider_of_nameserver(std::string_view ns_hostname, const ClassificationConfig& config);

// OCSP provider label of a responder URL: registered domain of its host,
// folded through the curated OCSP alias tables. Throws kMalformedOcspUrl.
std::string ocsp_provider_of_url(std::string_view url, const ClassificationConfig& config);

// CDN labels whose indicators match the evidence, sorted and deduplicated.
std::vector<std::string> classify_cdn(const CdnEvidence& evidence, const ClassificationConfig& config);

// Indicators that matched a single CNAME chain node (used by the scanner to
// choose the host it probes for a CDN provider).
std::vector<std::string> cdn_labels_for_name(std::string_view name, const ClassificationConfig& config);

ClassificationResult classify_dns_providers(const Snapshot& snapshot, const ClassificationConfig& config);
ClassificationResult classify_cdn_providers(const Snapshot& snapshot, const ClassificationConfig& config);
ClassificationResult classify_ocsp_providers(const Snapshot& snapshot, const ClassificationConfig& config);

// All three, merged.
ClassificationResult classify(const Snapshot& snapshot, const ClassificationConfig& config);

void write_classification(const ClassificationResult& result, std::ostream& out);
ClassificationResult read_classification(std::istream& in);
ClassificationResult load_classification(const std::filesystem::path& path);

}  // namespace webdep
