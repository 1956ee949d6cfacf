#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "webdep/analysis/exclusivity.hpp"
#include "webdep/core/graph.hpp"
#include "webdep/ingest/snapshot.hpp"
#include "webdep/util/percent.hpp"

namespace webdep {

// Per-website probe outcomes the graph does not carry.
struct SiteAttributes {
  bool ns_measured = false;
  bool cdn_measured = false;
  TriState https = TriState::kProbeFailed;
  bool certificate_ok = false;
  std::optional<TriState> stapling;
  bool all_failed = true;
};
using SiteAttributeMap = std::map<std::string, SiteAttributes, std::less<>>;
SiteAttributes site_attributes(const WebsiteObservation& obs);
SiteAttributeMap site_attributes(const Snapshot& snapshot);

struct RobustnessBucket {
  std::uint32_t max_rank = 0;  // bucket covers ranks 1..max_rank
  std::uint64_t users = 0;
  std::uint64_t fragile = 0;
  Ratio fragile_share;
};

// Buckets are cumulative: one per boundary, each holding the websites ranked
// at or above it.
//   DNS / CDN: users have at least one provider of the type; fragile ones
//   have exactly one.
//   OCSP: users are HTTPS sites with a third-party OCSP provider and a
//   stapling measurement; fragile ones do not staple. Needs `attributes`.
// Throws kInvalidArgument for unsorted or zero boundaries, or OCSP without
// attributes.
std::vector<RobustnessBucket> robustness_by_rank(const DependencyGraph& graph, const ExclusivityView& view,
                                                 ServiceType provider_type,
                                                 const std::vector<std::uint32_t>& boundaries,
                                                 const SiteAttributeMap* attributes = nullptr);

// Count over a denominator of measured websites, plus how many were left out
// because the relevant probe failed.
struct Share {
  Ratio ratio;
  std::uint64_t excluded = 0;
};

struct Prevalence {
  std::uint64_t websites = 0;
  Share any_third_party;  // at least one third-party DNS, CDN or OCSP provider
  Share dns;              // denominator: NS lookup succeeded
  Share cdn;              // denominator: landing-host CNAME lookup succeeded
  Share ocsp;             // denominator: HTTPS sites whose certificate was read
  Share https;            // denominator: HTTPS probe gave yes or no
  Share stapling;         // denominator: HTTPS sites with a stapling answer
};
Prevalence prevalence(const DependencyGraph& graph, const SiteAttributeMap& attributes);

struct FragilityRow {
  ServiceType source = ServiceType::kCdnProvider;
  ServiceType target = ServiceType::kDnsProvider;
  std::uint64_t total = 0;    // providers with at least one such dependency
  std::uint64_t fragile = 0;  // of those, exclusive on one provider
};
// Rows CDN->DNS, OCSP->DNS, OCSP->CDN in that order.
std::vector<FragilityRow> intra_tps_fragility(const DependencyGraph& graph, const ExclusivityView& view);

}  // namespace webdep
