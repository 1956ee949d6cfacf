#include "webdep/analysis/statistics.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "webdep/util/error.hpp"

namespace webdep {

SiteAttributes site_attributes(const WebsiteObservation& obs) {
  SiteAttributes a;
  a.ns_measured = obs.ns.measured();
  a.cdn_measured = !obs.cdn.chains.empty() && obs.cdn.chains.front().status != ChainStatus::kError;
  a.https = obs.https;
  a.certificate_ok = obs.https == TriState::kYes && obs.certificate.status == CertStatus::kOk;
  a.stapling = obs.stapling;
  a.all_failed = obs.all_probes_failed();
  return a;
}

SiteAttributeMap site_attributes(const Snapshot& snapshot) {
  SiteAttributeMap out;
  for (const auto& w : snapshot.website_observations) out.emplace(w.domain, site_attributes(w));
  return out;
}

std::vector<RobustnessBucket> robustness_by_rank(const DependencyGraph& graph, const ExclusivityView& view,
                                                 ServiceType provider_type,
                                                 const std::vector<std::uint32_t>& boundaries,
                                                 const SiteAttributeMap* attributes) {
  if (provider_type == ServiceType::kWebsite) {
    throw Error(ErrorCode::kInvalidArgument, "robustness needs a provider type");
  }
  if (boundaries.empty() || boundaries.front() == 0 ||
      std::adjacent_find(boundaries.begin(), boundaries.end(), std::greater_equal<>()) != boundaries.end()) {
    throw Error(ErrorCode::kInvalidArgument, "bucket boundaries must be positive and strictly ascending");
  }
  const bool ocsp = provider_type == ServiceType::kOcspProvider;
  if (ocsp && attributes == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "OCSP robustness needs per-site stapling results");
  }

  std::vector<RobustnessBucket> buckets;
  for (auto b : boundaries) buckets.push_back({b, 0, 0, {}});
  for (NodeId w : graph.websites_by_rank()) {
    const std::uint32_t rank = *graph.rank(w);
    if (rank > boundaries.back()) break;
    bool user = false, fragile = false;
    if (ocsp) {
      const auto it = attributes->find(graph.node(w).name);
      if (it == attributes->end()) continue;
      const SiteAttributes& a = it->second;
      user = a.https == TriState::kYes && view.status(w, provider_type) != Exclusivity::kNone &&
             a.stapling && *a.stapling != TriState::kProbeFailed;
      fragile = user && *a.stapling == TriState::kNo;
    } else {
      const auto s = view.status(w, provider_type);
      user = s != Exclusivity::kNone;
      fragile = s == Exclusivity::kExclusive;
    }
    if (!user) continue;
    for (auto& bucket : buckets) {
      if (rank > bucket.max_rank) continue;
      ++bucket.users;
      if (fragile) ++bucket.fragile;
    }
  }
  for (auto& bucket : buckets) bucket.fragile_share = Ratio{bucket.fragile, bucket.users};
  return buckets;
}

Prevalence prevalence(const DependencyGraph& graph, const SiteAttributeMap& attributes) {
  Prevalence p;
  std::uint64_t any = 0, any_den = 0, dns = 0, dns_den = 0, cdn = 0, cdn_den = 0, ocsp = 0, ocsp_den = 0,
                https = 0, https_den = 0, staple = 0, staple_den = 0;
  for (NodeId w : graph.websites_by_rank()) {
    ++p.websites;
    const auto it = attributes.find(graph.node(w).name);
    if (it == attributes.end()) {
      throw Error(ErrorCode::kDanglingReference,
                  fmt::format("no probe results for website '{}'", graph.node(w).name));
    }
    const SiteAttributes& a = it->second;
    const bool has_dns = !graph.out(w, ServiceType::kDnsProvider).empty();
    const bool has_cdn = !graph.out(w, ServiceType::kCdnProvider).empty();
    const bool has_ocsp = !graph.out(w, ServiceType::kOcspProvider).empty();

    if (a.all_failed) {
      ++p.any_third_party.excluded;
    } else {
      ++any_den;
      if (has_dns || has_cdn || has_ocsp) ++any;
    }
    if (a.ns_measured) {
      ++dns_den;
      if (has_dns) ++dns;
    } else {
      ++p.dns.excluded;
    }
    if (a.cdn_measured) {
      ++cdn_den;
      if (has_cdn) ++cdn;
    } else {
      ++p.cdn.excluded;
    }
    if (a.https == TriState::kProbeFailed) {
      ++p.https.excluded;
    } else {
      ++https_den;
      if (a.https == TriState::kYes) ++https;
    }
    if (a.https == TriState::kYes) {
      if (a.certificate_ok) {
        ++ocsp_den;
        if (has_ocsp) ++ocsp;
      } else {
        ++p.ocsp.excluded;
      }
      if (a.stapling && *a.stapling != TriState::kProbeFailed) {
        ++staple_den;
        if (*a.stapling == TriState::kYes) ++staple;
      } else {
        ++p.stapling.excluded;
      }
    }
  }
  p.any_third_party.ratio = {any, any_den};
  p.dns.ratio = {dns, dns_den};
  p.cdn.ratio = {cdn, cdn_den};
  p.ocsp.ratio = {ocsp, ocsp_den};
  p.https.ratio = {https, https_den};
  p.stapling.ratio = {staple, staple_den};
  return p;
}

std::vector<FragilityRow> intra_tps_fragility(const DependencyGraph& graph, const ExclusivityView& view) {
  constexpr std::pair<ServiceType, ServiceType> kinds[] = {
      {ServiceType::kCdnProvider, ServiceType::kDnsProvider},
      {ServiceType::kOcspProvider, ServiceType::kDnsProvider},
      {ServiceType::kOcspProvider, ServiceType::kCdnProvider},
  };
  std::vector<FragilityRow> rows;
  for (const auto& [source, target] : kinds) {
    FragilityRow row{source, target, 0, 0};
    for (NodeId p : graph.nodes_of_type(source)) {
      const auto s = view.status(p, target);
      if (s == Exclusivity::kNone) continue;
      ++row.total;
      if (s == Exclusivity::kExclusive) ++row.fragile;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace webdep
