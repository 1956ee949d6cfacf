#include "webdep/classify/build_graph.hpp"

#include <fmt/format.h>

#include "webdep/util/error.hpp"

namespace webdep {

namespace {

bool is_third_party(const ClassificationResult& c, ServiceType type, const std::string& label,
                    std::string_view owner) {
  const ProviderVerdict* v = c.find(type, label);
  if (!v) {
    throw Error(ErrorCode::kDanglingReference,
                fmt::format("{} uses {} '{}' which has no verdict", owner, to_string(type), label));
  }
  return v->verdict == Verdict::kThirdParty;
}

}  // namespace

DependencyGraph build_graph(const Snapshot& snapshot, const ClassificationResult& classification) {
  DependencyGraph::Builder b;
  for (const auto& site : snapshot.website_observations) b.add_website(site.domain, site.rank);
  for (const auto& [key, v] : classification.providers) {
    if (v.verdict == Verdict::kThirdParty) b.add_provider(key.type, key.name);
  }

  auto link = [&](const NodeKey& from, ServiceType type, const std::vector<std::string>& labels) {
    for (const auto& label : labels) {
      if (is_third_party(classification, type, label, from.name)) {
        b.add_edge(from, NodeKey{type, label});
      }
    }
  };

  for (const auto& site : snapshot.website_observations) {
    const auto it = classification.sites.find(site.domain);
    if (it == classification.sites.end()) {
      throw Error(ErrorCode::kDanglingReference,
                  fmt::format("website '{}' has no classification entry", site.domain));
    }
    const NodeKey from{ServiceType::kWebsite, site.domain};
    link(from, ServiceType::kDnsProvider, it->second.dns);
    link(from, ServiceType::kCdnProvider, it->second.cdn);
    link(from, ServiceType::kOcspProvider, it->second.ocsp);
  }
  for (const auto& [key, links] : classification.provider_links) {
    const ProviderVerdict* v = classification.find(key.type, key.name);
    if (!v || v->verdict != Verdict::kThirdParty) continue;
    link(key, ServiceType::kDnsProvider, links.dns);
    link(key, ServiceType::kCdnProvider, links.cdn);
  }
  return b.build();
}

}  // namespace webdep
