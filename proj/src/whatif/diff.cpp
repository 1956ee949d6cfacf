#include "webdep/whatif/diff.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "webdep/util/error.hpp"

namespace webdep {

DiffReport snapshot_diff(const DependencyGraph& before, const Snapshot& after,
                         const ClassificationResult& after_classification, std::string_view provider) {
  const auto p = before.find(provider, ServiceType::kDnsProvider);
  if (!p) {
    throw Error(ErrorCode::kProviderAbsentBefore,
                fmt::format("DNS provider '{}' is not in the earlier graph", provider));
  }
  DiffReport r;
  r.provider = std::string(provider);

  std::vector<NodeId> users;
  for (NodeId u : before.in(*p)) {
    if (before.node(u).type == ServiceType::kWebsite) users.push_back(u);
  }
  std::sort(users.begin(), users.end(),
            [&](NodeId a, NodeId b) { return *before.rank(a) < *before.rank(b); });

  for (NodeId u : users) {
    const std::string& domain = before.node(u).name;
    r.total_before.push_back(domain);
    if (before.out(u, ServiceType::kDnsProvider).size() > 1) {
      r.robust_before.push_back(domain);
      continue;
    }
    r.affected.push_back(domain);

    const WebsiteObservation* obs = after.find_website(domain);
    const auto links = after_classification.sites.find(domain);
    if (obs == nullptr || !obs->ns.measured() || links == after_classification.sites.end()) {
      r.unmeasured.push_back(domain);
      continue;
    }
    std::vector<std::string> labels = links->second.dns;
    labels.insert(labels.end(), links->second.self_hosted_dns.begin(), links->second.self_hosted_dns.end());
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    const bool kept = std::binary_search(labels.begin(), labels.end(), r.provider);
    if (!kept) {
      r.left.push_back(domain);
      const auto& own = links->second.self_hosted_dns;
      const bool all_private = !labels.empty() && std::all_of(labels.begin(), labels.end(), [&](const std::string& l) {
        if (std::find(own.begin(), own.end(), l) != own.end()) return true;
        const ProviderVerdict* v = after_classification.find(ServiceType::kDnsProvider, l);
        return v != nullptr && v->verdict == Verdict::kPrivate;
      });
      if (all_private) r.left_to_private.push_back(domain);
    } else if (labels.size() >= 2) {
      r.became_robust.push_back(domain);
    } else {
      r.did_nothing.push_back(domain);
    }
  }
  return r;
}

void write_diff_report(const DiffReport& r, std::ostream& out) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["provider"] = r.provider;
  auto field = [&](const char* name, const std::vector<std::string>& sites) {
    doc[name] = ordered_json{{"count", sites.size()}, {"websites", sites}};
  };
  field("total_before", r.total_before);
  field("robust_before", r.robust_before);
  field("affected", r.affected);
  field("left", r.left);
  field("left_to_private", r.left_to_private);
  field("became_robust", r.became_robust);
  field("did_nothing", r.did_nothing);
  field("unmeasured", r.unmeasured);
  out << doc.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
}

}  // namespace webdep
