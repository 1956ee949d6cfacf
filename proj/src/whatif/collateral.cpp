#include "webdep/whatif/collateral.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "webdep/util/error.hpp"
#include "webdep/whatif/failure.hpp"

namespace webdep {

std::string_view to_token(AttackVector v) noexcept {
  switch (v) {
    case AttackVector::kWebsiteDns: return "ws-dns";
    case AttackVector::kWebsiteCdn: return "ws-cdn";
    case AttackVector::kWebsiteOcsp: return "ws-ocsp";
    case AttackVector::kCdnDns: return "cdn-dns";
    case AttackVector::kOcspDns: return "ocsp-dns";
    case AttackVector::kOcspCdn: return "ocsp-cdn";
  }
  return "?";
}

std::string_view threat_of(AttackVector v) noexcept {
  switch (v) {
    case AttackVector::kWebsiteDns: return "DoS";
    case AttackVector::kWebsiteCdn:
    case AttackVector::kCdnDns: return "DoS+RoQ";
    case AttackVector::kWebsiteOcsp:
    case AttackVector::kOcspDns:
    case AttackVector::kOcspCdn: return "RoS+RoQ";
  }
  return "?";
}

std::uint64_t CollateralAnalyzer::damage(NodeId target) {
  if (const auto it = memo_.find(target); it != memo_.end()) return it->second;
  const auto d = simulate_failure(graph_, {target}).affected_count();
  memo_.emplace(target, d);
  return d;
}

CollateralEntry CollateralAnalyzer::analyze(NodeId website) {
  if (website >= graph_.node_count() || graph_.node(website).type != ServiceType::kWebsite) {
    throw Error(ErrorCode::kUnknownWebsite, fmt::format("no website with id {}", website));
  }
  CollateralEntry e;
  e.website = website;
  const auto dns = view_.exclusive_provider(website, ServiceType::kDnsProvider);
  const auto cdn = view_.exclusive_provider(website, ServiceType::kCdnProvider);
  const auto ocsp = view_.exclusive_provider(website, ServiceType::kOcspProvider);
  auto hop = [&](std::optional<NodeId> from, ServiceType type) -> std::optional<NodeId> {
    return from ? view_.exclusive_provider(*from, type) : std::nullopt;
  };
  const std::pair<AttackVector, std::optional<NodeId>> candidates[] = {
      {AttackVector::kWebsiteDns, dns},
      {AttackVector::kWebsiteCdn, cdn},
      {AttackVector::kWebsiteOcsp, ocsp},
      {AttackVector::kCdnDns, hop(cdn, ServiceType::kDnsProvider)},
      {AttackVector::kOcspDns, hop(ocsp, ServiceType::kDnsProvider)},
      {AttackVector::kOcspCdn, hop(ocsp, ServiceType::kCdnProvider)},
  };
  for (const auto& [vector, target] : candidates) {
    if (!target) continue;
    const auto d = damage(*target);
    e.vectors.push_back({vector, *target, d});
    if (!e.argmax || d > e.max_damage) {
      e.max_damage = d;
      e.argmax = vector;
    }
  }
  return e;
}

CollateralEntry collateral_damage(const DependencyGraph& graph, const ExclusivityView& view, NodeId website) {
  return CollateralAnalyzer(graph, view).analyze(website);
}

std::vector<CollateralEntry> collateral_report(const DependencyGraph& graph, const ExclusivityView& view) {
  CollateralAnalyzer analyzer(graph, view);
  std::vector<CollateralEntry> out;
  for (NodeId w : graph.websites_by_rank()) out.push_back(analyzer.analyze(w));
  std::stable_sort(out.begin(), out.end(), [](const CollateralEntry& a, const CollateralEntry& b) {
    return a.max_damage > b.max_damage;
  });
  return out;
}

CollateralHistogram collateral_rank_histogram(const DependencyGraph& graph,
                                              const std::vector<CollateralEntry>& report,
                                              std::uint32_t bucket_size, std::uint32_t top_levels) {
  if (bucket_size == 0) throw Error(ErrorCode::kInvalidArgument, "bucket size must be at least 1");
  CollateralHistogram h;
  h.bucket_size = bucket_size;
  std::set<std::uint64_t, std::greater<>> levels;
  std::uint32_t max_rank = 0;
  for (const auto& e : report) {
    levels.insert(e.max_damage);
    max_rank = std::max(max_rank, *graph.rank(e.website));
  }
  for (auto level : levels) {
    if (h.levels.size() >= top_levels) break;
    h.levels.push_back(level);
  }
  const std::size_t buckets = max_rank == 0 ? 0 : (max_rank - 1) / bucket_size + 1;
  h.counts.assign(h.levels.size(), std::vector<std::uint64_t>(buckets, 0));
  for (const auto& e : report) {
    const auto it = std::find(h.levels.begin(), h.levels.end(), e.max_damage);
    if (it == h.levels.end()) continue;
    const std::size_t bucket = (*graph.rank(e.website) - 1) / bucket_size;
    ++h.counts[static_cast<std::size_t>(it - h.levels.begin())][bucket];
  }
  return h;
}

}  // namespace webdep
