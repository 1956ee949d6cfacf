#include "webdep/analysis/coverage.hpp"

#include <algorithm>

#include "webdep/util/error.hpp"

namespace webdep {

namespace {

std::vector<NodeId> in_range(const DependencyGraph& graph, std::vector<NodeId> sites, RankRange range) {
  std::erase_if(sites, [&](NodeId id) { return !range.contains(*graph.rank(id)); });
  return sites;
}

}  // namespace

CoverageReport topk_coverage(const DependencyGraph& graph, const ExclusivityView& view,
                             ServiceType provider_type, std::uint32_t k, RankRange range,
                             DependentsMode mode) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  if (range.first > range.last) throw Error(ErrorCode::kInvalidArgument, "empty rank range");
  if (provider_type == ServiceType::kWebsite) {
    throw Error(ErrorCode::kInvalidArgument, "coverage needs a provider type");
  }

  CoverageReport r;
  r.provider_type = provider_type;
  r.range = range;
  r.mode = mode;
  r.k = k;

  std::uint64_t multiple = 0, none = 0;
  for (NodeId w : graph.websites_by_rank()) {
    if (!range.contains(*graph.rank(w))) continue;
    ++r.websites;
    const auto n = graph.out(w, provider_type).size();
    if (n == 0) ++none;
    if (n >= 2) ++multiple;
  }

  struct Candidate {
    NodeId id;
    std::vector<NodeId> sites;
  };
  std::vector<Candidate> candidates;
  for (NodeId p : graph.nodes_of_type(provider_type)) {
    auto sites = in_range(graph, dependents(graph, view, p, mode), range);
    if (!sites.empty()) candidates.push_back({p, std::move(sites)});
  }
  // Ids of one type are in name order, so a stable sort by count breaks ties by name.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.sites.size() > b.sites.size(); });
  if (candidates.size() > k) candidates.resize(k);

  std::vector<char> covered(graph.node_count(), 0);
  std::uint64_t union_count = 0;
  for (const auto& c : candidates) {
    for (NodeId w : c.sites) {
      if (!covered[w]) {
        covered[w] = 1;
        ++union_count;
      }
    }
    r.rows.push_back({graph.node(c.id).name, c.sites.size(), Ratio{c.sites.size(), r.websites},
                      Ratio{union_count, r.websites}});
  }
  r.topk_share = Ratio{union_count, r.websites};
  r.multiple_share = Ratio{multiple, r.websites};
  r.none_share = Ratio{none, r.websites};
  return r;
}

std::vector<AmplificationRow> amplification(const DependencyGraph& graph, const ExclusivityView& view,
                                            ServiceType provider_type, RankRange range) {
  std::vector<AmplificationRow> rows;
  for (NodeId p : graph.nodes_of_type(provider_type)) {
    AmplificationRow row;
    row.provider = graph.node(p).name;
    row.direct_exclusive =
        in_range(graph, dependents(graph, view, p, DependentsMode::kDirectExclusive), range).size();
    row.direct_any = in_range(graph, dependents(graph, view, p, DependentsMode::kDirectAny), range).size();
    row.direct_plus_transitive =
        in_range(graph, dependents(graph, view, p, DependentsMode::kDirectPlusTransitive), range).size();
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const AmplificationRow& a, const AmplificationRow& b) {
    return a.direct_plus_transitive > b.direct_plus_transitive;
  });
  return rows;
}

}  // namespace webdep
