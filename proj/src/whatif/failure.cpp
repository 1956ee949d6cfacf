#include "webdep/whatif/failure.hpp"

#include <algorithm>
#include <array>

#include <fmt/format.h>

#include "webdep/util/error.hpp"

namespace webdep {

FailureResult simulate_failure(const DependencyGraph& graph, const std::vector<NodeId>& removed) {
  const std::size_t n = graph.node_count();
  std::vector<char> failed(n, 0);
  std::vector<NodeId> queue;
  for (NodeId r : removed) {
    if (r >= n || graph.node(r).type == ServiceType::kWebsite) {
      throw Error(ErrorCode::kUnknownProvider, fmt::format("no provider with id {}", r));
    }
    if (!failed[r]) {
      failed[r] = 1;
      queue.push_back(r);
    }
  }

  // Providers of each type still alive, per node.
  std::vector<std::array<std::uint32_t, kServiceTypeCount>> alive(n);
  for (NodeId u = 0; u < n; ++u) {
    for (ServiceType t : kProviderTypes) {
      alive[u][index_of(t)] = static_cast<std::uint32_t>(graph.out(u, t).size());
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    const std::size_t t = index_of(graph.node(v).type);
    for (NodeId u : graph.in(v)) {
      if (--alive[u][t] == 0 && !failed[u]) {
        failed[u] = 1;
        queue.push_back(u);
      }
    }
  }

  FailureResult r;
  r.removed = removed;
  std::sort(r.removed.begin(), r.removed.end());
  r.removed.erase(std::unique(r.removed.begin(), r.removed.end()), r.removed.end());
  for (NodeId u = 0; u < n; ++u) {
    if (!failed[u]) continue;
    r.failed.push_back(u);
    if (graph.node(u).type == ServiceType::kWebsite) r.affected_websites.push_back(u);
  }
  return r;
}

std::vector<NodeId> resolve_providers(const DependencyGraph& graph, const std::vector<std::string>& specs) {
  std::vector<NodeId> out;
  for (const auto& spec : specs) {
    std::vector<ServiceType> types(kProviderTypes.begin(), kProviderTypes.end());
    std::string_view name = spec;
    if (const auto colon = name.find(':'); colon != std::string_view::npos) {
      const auto t = parse_service_type(name.substr(0, colon));
      if (t && *t != ServiceType::kWebsite) {
        types = {*t};
        name = name.substr(colon + 1);
      }
    }
    bool found = false;
    for (ServiceType t : types) {
      if (const auto id = graph.find(name, t)) {
        out.push_back(*id);
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::kUnknownProvider, fmt::format("no provider named '{}'", spec));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace webdep
