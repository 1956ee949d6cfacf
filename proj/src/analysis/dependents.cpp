#include "webdep/analysis/dependents.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "webdep/util/error.hpp"

namespace webdep {

namespace {

void extend(const DependencyGraph& graph, const ExclusivityView& view, std::vector<NodeId>& chain,
            std::vector<TransitiveDependency>& out) {
  const NodeId at = chain.back();
  for (ServiceType type : kProviderTypes) {
    const auto next = view.exclusive_provider(at, type);
    if (!next || std::find(chain.begin(), chain.end(), *next) != chain.end()) continue;
    chain.push_back(*next);
    if (chain.size() >= 3 && !graph.has_edge(chain.front(), *next)) out.push_back({*next, chain});
    extend(graph, view, chain, out);
    chain.pop_back();
  }
}

}  // namespace

std::vector<TransitiveDependency> transitive_dependencies(const DependencyGraph& graph,
                                                          const ExclusivityView& view, NodeId source) {
  std::vector<TransitiveDependency> out;
  std::vector<NodeId> chain{source};
  extend(graph, view, chain, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> transitive_targets(const DependencyGraph& graph, const ExclusivityView& view,
                                       NodeId source) {
  std::vector<NodeId> out;
  for (const auto& t : transitive_dependencies(graph, view, source)) out.push_back(t.target);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string_view to_token(DependentsMode m) noexcept {
  switch (m) {
    case DependentsMode::kDirectExclusive: return "direct-exclusive";
    case DependentsMode::kDirectAny: return "direct-any";
    case DependentsMode::kDirectPlusTransitive: return "direct-plus-transitive";
  }
  return "?";
}

std::optional<DependentsMode> parse_dependents_mode(std::string_view token) noexcept {
  for (auto m : {DependentsMode::kDirectExclusive, DependentsMode::kDirectAny,
                 DependentsMode::kDirectPlusTransitive}) {
    if (to_token(m) == token) return m;
  }
  return std::nullopt;
}

std::vector<NodeId> dependents(const DependencyGraph& graph, const ExclusivityView& view,
                               NodeId provider, DependentsMode mode) {
  if (provider >= graph.node_count() || graph.node(provider).type == ServiceType::kWebsite) {
    throw Error(ErrorCode::kUnknownProvider, fmt::format("no provider with id {}", provider));
  }
  const ServiceType ptype = graph.node(provider).type;
  std::vector<NodeId> out;
  for (NodeId u : graph.in(provider)) {
    if (graph.node(u).type != ServiceType::kWebsite) continue;
    if (mode == DependentsMode::kDirectExclusive && view.exclusive_provider(u, ptype) != provider) continue;
    out.push_back(u);
  }
  if (mode != DependentsMode::kDirectPlusTransitive) return out;

  // Walk back along exclusive edges: every website reached has an
  // all-exclusive chain to the provider.
  std::vector<char> seen(graph.node_count(), 0);
  std::vector<NodeId> stack{provider};
  seen[provider] = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    const ServiceType vtype = graph.node(v).type;
    for (NodeId u : graph.in(v)) {
      if (seen[u] || view.exclusive_provider(u, vtype) != v) continue;
      seen[u] = 1;
      if (graph.node(u).type == ServiceType::kWebsite) {
        out.push_back(u);
      } else {
        stack.push_back(u);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace webdep
