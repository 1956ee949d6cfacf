#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "webdep/analysis/exclusivity.hpp"
#include "webdep/core/graph.hpp"

namespace webdep {

// A service reachable from `source` through exclusive dependencies only,
// and not among source's direct dependencies. `chain` runs from source to
// target inclusive, so it has at least three entries.
struct TransitiveDependency {
  NodeId target = 0;
  std::vector<NodeId> chain;
  friend auto operator<=>(const TransitiveDependency&, const TransitiveDependency&) = default;
};

// Every qualifying chain, ordered by (target, chain).
std::vector<TransitiveDependency> transitive_dependencies(const DependencyGraph& graph,
                                                          const ExclusivityView& view, NodeId source);

// Distinct targets of the above, sorted.
std::vector<NodeId> transitive_targets(const DependencyGraph& graph, const ExclusivityView& view,
                                       NodeId source);

enum class DependentsMode : std::uint8_t { kDirectExclusive, kDirectAny, kDirectPlusTransitive };
std::string_view to_token(DependentsMode m) noexcept;
std::optional<DependentsMode> parse_dependents_mode(std::string_view token) noexcept;

// Websites depending on `provider`, sorted by id. Throws kUnknownProvider if
// the id is out of range or names a website.
std::vector<NodeId> dependents(const DependencyGraph& graph, const ExclusivityView& view,
                               NodeId provider, DependentsMode mode);

}  // namespace webdep
