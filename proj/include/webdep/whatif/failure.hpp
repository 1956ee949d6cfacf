#pragma once

#include <string_view>
#include <vector>

#include "webdep/core/graph.hpp"

namespace webdep {

struct FailureResult {
  std::vector<NodeId> removed;            // sorted
  std::vector<NodeId> failed;             // sorted; includes removed
  std::vector<NodeId> affected_websites;  // failed websites, sorted

  std::size_t affected_count() const noexcept { return affected_websites.size(); }
  friend bool operator==(const FailureResult&, const FailureResult&) = default;
};

// Least fixed point of: a service fails if it was removed, or if for some
// provider type it uses, every provider of that type has failed.
// Throws kUnknownProvider for an id that is out of range or a website.
FailureResult simulate_failure(const DependencyGraph& graph, const std::vector<NodeId>& removed);

// Resolves "name" or "type:name" (type token dns/cdn/ocsp) to provider ids.
// A bare name matches that provider under every type. Throws kUnknownProvider.
std::vector<NodeId> resolve_providers(const DependencyGraph& graph, const std::vector<std::string>& specs);

}  // namespace webdep
