#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "webdep/core/graph.hpp"

namespace webdep {

enum class Exclusivity : std::uint8_t { kNone, kExclusive, kMultiple };
std::string_view to_token(Exclusivity e) noexcept;  // none / exclusive / multiple

// How a service depends on providers of one type. Analyses take the view as a
// parameter rather than recomputing it, so every derived relation is tied to
// one definition of exclusivity.
class ExclusivityView {
 public:
  virtual ~ExclusivityView() = default;
  virtual Exclusivity status(NodeId node, ServiceType provider_type) const = 0;
  // The single provider when status is kExclusive.
  virtual std::optional<NodeId> exclusive_provider(NodeId node, ServiceType provider_type) const = 0;
};

// The view induced by a graph's direct edges: exclusive iff exactly one
// provider of the type, multiple iff two or more.
class GraphExclusivity final : public ExclusivityView {
 public:
  explicit GraphExclusivity(const DependencyGraph& graph) : graph_(&graph) {}

  Exclusivity status(NodeId node, ServiceType provider_type) const override;
  std::optional<NodeId> exclusive_provider(NodeId node, ServiceType provider_type) const override;

  // Providers of the type, sorted by name.
  std::span<const NodeId> providers(NodeId node, ServiceType provider_type) const {
    return graph_->out(node, provider_type);
  }

 private:
  const DependencyGraph* graph_;
};

inline GraphExclusivity exclusivity(const DependencyGraph& graph) { return GraphExclusivity(graph); }

}  // namespace webdep
