#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ranges>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "webdep/core/types.hpp"

namespace webdep {

using NodeId = std::uint32_t;

struct ServiceNode {
  std::string name;
  ServiceType type = ServiceType::kWebsite;

  NodeKey key() const { return NodeKey{type, name}; }
  friend bool operator==(const ServiceNode&, const ServiceNode&) = default;
};

enum class DependencyType : std::uint8_t { kDirect };

struct DependencyEdge {
  NodeId source = 0;
  NodeId target = 0;
  DependencyType type = DependencyType::kDirect;

  friend auto operator<=>(const DependencyEdge&, const DependencyEdge&) = default;
};

enum class Direction { kOut, kIn };

// The typed dependency graph G = (S, D). Immutable once built.
//
// Node ids follow the canonical (type, name) order, so iterating ids visits
// nodes canonically and any id-sorted neighbour list is grouped by type and
// sorted by name inside each group. Only Direct edges are stored; exclusive and
// transitive relations are derived in the analysis layer.
class DependencyGraph {
 public:
  class Builder;

  DependencyGraph() = default;

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const ServiceNode> nodes() const noexcept { return nodes_; }
  std::span<const DependencyEdge> edges() const noexcept { return edges_; }
  const ServiceNode& node(NodeId id) const { return nodes_.at(id); }

  std::optional<NodeId> find(std::string_view name, ServiceType type) const;
  std::optional<NodeId> find(const NodeKey& key) const { return find(key.name, key.type); }

  // Present only for websites.
  std::optional<std::uint32_t> rank(NodeId id) const;
  // Website ids in ascending rank.
  std::span<const NodeId> websites_by_rank() const noexcept { return websites_by_rank_; }
  // All node ids of one type, in name order (ids of a type are contiguous).
  std::ranges::iota_view<NodeId, NodeId> nodes_of_type(ServiceType type) const {
    const auto [lo, hi] = type_ranges_[index_of(type)];
    return std::ranges::iota_view<NodeId, NodeId>(lo, hi);
  }

  // Direct dependencies of `id` (targets), sorted by id.
  std::span<const NodeId> out(NodeId id) const;
  // Direct dependencies of `id` restricted to one target type, sorted by name.
  std::span<const NodeId> out(NodeId id, ServiceType target_type) const;
  // Services that directly depend on `id`, sorted by id.
  std::span<const NodeId> in(NodeId id) const;
  bool has_edge(NodeId source, NodeId target) const;

  // Rebuilds the adjacency indices from the edge list and compares.
  bool indices_consistent() const;

  friend bool operator==(const DependencyGraph& a, const DependencyGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_ && a.ranks_ == b.ranks_;
  }

 private:
  struct Csr {
    std::vector<std::uint32_t> offsets;
    std::vector<NodeId> targets;
    friend bool operator==(const Csr&, const Csr&) = default;
  };
  static Csr make_csr(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& pairs);
  void index();

  std::vector<ServiceNode> nodes_;
  std::vector<DependencyEdge> edges_;
  std::vector<std::uint32_t> ranks_;  // 0 for non-websites
  std::vector<NodeId> websites_by_rank_;
  std::array<std::pair<NodeId, NodeId>, kServiceTypeCount> type_ranges_{};
  Csr out_;
  Csr in_;
};

// Accumulates nodes and edges, validates the model invariants, and produces the
// canonical immutable graph. Re-adding an identical provider or edge is a
// no-op; re-adding a website is an error.
class DependencyGraph::Builder {
 public:
  // Throws kDuplicateDomain / kDuplicateRank / kInvalidGraph.
  Builder& add_website(std::string_view name, std::uint32_t rank);
  Builder& add_provider(ServiceType type, std::string_view name);
  // Endpoints must already exist. Throws kInvalidGraph on a forbidden direction
  // or a self loop, kDanglingReference on a missing endpoint.
  Builder& add_edge(const NodeKey& source, const NodeKey& target);

  bool contains(const NodeKey& key) const { return nodes_.contains(key); }

  DependencyGraph build() const;

 private:
  std::map<NodeKey, std::uint32_t> nodes_;  // value = rank for websites, else 0
  std::set<std::uint32_t> ranks_;
  std::set<std::pair<NodeKey, NodeKey>> edges_;
};

std::optional<ServiceNode> node_lookup(const DependencyGraph& graph, std::string_view name,
                                       ServiceType type);

// Edges incident to `id` in one direction whose other endpoint has `other_type`,
// ordered by the other endpoint's name.
std::vector<DependencyEdge> edges_of(const DependencyGraph& graph, NodeId id,
                                     Direction direction, ServiceType other_type);

}  // namespace webdep
