#include "webdep/core/graph.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include <fmt/format.h>

#include "webdep/util/error.hpp"

namespace webdep {

namespace {

void check_name(std::string_view name) {
  if (name.empty()) throw Error(ErrorCode::kInvalidGraph, "empty service name");
  if (std::any_of(name.begin(), name.end(),
                  [](unsigned char c) { return std::isspace(c) || std::iscntrl(c); })) {
    throw Error(ErrorCode::kInvalidGraph,
                fmt::format("service name '{}' contains whitespace", name));
  }
}

}  // namespace

DependencyGraph::Csr DependencyGraph::make_csr(
    std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& pairs) {
  Csr csr;
  csr.offsets.assign(n + 1, 0);
  for (const auto& [from, to] : pairs) ++csr.offsets[from + 1];
  for (std::size_t i = 0; i < n; ++i) csr.offsets[i + 1] += csr.offsets[i];
  csr.targets.resize(pairs.size());
  std::vector<std::uint32_t> cursor(csr.offsets.begin(), csr.offsets.end() - 1);
  for (const auto& [from, to] : pairs) csr.targets[cursor[from]++] = to;
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(csr.targets.begin() + csr.offsets[i], csr.targets.begin() + csr.offsets[i + 1]);
  }
  return csr;
}

void DependencyGraph::index() {
  const std::size_t n = nodes_.size();
  std::vector<std::pair<NodeId, NodeId>> forward;
  std::vector<std::pair<NodeId, NodeId>> backward;
  forward.reserve(edges_.size());
  backward.reserve(edges_.size());
  for (const auto& e : edges_) {
    forward.emplace_back(e.source, e.target);
    backward.emplace_back(e.target, e.source);
  }
  out_ = make_csr(n, forward);
  in_ = make_csr(n, backward);

  for (ServiceType t : kAllServiceTypes) {
    const auto lo = std::partition_point(nodes_.begin(), nodes_.end(),
                                         [t](const ServiceNode& s) { return s.type < t; });
    const auto hi = std::partition_point(lo, nodes_.end(),
                                         [t](const ServiceNode& s) { return s.type <= t; });
    type_ranges_[index_of(t)] = {static_cast<NodeId>(lo - nodes_.begin()),
                                 static_cast<NodeId>(hi - nodes_.begin())};
  }

  websites_by_rank_.clear();
  for (NodeId id = 0; id < n; ++id) {
    if (nodes_[id].type == ServiceType::kWebsite) websites_by_rank_.push_back(id);
  }
  std::sort(websites_by_rank_.begin(), websites_by_rank_.end(),
            [this](NodeId a, NodeId b) { return ranks_[a] < ranks_[b]; });
}

std::optional<NodeId> DependencyGraph::find(std::string_view name, ServiceType type) const {
  const auto [lo, hi] = type_ranges_[index_of(type)];
  const auto first = nodes_.begin() + lo;
  const auto last = nodes_.begin() + hi;
  const auto it = std::lower_bound(first, last, name, [](const ServiceNode& s, std::string_view n) {
    return s.name < n;
  });
  if (it == last || it->name != name) return std::nullopt;
  return static_cast<NodeId>(it - nodes_.begin());
}

std::optional<std::uint32_t> DependencyGraph::rank(NodeId id) const {
  if (id >= nodes_.size() || nodes_[id].type != ServiceType::kWebsite) return std::nullopt;
  return ranks_[id];
}

std::span<const NodeId> DependencyGraph::out(NodeId id) const {
  return {out_.targets.data() + out_.offsets.at(id), out_.targets.data() + out_.offsets.at(id + 1)};
}

std::span<const NodeId> DependencyGraph::out(NodeId id, ServiceType target_type) const {
  const auto all = out(id);
  const auto [lo, hi] = type_ranges_[index_of(target_type)];
  const auto first = std::lower_bound(all.begin(), all.end(), lo);
  const auto last = std::lower_bound(first, all.end(), hi);
  return all.subspan(static_cast<std::size_t>(first - all.begin()),
                     static_cast<std::size_t>(last - first));
}

std::span<const NodeId> DependencyGraph::in(NodeId id) const {
  return {in_.targets.data() + in_.offsets.at(id), in_.targets.data() + in_.offsets.at(id + 1)};
}

bool DependencyGraph::has_edge(NodeId source, NodeId target) const {
  const auto targets = out(source);
  return std::binary_search(targets.begin(), targets.end(), target);
}

bool DependencyGraph::indices_consistent() const {
  DependencyGraph copy;
  copy.nodes_ = nodes_;
  copy.edges_ = edges_;
  copy.ranks_ = ranks_;
  copy.index();
  return copy.out_ == out_ && copy.in_ == in_ && copy.type_ranges_ == type_ranges_ &&
         copy.websites_by_rank_ == websites_by_rank_;
}

DependencyGraph::Builder& DependencyGraph::Builder::add_website(std::string_view name,
                                                                std::uint32_t rank) {
  check_name(name);
  if (rank == 0) throw Error(ErrorCode::kInvalidGraph, fmt::format("website '{}' has rank 0", name));
  NodeKey key{ServiceType::kWebsite, std::string(name)};
  if (nodes_.contains(key)) {
    throw Error(ErrorCode::kDuplicateDomain, fmt::format("website '{}' added twice", name));
  }
  if (!ranks_.insert(rank).second) {
    throw Error(ErrorCode::kDuplicateRank, fmt::format("rank {} used twice", rank));
  }
  nodes_.emplace(std::move(key), rank);
  return *this;
}

DependencyGraph::Builder& DependencyGraph::Builder::add_provider(ServiceType type,
                                                                 std::string_view name) {
  if (type == ServiceType::kWebsite) {
    throw Error(ErrorCode::kInvalidGraph, "websites must be added with a rank");
  }
  check_name(name);
  nodes_.emplace(NodeKey{type, std::string(name)}, 0);
  return *this;
}

DependencyGraph::Builder& DependencyGraph::Builder::add_edge(const NodeKey& source,
                                                             const NodeKey& target) {
  if (source == target) {
    throw Error(ErrorCode::kInvalidGraph, fmt::format("self loop on {}", to_string(source)));
  }
  if (!is_permitted_edge(source.type, target.type)) {
    throw Error(ErrorCode::kInvalidGraph,
                fmt::format("edge {} -> {} has a forbidden direction", to_string(source),
                            to_string(target)));
  }
  for (const NodeKey* k : {&source, &target}) {
    if (!nodes_.contains(*k)) {
      throw Error(ErrorCode::kDanglingReference,
                  fmt::format("edge endpoint {} is not a node", to_string(*k)));
    }
  }
  edges_.emplace(source, target);
  return *this;
}

DependencyGraph DependencyGraph::Builder::build() const {
  DependencyGraph g;
  g.nodes_.reserve(nodes_.size());
  g.ranks_.reserve(nodes_.size());
  for (const auto& [key, rank] : nodes_) {
    g.nodes_.push_back(ServiceNode{key.name, key.type});
    g.ranks_.push_back(rank);
  }
  // nodes_ is a std::map, so iteration position == canonical id.
  std::unordered_map<const NodeKey*, NodeId> ids;
  ids.reserve(nodes_.size());
  for (const auto& [key, rank] : nodes_) ids.emplace(&key, static_cast<NodeId>(ids.size()));
  auto id_of = [&](const NodeKey& k) { return ids.at(&nodes_.find(k)->first); };
  g.edges_.reserve(edges_.size());
  for (const auto& [s, t] : edges_) g.edges_.push_back(DependencyEdge{id_of(s), id_of(t)});
  std::sort(g.edges_.begin(), g.edges_.end());
  g.index();
  return g;
}

std::optional<ServiceNode> node_lookup(const DependencyGraph& graph, std::string_view name,
                                       ServiceType type) {
  if (auto id = graph.find(name, type)) return graph.node(*id);
  return std::nullopt;
}

std::vector<DependencyEdge> edges_of(const DependencyGraph& graph, NodeId id,
                                     Direction direction, ServiceType other_type) {
  std::vector<DependencyEdge> result;
  if (direction == Direction::kOut) {
    for (NodeId t : graph.out(id, other_type)) result.push_back({id, t});
  } else {
    for (NodeId s : graph.in(id)) {
      if (graph.node(s).type == other_type) result.push_back({s, id});
    }
  }
  // Ids are canonical, so id order within one type is name order.
  return result;
}

}  // namespace webdep
