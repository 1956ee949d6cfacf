#include "webdep/analysis/exclusivity.hpp"

namespace webdep {

std::string_view to_token(Exclusivity e) noexcept {
  switch (e) {
    case Exclusivity::kNone: return "none";
    case Exclusivity::kExclusive: return "exclusive";
    case Exclusivity::kMultiple: return "multiple";
  }
  return "?";
}

Exclusivity GraphExclusivity::status(NodeId node, ServiceType provider_type) const {
  const auto n = graph_->out(node, provider_type).size();
  return n == 0 ? Exclusivity::kNone : n == 1 ? Exclusivity::kExclusive : Exclusivity::kMultiple;
}

std::optional<NodeId> GraphExclusivity::exclusive_provider(NodeId node, ServiceType provider_type) const {
  const auto out = graph_->out(node, provider_type);
  if (out.size() != 1) return std::nullopt;
  return out.front();
}

}  // namespace webdep
