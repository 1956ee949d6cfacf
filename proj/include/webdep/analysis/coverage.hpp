#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "webdep/analysis/dependents.hpp"
#include "webdep/util/percent.hpp"

namespace webdep {

// Inclusive rank interval.
struct RankRange {
  std::uint32_t first = 1;
  std::uint32_t last = std::numeric_limits<std::uint32_t>::max();
  bool contains(std::uint32_t rank) const noexcept { return rank >= first && rank <= last; }
  friend bool operator==(const RankRange&, const RankRange&) = default;
};

struct CoverageRow {
  std::string provider;
  std::uint64_t dependents = 0;
  Ratio share;       // dependents / websites in range
  Ratio cumulative;  // websites depending on any of the rows so far
};

struct CoverageReport {
  ServiceType provider_type = ServiceType::kDnsProvider;
  RankRange range;
  DependentsMode mode = DependentsMode::kDirectExclusive;
  std::uint32_t k = 0;
  std::uint64_t websites = 0;    // websites in range (the denominator)
  std::vector<CoverageRow> rows;  // at most k; count desc, then name
  Ratio topk_share;               // cumulative share of all rows
  Ratio multiple_share;           // websites with two or more providers of the type
  Ratio none_share;               // websites with no provider of the type
};

// Throws kInvalidArgument if k == 0 or the range is empty.
CoverageReport topk_coverage(const DependencyGraph& graph, const ExclusivityView& view,
                             ServiceType provider_type, std::uint32_t k, RankRange range,
                             DependentsMode mode = DependentsMode::kDirectExclusive);

// Per-provider dependent counts in every mode, for the direct vs
// direct-plus-transitive comparison.
struct AmplificationRow {
  std::string provider;
  std::uint64_t direct_exclusive = 0;
  std::uint64_t direct_any = 0;
  std::uint64_t direct_plus_transitive = 0;
};
// Ordered by direct_plus_transitive desc, then name.
std::vector<AmplificationRow> amplification(const DependencyGraph& graph, const ExclusivityView& view,
                                            ServiceType provider_type, RankRange range = {});

}  // namespace webdep
