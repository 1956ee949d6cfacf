#pragma once

#include <vector>

#include "webdep/analysis/coverage.hpp"
#include "webdep/analysis/statistics.hpp"
#include "webdep/util/table.hpp"

namespace webdep {

// Column layouts are stable; downstream plots depend on them.

// position,provider,dependents,share_pct,cumulative_pct, followed by the
// summary rows "multiple", "none" and "websites".
Table coverage_table(const CoverageReport& report);
// provider_type,max_rank,users,fragile,fragile_pct
Table robustness_table(ServiceType provider_type, const std::vector<RobustnessBucket>& buckets);
// measure,count,denominator,share_pct,excluded
Table prevalence_table(const Prevalence& p);
// dependency,total,fragile,fragile_pct
Table fragility_table(const std::vector<FragilityRow>& rows);
// provider,direct_exclusive,direct_any,direct_plus_transitive
Table amplification_table(const std::vector<AmplificationRow>& rows);
// rank,domain,dns,dns_providers,cdn,cdn_providers,ocsp,ocsp_providers
Table exclusivity_table(const DependencyGraph& graph, const ExclusivityView& view);

}  // namespace webdep
