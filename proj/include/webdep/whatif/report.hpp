#pragma once

#include <iosfwd>
#include <vector>

#include "webdep/util/table.hpp"
#include "webdep/whatif/collateral.hpp"
#include "webdep/whatif/failure.hpp"

namespace webdep {

// {"removed": [...], "failed": [...], "affected_websites": [...],
//  "affected_count": n, "websites": total}. Services as "type:name".
void write_failure_json(const DependencyGraph& graph, const FailureResult& result, std::ostream& out);

// rank,domain,max_damage,vector,target,damage_pct,threat
Table collateral_table(const DependencyGraph& graph, const std::vector<CollateralEntry>& report);
// damage,bucket,first_rank,last_rank,websites
Table histogram_table(const CollateralHistogram& histogram);

}  // namespace webdep
