#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "webdep/classify/classify.hpp"
#include "webdep/core/graph.hpp"
#include "webdep/ingest/snapshot.hpp"

namespace webdep {

// How the customers of one DNS provider changed between two snapshots.
// Every list holds domains in rank order (of the earlier snapshot).
struct DiffReport {
  std::string provider;
  std::vector<std::string> total_before;   // used the provider
  std::vector<std::string> robust_before;  // ... together with another third-party DNS provider
  std::vector<std::string> affected;       // ... exclusively
  std::vector<std::string> left;            // affected, provider gone afterwards
  std::vector<std::string> left_to_private; // left, and only private or own nameservers afterwards
  std::vector<std::string> became_robust;   // affected, provider kept plus another DNS provider
  std::vector<std::string> did_nothing;     // affected, provider still the only one
  std::vector<std::string> unmeasured;      // affected, but absent or NS lookup failed afterwards

  friend bool operator==(const DiffReport&, const DiffReport&) = default;
};

// `before` is the earlier graph; the outcome of each affected site is read
// from its DNS provider labels in `after` (private and self-hosted labels
// included). Throws kProviderAbsentBefore when the DNS provider is not in
// `before`.
DiffReport snapshot_diff(const DependencyGraph& before, const Snapshot& after,
                         const ClassificationResult& after_classification, std::string_view provider);

// JSON object with one {count, websites} member per field.
void write_diff_report(const DiffReport& report, std::ostream& out);

}  // namespace webdep
