#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "webdep/analysis/exclusivity.hpp"
#include "webdep/core/graph.hpp"

namespace webdep {

// The six ways to reach a website through its providers. Every hop of a
// vector must be an exclusive dependency.
enum class AttackVector : std::uint8_t {
  kWebsiteDns = 1,  // the website's DNS provider
  kWebsiteCdn = 2,  // its CDN
  kWebsiteOcsp = 3, // its OCSP responder
  kCdnDns = 4,      // the DNS provider of its CDN
  kOcspDns = 5,     // the DNS provider of its OCSP responder
  kOcspCdn = 6,     // the CDN of its OCSP responder
};
inline constexpr AttackVector kAllVectors[] = {AttackVector::kWebsiteDns, AttackVector::kWebsiteCdn,
                                               AttackVector::kWebsiteOcsp, AttackVector::kCdnDns,
                                               AttackVector::kOcspDns, AttackVector::kOcspCdn};
std::string_view to_token(AttackVector v) noexcept;   // ws-dns, ws-cdn, ...
std::string_view threat_of(AttackVector v) noexcept;  // DoS / DoS+RoQ / RoS+RoQ

inline constexpr std::string_view kCollateralCaveat =
    "damage counts assume the attacked provider cannot isolate load between its customers; "
    "they are an upper bound under that assumption";

struct VectorDamage {
  AttackVector vector = AttackVector::kWebsiteDns;
  NodeId target = 0;
  std::uint64_t damage = 0;  // websites failed when the target fails
  friend bool operator==(const VectorDamage&, const VectorDamage&) = default;
};

struct CollateralEntry {
  NodeId website = 0;
  std::vector<VectorDamage> vectors;  // present vectors, by id
  std::uint64_t max_damage = 1;       // 1 (the website itself) when no vector applies
  std::optional<AttackVector> argmax; // lowest id among the maxima
  friend bool operator==(const CollateralEntry&, const CollateralEntry&) = default;
};

// Memoizes the damage of each attacked provider, so a full report costs one
// failure simulation per distinct target.
class CollateralAnalyzer {
 public:
  CollateralAnalyzer(const DependencyGraph& graph, const ExclusivityView& view)
      : graph_(graph), view_(view) {}

  // Throws kUnknownWebsite.
  CollateralEntry analyze(NodeId website);
  std::uint64_t damage(NodeId target);

 private:
  const DependencyGraph& graph_;
  const ExclusivityView& view_;
  std::unordered_map<NodeId, std::uint64_t> memo_;
};

CollateralEntry collateral_damage(const DependencyGraph& graph, const ExclusivityView& view, NodeId website);

// Every website, ordered by max_damage desc, then rank.
std::vector<CollateralEntry> collateral_report(const DependencyGraph& graph, const ExclusivityView& view);

struct CollateralHistogram {
  std::uint32_t bucket_size = 0;
  std::vector<std::uint64_t> levels;               // distinct max_damage values, descending
  std::vector<std::vector<std::uint64_t>> counts;  // [level][bucket]; bucket b holds ranks b*size+1 .. (b+1)*size
};

// Takes the `top_levels` largest distinct max_damage values and counts, per
// rank bucket, the websites with exactly that value. Throws kInvalidArgument
// for a zero bucket size.
CollateralHistogram collateral_rank_histogram(const DependencyGraph& graph,
                                              const std::vector<CollateralEntry>& report,
                                              std::uint32_t bucket_size, std::uint32_t top_levels);

}  // namespace webdep
