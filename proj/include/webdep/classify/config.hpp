#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "webdep/classify/public_suffix.hpp"

namespace webdep {

// A curated provider list. Each line is `label [alias ...]`; '#' starts a
// comment. Aliases are registered domains folded into the label; an alias may
// use `*` to match any run of characters within one DNS label (e.g.
// `awsdns-*.com`).
class CuratedList {
 public:
  static CuratedList parse(std::istream& in, std::string_view source = "<memory>");
  static CuratedList load(const std::filesystem::path& path);

  CuratedList& add(std::string label, std::vector<std::string> aliases = {});

  bool contains(std::string_view label) const { return labels_.contains(label); }
  const std::set<std::string, std::less<>>& labels() const noexcept { return labels_; }
  // The label that `name` (a label or alias) belongs to.
  std::optional<std::string> label_for(std::string_view name) const;

 private:
  std::set<std::string, std::less<>> labels_;
  std::map<std::string, std::string, std::less<>> exact_aliases_;
  std::vector<std::pair<std::string, std::string>> wildcard_aliases_;  // (pattern, label)
};

bool glob_match(std::string_view pattern, std::string_view text) noexcept;

struct HeaderPattern {
  std::string name;             // matched exactly, case-insensitively
  std::string value_substring;  // case-insensitive substring; empty = header present
};

struct CdnIndicator {
  std::string label;
  std::vector<std::string> cname_patterns;  // case-insensitive substrings
  std::vector<HeaderPattern> header_patterns;
};

// Parses the JSON array form:
//   [{"label": "...", "cname_patterns": [...],
//     "header_patterns": [{"name": "...", "value_substring": "..."}]}]
std::vector<CdnIndicator> parse_cdn_indicators(std::istream& in, std::string_view source = "<memory>");
std::vector<CdnIndicator> load_cdn_indicators(const std::filesystem::path& path);

struct ClassificationConfig {
  std::uint32_t dns_tps_threshold = 100;
  CuratedList curated_dns_tps;
  CuratedList curated_dns_private;
  std::vector<CdnIndicator> cdn_indicators;
  CuratedList curated_cdn_tps;
  CuratedList curated_cdn_private;
  std::uint32_t ocsp_min_distinct_customers = 2;
  CuratedList curated_ocsp_tps;
  CuratedList curated_ocsp_private;
  PublicSuffixList public_suffix_rules;

  // Throws kConfigError: thresholds < 1, overlapping curated sets, empty or
  // duplicate CDN labels.
  void validate() const;
};

}  // namespace webdep
