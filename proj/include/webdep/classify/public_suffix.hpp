#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>

namespace webdep {

// Public-suffix rule set in the standard list format: normal rules, `*.`
// wildcards and `!` exceptions. Matching follows the published algorithm
// (exceptions win, otherwise the rule with most labels, default rule `*`).
class PublicSuffixList {
 public:
  PublicSuffixList() = default;

  // `include_private` also loads the section between the PRIVATE DOMAINS
  // markers. Off by default: private rules such as cloudfront.net would turn
  // every CDN edge hostname into its own registrable domain.
  static PublicSuffixList from_text(std::string_view text, bool include_private = false);
  static PublicSuffixList load(const std::filesystem::path& path, bool include_private = false);

  // Public suffix of a normalized hostname.
  std::string public_suffix(std::string_view host) const;
  // Suffix plus one label; nullopt when the host is itself a public suffix or
  // is not a usable hostname.
  std::optional<std::string> registered_domain(std::string_view host) const;

  std::size_t rule_count() const noexcept {
    return rules_.size() + wildcards_.size() + exceptions_.size();
  }

 private:
  std::unordered_set<std::string> rules_;
  std::unordered_set<std::string> wildcards_;   // stored without "*."
  std::unordered_set<std::string> exceptions_;  // stored without "!"
};

}  // namespace webdep
