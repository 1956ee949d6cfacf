#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace webdep {

struct DomainListEntry {
  std::uint32_t rank = 0;
  std::string domain;
  friend bool operator==(const DomainListEntry&, const DomainListEntry&) = default;
};

// Two-column CSV `rank,domain`. Blank lines and lines starting with '#' are
// skipped. Domains are normalized (lower-case, trailing dot removed) and must
// be valid hostnames; ranks must be positive and strictly increasing.
// Throws kParseError(line), kDuplicateRank(line), kDuplicateDomain(line).
std::vector<DomainListEntry> parse_domain_list(std::istream& in);
std::vector<DomainListEntry> load_domain_list(const std::filesystem::path& path);

}  // namespace webdep
