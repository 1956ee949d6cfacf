#include "webdep/ingest/domain_list.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <set>

#include <fmt/format.h>

#include "webdep/util/error.hpp"
#include "webdep/util/hostname.hpp"

namespace webdep {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<DomainListEntry> parse_domain_list(std::istream& in) {
  std::vector<DomainListEntry> entries;
  std::set<std::uint32_t> ranks;
  std::set<std::string> domains;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw Error(ErrorCode::kParseError, "expected 'rank,domain'", line_no);
    }
    const std::string_view rank_text = trim(line.substr(0, comma));
    const std::string_view domain_text = trim(line.substr(comma + 1));
    std::uint32_t rank = 0;
    auto [ptr, ec] = std::from_chars(rank_text.data(), rank_text.data() + rank_text.size(), rank);
    if (ec != std::errc{} || ptr != rank_text.data() + rank_text.size() || rank == 0) {
      throw Error(ErrorCode::kParseError, fmt::format("bad rank '{}'", rank_text), line_no);
    }
    std::string domain = normalize_hostname(domain_text);
    if (!is_valid_hostname(domain)) {
      throw Error(ErrorCode::kParseError, fmt::format("bad domain '{}'", domain_text), line_no);
    }
    if (!ranks.insert(rank).second) {
      throw Error(ErrorCode::kDuplicateRank, fmt::format("rank {} appears twice", rank), line_no);
    }
    if (!domains.insert(domain).second) {
      throw Error(ErrorCode::kDuplicateDomain, fmt::format("domain '{}' appears twice", domain),
                  line_no);
    }
    if (!entries.empty() && rank < entries.back().rank) {
      throw Error(ErrorCode::kParseError,
                  fmt::format("rank {} follows {}; ranks must increase", rank, entries.back().rank),
                  line_no);
    }
    entries.push_back(DomainListEntry{rank, std::move(domain)});
  }
  return entries;
}

std::vector<DomainListEntry> load_domain_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open '{}'", path.string()));
  return parse_domain_list(in);
}

}  // namespace webdep
