#include "webdep/classify/public_suffix.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "webdep/util/error.hpp"
#include "webdep/util/hostname.hpp"

namespace webdep {

PublicSuffixList PublicSuffixList::from_text(std::string_view text, bool include_private) {
  PublicSuffixList psl;
  bool in_private = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.find("===BEGIN PRIVATE DOMAINS===") != std::string_view::npos) in_private = true;
    if (line.find("===END PRIVATE DOMAINS===") != std::string_view::npos) in_private = false;
    // A rule is the first whitespace-delimited token of a non-comment line.
    const auto ws = line.find_first_of(" \t\r");
    if (ws != std::string_view::npos) line = line.substr(0, ws);
    if (line.empty() || line.starts_with("//")) continue;
    if (in_private && !include_private) continue;
    std::string rule = normalize_hostname(line);
    if (rule.starts_with('!')) {
      psl.exceptions_.insert(rule.substr(1));
    } else if (rule.starts_with("*.")) {
      psl.wildcards_.insert(rule.substr(2));
    } else {
      psl.rules_.insert(std::move(rule));
    }
    if (eol == text.size()) break;
  }
  return psl;
}

PublicSuffixList PublicSuffixList::load(const std::filesystem::path& path, bool include_private) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfigError, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str(), include_private);
}

std::string PublicSuffixList::public_suffix(std::string_view host) const {
  const auto labels = split_labels(host);
  const std::size_t n = labels.size();
  // Candidate suffix consisting of the last `k` labels.
  auto suffix_of = [&](std::size_t k) {
    const std::string_view first = labels[n - k];
    return host.substr(static_cast<std::size_t>(first.data() - host.data()));
  };
  std::size_t best = 1;  // default rule "*"
  for (std::size_t k = n; k >= 1; --k) {
    const std::string key(suffix_of(k));
    if (exceptions_.contains(key)) {
      // An exception rule's public suffix drops its leftmost label.
      return std::string(suffix_of(k - 1));
    }
    if (k > best) {
      if (rules_.contains(key)) {
        best = k;
      } else if (k >= 2 && wildcards_.contains(std::string(suffix_of(k - 1)))) {
        best = k;
      }
    }
  }
  return std::string(suffix_of(best));
}

std::optional<std::string> PublicSuffixList::registered_domain(std::string_view host) const {
  if (!is_valid_hostname(host)) return std::nullopt;
  const std::string suffix = public_suffix(host);
  if (suffix.size() >= host.size()) return std::nullopt;
  const std::string_view rest = host.substr(0, host.size() - suffix.size() - 1);
  const auto dot = rest.rfind('.');
  const std::string_view label = dot == std::string_view::npos ? rest : rest.substr(dot + 1);
  return fmt::format("{}.{}", label, suffix);
}

}  // namespace webdep
