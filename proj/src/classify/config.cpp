#include "webdep/classify/config.hpp"

#include <fstream>
#include <istream>

#include <fmt/format.h>
#include <json.hpp>

#include "webdep/util/error.hpp"
#include "webdep/util/hostname.hpp"

namespace webdep {

bool glob_match(std::string_view pattern, std::string_view text) noexcept {
  // '*' matches any run of non-dot characters.
  if (pattern.empty()) return text.empty();
  if (pattern.front() == '*') {
    const auto rest = pattern.substr(1);
    for (std::size_t i = 0; i <= text.size(); ++i) {
      if (glob_match(rest, text.substr(i))) return true;
      if (i < text.size() && text[i] == '.') break;
    }
    return false;
  }
  return !text.empty() && pattern.front() == text.front() &&
         glob_match(pattern.substr(1), text.substr(1));
}

CuratedList& CuratedList::add(std::string label, std::vector<std::string> aliases) {
  for (auto& a : aliases) {
    a = normalize_hostname(a);
    if (a.find('*') != std::string::npos) {
      wildcard_aliases_.emplace_back(std::move(a), label);
    } else {
      exact_aliases_.insert_or_assign(std::move(a), label);
    }
  }
  labels_.insert(std::move(label));
  return *this;
}

std::optional<std::string> CuratedList::label_for(std::string_view name) const {
  if (labels_.contains(name)) return std::string(name);
  if (auto it = exact_aliases_.find(name); it != exact_aliases_.end()) return it->second;
  for (const auto& [pattern, label] : wildcard_aliases_) {
    if (glob_match(pattern, name)) return label;
  }
  return std::nullopt;
}

CuratedList CuratedList::parse(std::istream& in, std::string_view source) {
  CuratedList list;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) tokens.emplace_back(line.substr(start, i - start));
    }
    if (tokens.empty()) continue;
    std::string label = std::move(tokens.front());
    tokens.erase(tokens.begin());
    if (list.contains(label)) {
      throw Error(ErrorCode::kConfigError,
                  fmt::format("{}: label '{}' listed twice", source, label), line_no);
    }
    list.add(std::move(label), std::move(tokens));
  }
  return list;
}

CuratedList CuratedList::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, fmt::format("cannot open '{}'", path.string()));
  return parse(in, path.string());
}

std::vector<CdnIndicator> parse_cdn_indicators(std::istream& in, std::string_view source) {
  using nlohmann::json;
  const json j = json::parse(in, nullptr, false);
  auto bad = [&](std::string_view what) {
    return Error(ErrorCode::kConfigError, fmt::format("{}: {}", source, what));
  };
  if (j.is_discarded() || !j.is_array()) throw bad("CDN indicators must be a JSON array");
  std::vector<CdnIndicator> out;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("label") || !e["label"].is_string()) {
      throw bad("each indicator needs a string 'label'");
    }
    for (const auto& [key, value] : e.items()) {
      if (key != "label" && key != "cname_patterns" && key != "header_patterns") {
        throw bad(fmt::format("unknown indicator key '{}'", key));
      }
      if (key != "label" && !value.is_array()) throw bad(fmt::format("'{}' must be an array", key));
    }
    CdnIndicator ind;
    ind.label = e["label"].get<std::string>();
    if (e.contains("cname_patterns")) {
      for (const auto& p : e["cname_patterns"]) {
        if (!p.is_string()) throw bad("cname_patterns entries must be strings");
        ind.cname_patterns.push_back(ascii_lower(p.get<std::string>()));
      }
    }
    if (e.contains("header_patterns")) {
      for (const auto& p : e["header_patterns"]) {
        if (!p.is_object() || !p.contains("name") || !p["name"].is_string()) {
          throw bad("header_patterns entries need a string 'name'");
        }
        HeaderPattern hp;
        hp.name = ascii_lower(p["name"].get<std::string>());
        if (p.contains("value_substring")) {
          if (!p["value_substring"].is_string()) throw bad("value_substring must be a string");
          hp.value_substring = p["value_substring"].get<std::string>();
        }
        ind.header_patterns.push_back(std::move(hp));
      }
    }
    out.push_back(std::move(ind));
  }
  return out;
}

std::vector<CdnIndicator> load_cdn_indicators(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, fmt::format("cannot open '{}'", path.string()));
  return parse_cdn_indicators(in, path.string());
}

void ClassificationConfig::validate() const {
  if (dns_tps_threshold < 1) throw Error(ErrorCode::kConfigError, "dns_tps_threshold must be >= 1");
  if (ocsp_min_distinct_customers < 1) {
    throw Error(ErrorCode::kConfigError, "ocsp_min_distinct_customers must be >= 1");
  }
  auto disjoint = [](const CuratedList& tps, const CuratedList& priv, std::string_view kind) {
    for (const auto& label : tps.labels()) {
      if (priv.contains(label)) {
        throw Error(ErrorCode::kConfigError,
                    fmt::format("{} label '{}' is curated as both third-party and private", kind,
                                label));
      }
    }
  };
  disjoint(curated_dns_tps, curated_dns_private, "DNS");
  disjoint(curated_cdn_tps, curated_cdn_private, "CDN");
  disjoint(curated_ocsp_tps, curated_ocsp_private, "OCSP");
  std::set<std::string_view> seen;
  for (const auto& ind : cdn_indicators) {
    if (ind.label.empty() || ind.label.find_first_of(" \t") != std::string::npos) {
      throw Error(ErrorCode::kConfigError,
                  fmt::format("CDN indicator label '{}' must be non-empty without spaces", ind.label));
    }
    if (!seen.insert(ind.label).second) {
      throw Error(ErrorCode::kConfigError,
                  fmt::format("CDN indicator label '{}' defined twice", ind.label));
    }
  }
}

}  // namespace webdep
