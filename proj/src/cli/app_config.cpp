#include "webdep/cli/app_config.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "webdep/util/error.hpp"

namespace webdep {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::filesystem::path& file, std::string_view what) {
  throw Error(ErrorCode::kConfigError, fmt::format("{}: {}", file.string(), what));
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::filesystem::path& file,
                    std::string_view section) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) fail(file, fmt::format("unknown key '{}' in {}", key, section));
  }
}

template <class T>
void read(const json& obj, const char* key, T& into, const std::filesystem::path& file) {
  if (!obj.contains(key)) return;
  try {
    into = obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(file, fmt::format("'{}' has the wrong type", key));
  }
}

void read_ms(const json& obj, const char* key, std::chrono::milliseconds& into, const std::filesystem::path& file) {
  std::int64_t ms = into.count();
  read(obj, key, ms, file);
  into = std::chrono::milliseconds(ms);
}

}  // namespace

AppConfig load_app_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open config '{}'", path.string()));
  const json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) fail(path, "not a JSON object");
  reject_unknown(doc, {"classification", "probe"}, path, "top level");
  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };

  AppConfig cfg;
  if (doc.contains("classification")) {
    const json& c = doc["classification"];
    reject_unknown(c,
                   {"dns_tps_threshold", "ocsp_min_distinct_customers", "public_suffix_list",
                    "include_private_suffixes", "curated_dns_tps", "curated_dns_private", "cdn_indicators",
                    "curated_cdn_tps", "curated_cdn_private", "curated_ocsp_tps", "curated_ocsp_private"},
                   path, "classification");
    auto& cc = cfg.classification;
    read(c, "dns_tps_threshold", cc.dns_tps_threshold, path);
    read(c, "ocsp_min_distinct_customers", cc.ocsp_min_distinct_customers, path);
    bool include_private = false;
    read(c, "include_private_suffixes", include_private, path);
    std::string file;
    auto path_of = [&](const char* key) -> std::optional<std::filesystem::path> {
      file.clear();
      read(c, key, file, path);
      if (file.empty()) return std::nullopt;
      return resolve(file);
    };
    if (auto p = path_of("public_suffix_list")) cc.public_suffix_rules = PublicSuffixList::load(*p, include_private);
    if (auto p = path_of("curated_dns_tps")) cc.curated_dns_tps = CuratedList::load(*p);
    if (auto p = path_of("curated_dns_private")) cc.curated_dns_private = CuratedList::load(*p);
    if (auto p = path_of("cdn_indicators")) cc.cdn_indicators = load_cdn_indicators(*p);
    if (auto p = path_of("curated_cdn_tps")) cc.curated_cdn_tps = CuratedList::load(*p);
    if (auto p = path_of("curated_cdn_private")) cc.curated_cdn_private = CuratedList::load(*p);
    if (auto p = path_of("curated_ocsp_tps")) cc.curated_ocsp_tps = CuratedList::load(*p);
    if (auto p = path_of("curated_ocsp_private")) cc.curated_ocsp_private = CuratedList::load(*p);
  }
  if (doc.contains("probe")) {
    const json& p = doc["probe"];
    reject_unknown(p,
                   {"recursive_resolver", "dns_timeout_ms", "dns_attempts", "tcp_timeout_ms", "http_timeout_ms",
                    "max_inflight", "per_host_min_interval_ms", "max_cname_chain", "max_landing_links",
                    "max_redirects", "max_body_bytes", "user_agent", "https_port", "http_port"},
                   path, "probe");
    auto& pc = cfg.probe;
    read(p, "recursive_resolver", pc.recursive_resolver, path);
    read_ms(p, "dns_timeout_ms", pc.dns_timeout, path);
    read(p, "dns_attempts", pc.dns_attempts, path);
    read_ms(p, "tcp_timeout_ms", pc.tcp_timeout, path);
    read_ms(p, "http_timeout_ms", pc.http_timeout, path);
    read(p, "max_inflight", pc.max_inflight, path);
    read_ms(p, "per_host_min_interval_ms", pc.per_host_min_interval, path);
    read(p, "max_cname_chain", pc.max_cname_chain, path);
    read(p, "max_landing_links", pc.max_landing_links, path);
    read(p, "max_redirects", pc.max_redirects, path);
    read(p, "max_body_bytes", pc.max_body_bytes, path);
    read(p, "user_agent", pc.user_agent, path);
    read(p, "https_port", pc.https_port, path);
    read(p, "http_port", pc.http_port, path);
  }
  try {
    cfg.classification.validate();
    cfg.probe.validate();
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return cfg;
}

}  // namespace webdep
