#include "webdep/classify/classify.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "webdep/util/error.hpp"
#include "webdep/util/hostname.hpp"
#include "webdep/util/url.hpp"

namespace webdep {

namespace {

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void append_unique(std::vector<std::string>& into, const std::vector<std::string>& from) {
  into.insert(into.end(), from.begin(), from.end());
  sort_unique(into);
}

std::optional<std::string> fold(const CuratedList& a, const CuratedList& b, std::string_view name) {
  if (auto l = a.label_for(name)) return l;
  return b.label_for(name);
}

std::optional<std::string> own_dns_label(std::string_view host, const ClassificationConfig& config) {
  try {
    return provider_of_nameserver(host, config);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<std::string> own_ocsp_label(std::string_view host, const ClassificationConfig& config) {
  const auto rd = config.public_suffix_rules.registered_domain(normalize_hostname(host));
  if (!rd) return std::nullopt;
  return fold(config.curated_ocsp_tps, config.curated_ocsp_private, *rd).value_or(*rd);
}

// Distinct customers per label.
using CustomerSets = std::map<std::string, std::set<std::string>, std::less<>>;

}  // namespace

std::string_view to_token(Verdict v) noexcept {
  switch (v) {
    case Verdict::kThirdParty: return "third-party";
    case Verdict::kPrivate: return "private";
    case Verdict::kUnknown: return "unknown";
  }
  return "?";
}

std::optional<Verdict> parse_verdict(std::string_view token) noexcept {
  for (Verdict v : {Verdict::kThirdParty, Verdict::kPrivate, Verdict::kUnknown}) {
    if (to_token(v) == token) return v;
  }
  return std::nullopt;
}

const ProviderVerdict* ClassificationResult::find(ServiceType type, std::string_view label) const {
  const auto it = providers.find(NodeKey{type, std::string(label)});
  return it == providers.end() ? nullptr : &it->second;
}

std::vector<std::pair<std::string, ProviderVerdict>> ClassificationResult::candidates() const {
  std::vector<std::pair<std::string, ProviderVerdict>> out;
  for (const auto& [key, v] : providers) {
    if (key.type == ServiceType::kDnsProvider && v.candidate) out.emplace_back(key.name, v);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second.customer_count > b.second.customer_count;
  });
  return out;
}

void ClassificationResult::merge(ClassificationResult other) {
  for (auto& [key, v] : other.providers) providers.try_emplace(key, std::move(v));
  for (auto& [domain, links] : other.sites) {
    auto& mine = sites[domain];
    append_unique(mine.dns, links.dns);
    append_unique(mine.cdn, links.cdn);
    append_unique(mine.ocsp, links.ocsp);
    append_unique(mine.self_hosted_dns, links.self_hosted_dns);
    append_unique(mine.self_hosted_ocsp, links.self_hosted_ocsp);
  }
  for (auto& [key, links] : other.provider_links) {
    auto& mine = provider_links[key];
    append_unique(mine.dns, links.dns);
    append_unique(mine.cdn, links.cdn);
    append_unique(mine.self_hosted_dns, links.self_hosted_dns);
  }
  issues.insert(issues.end(), other.issues.begin(), other.issues.end());
}

std::string provider_of_nameserver(std::string_view ns_hostname, const ClassificationConfig& config) {
  const std::string host = normalize_hostname(ns_hostname);
  const auto rd = config.public_suffix_rules.registered_domain(host);
  if (!rd) {
    throw Error(ErrorCode::kUnparsableHostname,
                fmt::format("no registered domain for '{}'", ns_hostname));
  }
  return fold(config.curated_dns_tps, config.curated_dns_private, *rd).value_or(*rd);
}

std::string ocsp_provider_of_url(std::string_view url, const ClassificationConfig& config) {
  const auto parsed = parse_url(url);
  if (!parsed) throw Error(ErrorCode::kMalformedOcspUrl, fmt::format("unusable OCSP URL '{}'", url));
  if (auto label = own_ocsp_label(parsed->host, config)) return *label;
  throw Error(ErrorCode::kMalformedOcspUrl,
              fmt::format("OCSP URL host '{}' has no registered domain", parsed->host));
}

std::vector<std::string> cdn_labels_for_name(std::string_view name, const ClassificationConfig& config) {
  std::vector<std::string> labels;
  for (const auto& ind : config.cdn_indicators) {
    for (const auto& p : ind.cname_patterns) {
      if (!p.empty() && icontains(name, p)) {
        labels.push_back(ind.label);
        break;
      }
    }
  }
  sort_unique(labels);
  return labels;
}

std::vector<std::string> classify_cdn(const CdnEvidence& evidence, const ClassificationConfig& config) {
  std::vector<std::string> labels;
  for (const auto& chain : evidence.chains) {
    for (const auto& l : cdn_labels_for_name(chain.host, config)) labels.push_back(l);
    for (const auto& t : chain.targets) {
      for (const auto& l : cdn_labels_for_name(t, config)) labels.push_back(l);
    }
  }
  for (const auto& ind : config.cdn_indicators) {
    const bool hit = std::any_of(ind.header_patterns.begin(), ind.header_patterns.end(),
                                 [&](const HeaderPattern& p) {
                                   return std::any_of(
                                       evidence.headers.begin(), evidence.headers.end(),
                                       [&](const HeaderField& h) {
                                         return ascii_lower(h.name) == p.name &&
                                                icontains(h.value, p.value_substring);
                                       });
                                 });
    if (hit) labels.push_back(ind.label);
  }
  sort_unique(labels);
  return labels;
}

ClassificationResult classify_dns_providers(const Snapshot& snapshot,
                                            const ClassificationConfig& config) {
  ClassificationResult result;
  CustomerSets customers;
  std::set<std::string, std::less<>> labels;

  auto labels_of = [&](const NsResult& ns, std::string_view owner) {
    std::vector<std::string> out;
    for (const auto& host : ns.nameservers) {
      try {
        out.push_back(provider_of_nameserver(host, config));
      } catch (const Error& e) {
        result.issues.push_back(fmt::format("{}: {}", owner, e.what()));
      }
    }
    sort_unique(out);
    return out;
  };

  for (const auto& site : snapshot.website_observations) {
    auto& links = result.sites[site.domain];
    if (!site.ns.measured()) continue;
    const auto own = own_dns_label(site.domain, config);
    for (auto& label : labels_of(site.ns, site.domain)) {
      customers[label].insert(site.domain);
      labels.insert(label);
      (label == own ? links.self_hosted_dns : links.dns).push_back(std::move(label));
    }
  }
  for (const auto& prov : snapshot.provider_observations) {
    auto& links = result.provider_links[NodeKey{prov.provider_type, prov.provider_name}];
    if (!prov.ns.measured()) continue;
    const auto own = own_dns_label(prov.probed_host, config);
    for (auto& label : labels_of(prov.ns, prov.provider_name)) {
      labels.insert(label);
      (label == own ? links.self_hosted_dns : links.dns).push_back(std::move(label));
    }
  }

  for (const auto& label : labels) {
    ProviderVerdict v;
    const auto it = customers.find(label);
    v.customer_count = it == customers.end() ? 0 : static_cast<std::uint32_t>(it->second.size());
    if (config.curated_dns_tps.contains(label)) {
      v.verdict = Verdict::kThirdParty;
      v.evidence = "curated third-party DNS list";
    } else if (config.curated_dns_private.contains(label)) {
      v.verdict = Verdict::kPrivate;
      v.evidence = "curated private DNS list";
    } else {
      v.verdict = Verdict::kUnknown;
      v.candidate = v.customer_count >= config.dns_tps_threshold;
      v.evidence = v.candidate
                       ? fmt::format("not curated; serves {} websites (>= {}), needs review",
                                     v.customer_count, config.dns_tps_threshold)
                       : fmt::format("not curated; serves {} websites", v.customer_count);
    }
    result.providers.emplace(NodeKey{ServiceType::kDnsProvider, label}, std::move(v));
  }
  return result;
}

ClassificationResult classify_cdn_providers(const Snapshot& snapshot,
                                            const ClassificationConfig& config) {
  ClassificationResult result;
  CustomerSets customers;
  std::set<std::string, std::less<>> labels;

  for (const auto& site : snapshot.website_observations) {
    auto& links = result.sites[site.domain];
    links.cdn = classify_cdn(site.cdn, config);
    for (const auto& l : links.cdn) {
      customers[l].insert(site.domain);
      labels.insert(l);
    }
  }
  for (const auto& prov : snapshot.provider_observations) {
    if (prov.provider_type == ServiceType::kCdnProvider) labels.insert(prov.provider_name);
    if (prov.provider_type != ServiceType::kOcspProvider || !prov.cdn) continue;
    auto& links = result.provider_links[NodeKey{prov.provider_type, prov.provider_name}];
    links.cdn = classify_cdn(*prov.cdn, config);
    labels.insert(links.cdn.begin(), links.cdn.end());
  }

  std::set<std::string_view> indicator_labels;
  for (const auto& ind : config.cdn_indicators) indicator_labels.insert(ind.label);

  for (const auto& label : labels) {
    ProviderVerdict v;
    const auto it = customers.find(label);
    v.customer_count = it == customers.end() ? 0 : static_cast<std::uint32_t>(it->second.size());
    if (config.curated_cdn_private.contains(label)) {
      v.verdict = Verdict::kPrivate;
      v.evidence = "curated private CDN list";
    } else if (config.curated_cdn_tps.contains(label)) {
      v.verdict = Verdict::kThirdParty;
      v.evidence = "curated third-party CDN list";
    } else if (indicator_labels.contains(label)) {
      v.verdict = Verdict::kThirdParty;
      v.evidence = "CDN indicator list entry";
    } else {
      v.verdict = Verdict::kUnknown;
      v.evidence = "no indicator or curated entry";
    }
    result.providers.emplace(NodeKey{ServiceType::kCdnProvider, label}, std::move(v));
  }
  return result;
}

ClassificationResult classify_ocsp_providers(const Snapshot& snapshot,
                                             const ClassificationConfig& config) {
  ClassificationResult result;
  CustomerSets customers;
  std::set<std::string, std::less<>> labels;

  for (const auto& site : snapshot.website_observations) {
    auto& links = result.sites[site.domain];
    if (site.https != TriState::kYes) continue;
    const auto own = own_ocsp_label(site.domain, config);
    const std::string customer =
        config.public_suffix_rules.registered_domain(site.domain).value_or(site.domain);
    for (const auto& url : site.certificate.ocsp_urls) {
      std::string label;
      try {
        label = ocsp_provider_of_url(url, config);
      } catch (const Error& e) {
        result.issues.push_back(fmt::format("{}: {}", site.domain, e.what()));
        continue;
      }
      customers[label].insert(customer);
      labels.insert(label);
      auto& bucket = label == own ? links.self_hosted_ocsp : links.ocsp;
      bucket.push_back(std::move(label));
    }
    sort_unique(links.ocsp);
    sort_unique(links.self_hosted_ocsp);
  }
  for (const auto& prov : snapshot.provider_observations) {
    if (prov.provider_type == ServiceType::kOcspProvider) labels.insert(prov.provider_name);
  }

  for (const auto& label : labels) {
    ProviderVerdict v;
    const auto it = customers.find(label);
    v.customer_count = it == customers.end() ? 0 : static_cast<std::uint32_t>(it->second.size());
    if (config.curated_ocsp_tps.contains(label)) {
      v.verdict = Verdict::kThirdParty;
      v.evidence = "curated third-party OCSP list";
    } else if (config.curated_ocsp_private.contains(label)) {
      v.verdict = Verdict::kPrivate;
      v.evidence = "curated private OCSP list";
    } else if (v.customer_count >= config.ocsp_min_distinct_customers) {
      v.verdict = Verdict::kThirdParty;
      v.evidence = fmt::format("serves {} distinct customers (>= {})", v.customer_count,
                               config.ocsp_min_distinct_customers);
    } else {
      v.verdict = Verdict::kUnknown;
      v.evidence = fmt::format("serves {} distinct customers", v.customer_count);
    }
    result.providers.emplace(NodeKey{ServiceType::kOcspProvider, label}, std::move(v));
  }
  return result;
}

ClassificationResult classify(const Snapshot& snapshot, const ClassificationConfig& config) {
  ClassificationResult result = classify_dns_providers(snapshot, config);
  result.merge(classify_cdn_providers(snapshot, config));
  result.merge(classify_ocsp_providers(snapshot, config));
  return result;
}

// --- persistence ------------------------------------------------------------

using nlohmann::json;

void write_classification(const ClassificationResult& result, std::ostream& out) {
  json providers = json::array();
  for (const auto& [key, v] : result.providers) {
    providers.push_back(json{{"type", to_token(key.type)},
                             {"label", key.name},
                             {"verdict", to_token(v.verdict)},
                             {"evidence", v.evidence},
                             {"customer_count", v.customer_count},
                             {"candidate", v.candidate}});
  }
  json sites = json::object();
  for (const auto& [domain, l] : result.sites) {
    sites[domain] = json{{"dns", l.dns},
                         {"cdn", l.cdn},
                         {"ocsp", l.ocsp},
                         {"self_hosted_dns", l.self_hosted_dns},
                         {"self_hosted_ocsp", l.self_hosted_ocsp}};
  }
  json links = json::array();
  for (const auto& [key, l] : result.provider_links) {
    links.push_back(json{{"type", to_token(key.type)},
                         {"label", key.name},
                         {"dns", l.dns},
                         {"cdn", l.cdn},
                         {"self_hosted_dns", l.self_hosted_dns}});
  }
  const json doc{{"format", "webdep-classification v1"},
                 {"providers", std::move(providers)},
                 {"sites", std::move(sites)},
                 {"provider_links", std::move(links)},
                 {"issues", result.issues}};
  out << doc.dump(2, ' ', false, json::error_handler_t::replace) << '\n';
}

ClassificationResult read_classification(std::istream& in) {
  const json doc = json::parse(in, nullptr, false);
  auto bad = [](std::string_view what) {
    return Error(ErrorCode::kMalformedRecord, fmt::format("classification file: {}", what));
  };
  if (doc.is_discarded() || !doc.is_object()) throw bad("not a JSON object");
  if (doc.value("format", "") != "webdep-classification v1") {
    throw Error(ErrorCode::kSchemaVersionMismatch, "classification file has an unsupported format");
  }
  ClassificationResult r;
  try {
    auto type_of = [&](const json& e) {
      const auto t = parse_service_type(e.at("type").get<std::string>());
      if (!t) throw bad("unknown provider type");
      return *t;
    };
    for (const auto& e : doc.at("providers")) {
      ProviderVerdict v;
      const auto verdict = parse_verdict(e.at("verdict").get<std::string>());
      if (!verdict) throw bad("unknown verdict");
      v.verdict = *verdict;
      v.evidence = e.at("evidence").get<std::string>();
      v.customer_count = e.at("customer_count").get<std::uint32_t>();
      v.candidate = e.at("candidate").get<bool>();
      r.providers.emplace(NodeKey{type_of(e), e.at("label").get<std::string>()}, std::move(v));
    }
    for (const auto& [domain, l] : doc.at("sites").items()) {
      r.sites[domain] = SiteLinks{l.at("dns").get<std::vector<std::string>>(),
                                  l.at("cdn").get<std::vector<std::string>>(),
                                  l.at("ocsp").get<std::vector<std::string>>(),
                                  l.at("self_hosted_dns").get<std::vector<std::string>>(),
                                  l.at("self_hosted_ocsp").get<std::vector<std::string>>()};
    }
    for (const auto& e : doc.at("provider_links")) {
      r.provider_links[NodeKey{type_of(e), e.at("label").get<std::string>()}] =
          ProviderLinks{e.at("dns").get<std::vector<std::string>>(),
                        e.at("cdn").get<std::vector<std::string>>(),
                        e.at("self_hosted_dns").get<std::vector<std::string>>()};
    }
    r.issues = doc.at("issues").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw bad(e.what());
  }
  return r;
}

ClassificationResult load_classification(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open '{}'", path.string()));
  return read_classification(in);
}

}  // namespace webdep
