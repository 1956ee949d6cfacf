#include "fixtures.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace webdep::test {

namespace {

NodeKey kWs(std::string name) { return {ServiceType::kWebsite, std::move(name)}; }
NodeKey kDns(std::string name) { return {ServiceType::kDnsProvider, std::move(name)}; }
NodeKey kCdn(std::string name) { return {ServiceType::kCdnProvider, std::move(name)}; }
NodeKey kOcsp(std::string name) { return {ServiceType::kOcspProvider, std::move(name)}; }

std::uint32_t below(std::mt19937& rng, std::uint32_t n) { return static_cast<std::uint32_t>(rng() % n); }

}  // namespace

DependencyGraph redundant_dns_graph() {
  DependencyGraph::Builder b;
  b.add_website("example.com", 1);
  b.add_provider(ServiceType::kDnsProvider, "DNS_1");
  b.add_provider(ServiceType::kDnsProvider, "DNS_2");
  b.add_provider(ServiceType::kCdnProvider, "CDN_A");
  b.add_edge(kWs("example.com"), kDns("DNS_1"));
  b.add_edge(kWs("example.com"), kDns("DNS_2"));
  b.add_edge(kWs("example.com"), kCdn("CDN_A"));
  return b.build();
}

DependencyGraph ocsp_chain_graph() {
  DependencyGraph::Builder b;
  for (const char* p : {"DNS_1", "DNS_2"}) b.add_provider(ServiceType::kDnsProvider, p);
  for (const char* p : {"OCSP_1", "OCSP_2"}) b.add_provider(ServiceType::kOcspProvider, p);
  b.add_edge(kOcsp("OCSP_1"), kDns("DNS_1"));
  b.add_edge(kOcsp("OCSP_2"), kDns("DNS_2"));
  for (int i = 1; i <= 4; ++i) {
    const std::string site = fmt::format("example{}.com", i);
    b.add_website(site, static_cast<std::uint32_t>(i));
    b.add_edge(kWs(site), kDns("DNS_2"));
    b.add_edge(kWs(site), kOcsp(i <= 3 ? "OCSP_1" : "OCSP_2"));
  }
  return b.build();
}

DependencyGraph amplification_graph() {
  DependencyGraph::Builder b;
  for (const char* p : {"DNS_P", "DNS_R"}) b.add_provider(ServiceType::kDnsProvider, p);
  b.add_provider(ServiceType::kOcspProvider, "OCSP_Q");
  b.add_edge(kOcsp("OCSP_Q"), kDns("DNS_P"));
  for (int i = 1; i <= 2; ++i) {
    const std::string site = fmt::format("direct{}.test", i);
    b.add_website(site, static_cast<std::uint32_t>(i));
    b.add_edge(kWs(site), kDns("DNS_P"));
  }
  for (int i = 1; i <= 20; ++i) {
    const std::string site = fmt::format("via-ocsp{:02}.test", i);
    b.add_website(site, static_cast<std::uint32_t>(i + 2));
    b.add_edge(kWs(site), kDns("DNS_R"));
    b.add_edge(kWs(site), kOcsp("OCSP_Q"));
  }
  return b.build();
}

DependencyGraph random_graph(std::mt19937& rng, const RandomGraphOptions& options) {
  const std::uint32_t n = 1 + below(rng, options.max_nodes);
  const std::uint32_t websites = 1 + below(rng, n);
  std::vector<NodeKey> keys;
  std::vector<std::uint32_t> ranks(websites);
  for (std::uint32_t i = 0; i < websites; ++i) ranks[i] = i + 1;
  for (std::uint32_t i = websites; i > 1; --i) std::swap(ranks[i - 1], ranks[below(rng, i)]);

  DependencyGraph::Builder b;
  for (std::uint32_t i = 0; i < websites; ++i) {
    keys.push_back(kWs(fmt::format("w{}.test", i)));
    b.add_website(keys.back().name, ranks[i]);
  }
  for (std::uint32_t i = websites; i < n; ++i) {
    const ServiceType t = kProviderTypes[below(rng, 3)];
    keys.push_back({t, fmt::format("{}{}", to_token(t), i)});
    b.add_provider(t, keys.back().name);
  }

  const std::uint32_t density = 150 + below(rng, 550);  // per mille
  for (const auto& src : keys) {
    for (ServiceType t : kProviderTypes) {
      if (!is_permitted_edge(src.type, t)) continue;
      std::vector<const NodeKey*> targets;
      for (const auto& dst : keys) {
        if (dst.type == t) targets.push_back(&dst);
      }
      if (targets.empty()) continue;
      if (options.all_exclusive) {
        if (below(rng, 1000) < density) b.add_edge(src, *targets[below(rng, static_cast<std::uint32_t>(targets.size()))]);
        continue;
      }
      for (const NodeKey* dst : targets) {
        if (below(rng, 1000) < density) b.add_edge(src, *dst);
      }
    }
  }
  return b.build();
}

ClassificationConfig fixture_classification_config() {
  ClassificationConfig c;
  c.dns_tps_threshold = 10;
  c.curated_dns_tps.add("dynamo.test").add("nsone.test").add("udns.test");
  c.curated_dns_private.add("megacorp.test");
  return c;
}

WebsiteObservation site_with_ns(std::string domain, std::uint32_t rank, std::vector<std::string> ns) {
  WebsiteObservation o;
  o.domain = std::move(domain);
  o.rank = rank;
  o.ns.status = DnsStatus::kOk;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  o.ns.nameservers = std::move(ns);
  o.https = TriState::kNo;
  return o;
}

SnapshotPair incident_pair() {
  const std::vector<std::string> dyn_only{"ns1.dynamo.test", "ns2.dynamo.test"};
  const std::vector<std::string> dyn_nsone{"ns1.dynamo.test", "ns1.nsone.test"};
  const std::vector<std::string> dyn_udns{"ns1.dynamo.test", "pdns1.udns.test"};
  const std::vector<std::string> nsone{"ns1.nsone.test", "ns2.nsone.test"};
  const std::vector<std::string> udns{"pdns1.udns.test", "pdns2.udns.test"};

  SnapshotPair p;
  p.before.vantage_note = "incident fixture, before";
  p.after.vantage_note = "incident fixture, after";
  p.after.created_at = p.before.created_at + std::chrono::days{120};
  for (std::uint32_t i = 1; i <= 30; ++i) {
    const std::string d = fmt::format("shop{:02}.test", i);
    std::vector<std::string> before, after;
    if (i <= 11) {
      before = after = (i % 2 == 0 ? dyn_nsone : dyn_udns);
    } else if (i <= 19) {
      before = dyn_only;
      switch (i) {
        case 12: after = nsone; break;
        case 13: after = udns; break;
        case 14: after = {"ns1.nsone.test", "pdns1.udns.test"}; break;
        case 15: after = dyn_nsone; break;
        case 16: after = dyn_udns; break;
        case 17: after = {"ns1.dynamo.test", "ns2.dynamo.test", "ns2.nsone.test"}; break;
        default: after = dyn_only; break;
      }
    } else if (i <= 24) {
      before = after = nsone;
    } else if (i <= 27) {
      before = after = {"ns1.megacorp.test", "ns2.megacorp.test"};
    } else {
      before = after = {"ns1." + d, "ns2." + d};
    }
    p.before.website_observations.push_back(site_with_ns(d, i, before));
    p.after.website_observations.push_back(site_with_ns(d, i, after));
  }
  return p;
}

SnapshotPair random_pair(std::mt19937& rng, bool all_measured) {
  SnapshotPair p;
  p.after.created_at = p.before.created_at + std::chrono::days{30};
  const std::uint32_t sites = 5 + below(rng, 40);
  auto pick = [&](const std::string& domain) {
    std::vector<std::string> ns;
    if (below(rng, 10) < 6) ns.push_back("ns1.dynamo.test");
    if (below(rng, 10) < 3) ns.push_back("ns1.nsone.test");
    if (below(rng, 10) < 2) ns.push_back("pdns1.udns.test");
    if (below(rng, 10) < 2) ns.push_back("ns1.megacorp.test");
    if (below(rng, 10) < 2) ns.push_back("ns1." + domain);
    if (below(rng, 10) < 1) ns.push_back("a.tinydns.test");
    return ns;
  };
  for (std::uint32_t i = 1; i <= sites; ++i) {
    const std::string d = fmt::format("r{:02}.test", i);
    auto before = site_with_ns(d, i, pick(d));
    if (below(rng, 20) == 0) {
      before.ns.status = DnsStatus::kTimeout;
      before.ns.nameservers.clear();
    }
    p.before.website_observations.push_back(std::move(before));
    if (!all_measured && below(rng, 10) == 0) continue;  // vanished
    auto after = site_with_ns(d, i, pick(d));
    if (!all_measured && below(rng, 10) == 0) {
      after.ns.status = DnsStatus::kServfail;
      after.ns.nameservers.clear();
    }
    p.after.website_observations.push_back(std::move(after));
  }
  return p;
}

}  // namespace webdep::test
