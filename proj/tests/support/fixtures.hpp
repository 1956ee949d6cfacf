#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "webdep/classify/config.hpp"
#include "webdep/core/graph.hpp"
#include "webdep/ingest/snapshot.hpp"

namespace webdep::test {

// example.com -> DNS_1, DNS_2, CDN_A.
DependencyGraph redundant_dns_graph();

// example1..3.com use OCSP_1 exclusively (and DNS_2 for their own names);
// OCSP_1 uses DNS_1 exclusively. example4.com uses OCSP_2, which relies on
// DNS_2 only, as a bystander.
DependencyGraph ocsp_chain_graph();

// DNS_P has two exclusive website customers; OCSP_Q depends on DNS_P
// exclusively and serves 20 more websites exclusively, which use DNS_R for
// their own names.
DependencyGraph amplification_graph();

struct RandomGraphOptions {
  std::uint32_t max_nodes = 12;
  // At most one provider per (source, type): every dependency is exclusive.
  bool all_exclusive = false;
};

// Random graph over all permitted edge directions. Uses raw engine output
// only, so a seed gives the same graph with every standard library.
DependencyGraph random_graph(std::mt19937& rng, const RandomGraphOptions& options = {});

// Classification config for the synthetic fixtures: DNS labels dynamo.test,
// nsone.test and udns.test are curated third-party, megacorp.test private.
ClassificationConfig fixture_classification_config();

// Minimal measured website observation with the given nameservers.
WebsiteObservation site_with_ns(std::string domain, std::uint32_t rank, std::vector<std::string> ns);

// Before/after snapshots of the DNS-incident fixture: 19 sites on
// dynamo.test, 11 of them with a second provider; of the other 8, three
// move away, three add a provider and two change nothing.
struct SnapshotPair {
  Snapshot before;
  Snapshot after;
};
SnapshotPair incident_pair();

// Random paired snapshots around dynamo.test. When `all_measured` is set every
// site is present and measured in the later snapshot.
SnapshotPair random_pair(std::mt19937& rng, bool all_measured);

}  // namespace webdep::test
