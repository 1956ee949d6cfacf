#include <doctest.h>

#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "equivalence.hpp"
#include "fixtures.hpp"
#include "pipeline.hpp"
#include "webdep/classify/build_graph.hpp"
#include "webdep/classify/classify.hpp"
#include "webdep/ingest/snapshot.hpp"
#include "webdep/util/error.hpp"
#include "webdep/whatif/collateral.hpp"
#include "webdep/whatif/diff.hpp"
#include "webdep/whatif/failure.hpp"
#include "webdep/whatif/report.hpp"

using namespace webdep;
using namespace webdep::test;

namespace {

NodeId id(const DependencyGraph& g, ServiceType t, std::string_view name) {
  const auto v = g.find(name, t);
  REQUIRE(v.has_value());
  return *v;
}

std::vector<std::string> names(const DependencyGraph& g, const std::vector<NodeId>& ids) {
  std::vector<std::string> out;
  for (NodeId v : ids) out.push_back(g.node(v).name);
  return out;
}

std::string csv(const Table& t) {
  std::ostringstream out;
  t.write_csv(out);
  return out.str();
}

}  // namespace

TEST_CASE("failure cascades through an exclusive OCSP responder") {
  const DependencyGraph g = ocsp_chain_graph();
  const NodeId dns1 = id(g, ServiceType::kDnsProvider, "DNS_1");
  const FailureResult r = simulate_failure(g, {dns1});
  CHECK(names(g, r.failed) ==
        std::vector<std::string>{"example1.com", "example2.com", "example3.com", "DNS_1", "OCSP_1"});
  CHECK(names(g, r.affected_websites) ==
        std::vector<std::string>{"example1.com", "example2.com", "example3.com"});
  CHECK(r.affected_count() == 3);
  CHECK(r.removed == std::vector<NodeId>{dns1});

  const FailureResult none = simulate_failure(g, {});
  CHECK(none.failed.empty());

  CHECK_THROWS_AS(simulate_failure(g, {id(g, ServiceType::kWebsite, "example1.com")}), Error);
  CHECK_THROWS_AS(simulate_failure(g, {999}), Error);
}

TEST_CASE("a redundant provider type does not fail with one provider") {
  const DependencyGraph g = redundant_dns_graph();
  const FailureResult r = simulate_failure(g, {id(g, ServiceType::kDnsProvider, "DNS_1")});
  CHECK(r.affected_websites.empty());
  const FailureResult both = simulate_failure(
      g, {id(g, ServiceType::kDnsProvider, "DNS_1"), id(g, ServiceType::kDnsProvider, "DNS_2")});
  CHECK(both.affected_count() == 1);
}

TEST_CASE("failure JSON") {
  const DependencyGraph g = ocsp_chain_graph();
  std::ostringstream out;
  write_failure_json(g, simulate_failure(g, {id(g, ServiceType::kDnsProvider, "DNS_1")}), out);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["removed"] == nlohmann::json::array({"dns:DNS_1"}));
  CHECK(j["affected_count"] == 3);
  CHECK(j["websites"] == 4);
  CHECK(j["failed"].size() == 5);
}

TEST_CASE("resolving provider names") {
  const DependencyGraph g = ocsp_chain_graph();
  CHECK(resolve_providers(g, {"DNS_1"}) == std::vector<NodeId>{id(g, ServiceType::kDnsProvider, "DNS_1")});
  CHECK(resolve_providers(g, {"ocsp:OCSP_2"}) == std::vector<NodeId>{id(g, ServiceType::kOcspProvider, "OCSP_2")});
  CHECK_THROWS_AS(resolve_providers(g, {"cdn:DNS_1"}), Error);
  CHECK_THROWS_AS(resolve_providers(g, {"nobody"}), Error);
  CHECK_THROWS_AS(resolve_providers(g, {"example1.com"}), Error);
}

TEST_CASE("failure propagation properties on random graphs") {
  std::mt19937 rng(7);
  for (int i = 0; i < 1000; ++i) {
    RandomGraphOptions opt;
    opt.all_exclusive = i % 2 == 1;
    const DependencyGraph g = random_graph(rng, opt);
    const auto bad = failure_property_violations(g, rng, opt.all_exclusive);
    if (!bad.empty()) {
      FAIL_CHECK(bad.front());
      break;
    }
  }
}

TEST_CASE("collateral damage of the amplification example") {
  const DependencyGraph g = amplification_graph();
  const GraphExclusivity view(g);
  const CollateralEntry direct = collateral_damage(g, view, id(g, ServiceType::kWebsite, "direct1.test"));
  REQUIRE(direct.vectors.size() == 1);
  CHECK(direct.vectors[0].vector == AttackVector::kWebsiteDns);
  CHECK(direct.vectors[0].damage == 22);
  CHECK(direct.max_damage == 22);
  CHECK(direct.argmax == AttackVector::kWebsiteDns);

  const CollateralEntry via = collateral_damage(g, view, id(g, ServiceType::kWebsite, "via-ocsp01.test"));
  REQUIRE(via.vectors.size() == 3);
  CHECK(via.vectors[0].vector == AttackVector::kWebsiteDns);
  CHECK(via.vectors[0].damage == 20);
  CHECK(via.vectors[1].vector == AttackVector::kWebsiteOcsp);
  CHECK(via.vectors[1].damage == 20);
  CHECK(via.vectors[2].vector == AttackVector::kOcspDns);
  CHECK(via.vectors[2].damage == 22);
  CHECK(via.argmax == AttackVector::kOcspDns);

  const auto report = collateral_report(g, view);
  REQUIRE(report.size() == 22);
  CHECK(report.front().max_damage == 22);
  CHECK(g.node(report.front().website).name == "direct1.test");

  const CollateralHistogram h = collateral_rank_histogram(g, report, 10, 5);
  CHECK(h.levels == std::vector<std::uint64_t>{22});
  CHECK(h.counts == std::vector<std::vector<std::uint64_t>>{{10, 10, 2}});
  CHECK(csv(histogram_table(h)) ==
        "damage,bucket,first_rank,last_rank,websites\n"
        "22,1,1,10,10\n"
        "22,2,11,20,10\n"
        "22,3,21,30,2\n");
  CHECK_THROWS_AS(collateral_rank_histogram(g, report, 0, 5), Error);
}

TEST_CASE("a website without exclusive dependencies has damage one") {
  const DependencyGraph g = redundant_dns_graph();
  const GraphExclusivity view(g);
  const CollateralEntry e = collateral_damage(g, view, id(g, ServiceType::kWebsite, "example.com"));
  REQUIRE(e.vectors.size() == 1);
  CHECK(e.vectors[0].vector == AttackVector::kWebsiteCdn);
  CHECK(e.max_damage == 1);

  DependencyGraph::Builder b;
  b.add_website("lonely.test", 1);
  const DependencyGraph lonely = b.build();
  const CollateralEntry l = collateral_damage(lonely, GraphExclusivity(lonely), 0);
  CHECK(l.vectors.empty());
  CHECK(l.max_damage == 1);
  CHECK_FALSE(l.argmax.has_value());
  CHECK_THROWS_AS(collateral_damage(g, view, id(g, ServiceType::kCdnProvider, "CDN_A")), Error);
}

TEST_CASE("attack vector tokens") {
  CHECK(to_token(AttackVector::kWebsiteDns) == "ws-dns");
  CHECK(to_token(AttackVector::kOcspCdn) == "ocsp-cdn");
  for (AttackVector v : kAllVectors) CHECK_FALSE(threat_of(v).empty());
}

TEST_CASE("collateral agrees with brute force on random graphs") {
  std::mt19937 rng(99);
  for (int i = 0; i < 1000; ++i) {
    const DependencyGraph g = random_graph(rng);
    const auto bad = collateral_mismatches(g, rng);
    if (!bad.empty()) {
      FAIL_CHECK(bad.front());
      break;
    }
  }
}

TEST_CASE("the DNS incident fixture") {
  const SnapshotPair pair = incident_pair();
  DiffReport r;
  const auto bad = diff_violations(pair, "dynamo.test", &r);
  for (const auto& b : bad) FAIL_CHECK(b);
  CHECK(r.total_before.size() == 19);
  CHECK(r.robust_before.size() == 11);
  CHECK(r.affected.size() == 8);
  CHECK(r.left.size() == 3);
  CHECK(r.became_robust.size() == 3);
  CHECK(r.did_nothing.size() == 2);
  CHECK(r.unmeasured.empty());
  CHECK(r.left_to_private.empty());

  std::ostringstream out;
  write_diff_report(r, out);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["total_before"]["count"] == 19);
  CHECK(j["did_nothing"]["websites"].size() == 2);
}

TEST_CASE("the shipped incident snapshots match the fixture") {
  const SnapshotPair pair = incident_pair();
  const Snapshot before = load_snapshot(fixtures_dir() / "incident_before.jsonl");
  const Snapshot after = load_snapshot(fixtures_dir() / "incident_after.jsonl");
  CHECK(before == pair.before);
  CHECK(after == pair.after);
}

TEST_CASE("an unchanged snapshot leaves every affected site in place") {
  SnapshotPair pair = incident_pair();
  pair.after = pair.before;
  DiffReport r;
  CHECK(diff_violations(pair, "dynamo.test", &r).empty());
  CHECK(r.did_nothing == r.affected);
  CHECK(r.left.empty());
  CHECK(r.became_robust.empty());
}

TEST_CASE("a provider nobody used is rejected") {
  const SnapshotPair pair = incident_pair();
  const ClassificationConfig cfg = fixture_classification_config();
  const DependencyGraph before = build_graph(pair.before, classify(pair.before, cfg));
  try {
    (void)snapshot_diff(before, pair.after, classify(pair.after, cfg), "udns-nope.test");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kProviderAbsentBefore);
  }
}

TEST_CASE("diff agrees with the literal definition on random snapshot pairs") {
  std::mt19937 rng(31337);
  std::size_t unmeasured = 0;
  for (int i = 0; i < 500; ++i) {
    const SnapshotPair pair = random_pair(rng, i % 2 == 0);
    DiffReport r;
    const auto bad = diff_violations(pair, "dynamo.test", &r);
    if (!bad.empty()) {
      FAIL_CHECK(bad.front());
      break;
    }
    if (i % 2 == 0) CHECK(r.unmeasured.empty());
    unmeasured += r.unmeasured.size();
  }
  CHECK(unmeasured > 0);
}
