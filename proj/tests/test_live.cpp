#include <doctest.h>

#include <chrono>

#include <fmt/format.h>

#include "cert_mint.hpp"
#include "loopback.hpp"
#include "sim_world.hpp"
#include "webdep/classify/public_suffix.hpp"
#include "webdep/probes/dns_message.hpp"
#include "webdep/probes/http.hpp"
#include "webdep/probes/live_transport.hpp"
#include "webdep/probes/prober.hpp"

using namespace webdep;
using namespace webdep::test;

namespace {

// live.test resolves to 127.0.0.1 and serves a page over both schemes, with a
// stapling certificate on the TLS listener.
SimWorld live_world() {
  SimWorld w;
  w.zone("live.test").ns = {"ns1.dynamo.test", "ns2.nsone.test"};
  w.zone("live.test").a = {"127.0.0.1"};
  w.zone("static.live.test").cname = "live.test.fastedge-cdn.test";
  w.zone("live.test.fastedge-cdn.test").a = {"127.0.0.1"};
  w.zone("big.test").truncated = true;
  w.zone("big.test").ns = {"ns1.big.test", "ns2.big.test", "ns3.big.test"};
  w.zone("silent.test").timeout = true;
  auto& srv = w.server("127.0.0.1");
  CertSpec spec;
  spec.common_name = "live.test";
  spec.ocsp_urls = {"http://ocsp.ca-one.test"};
  spec.crl_urls = {"http://crl.ca-one.test/one.crl"};
  const MintedCert cert = mint_certificate(spec);
  srv.tls.leaf_der = cert.der;
  srv.tls.ocsp_staple = fake_ocsp_response();
  srv.key_pem = cert.key_pem;
  const std::string page = http_response(
      200, {{"Server", "CloudEdge/2.1"}}, "<img src=\"https://static.live.test/logo.png\"><p>live</p>", true);
  w.add_page("https://live.test/", page);
  w.add_page("http://live.test/", page);
  return w;
}

struct LiveSetup {
  SimWorld world = live_world();
  LoopbackDns dns{world};
  LoopbackWeb plain{world, nullptr};
  LoopbackWeb secure{world, world.find_server("127.0.0.1")};
  ProbeConfig config;
  LiveSetup() {
    config.recursive_resolver = fmt::format("127.0.0.1:{}", dns.port());
    config.dns_timeout = std::chrono::milliseconds{300};
    config.dns_attempts = 2;
    config.tcp_timeout = std::chrono::milliseconds{1000};
    config.http_timeout = std::chrono::milliseconds{2000};
    config.https_port = secure.port();
    config.http_port = plain.port();
    config.per_host_min_interval = std::chrono::milliseconds{0};
  }
};

}  // namespace

TEST_CASE("live DNS over UDP") {
  LiveSetup s;
  LiveTransport t(s.config);
  const Exchange e = t.exchange(ProbeRequest::dns("live.test", RrType::kNs));
  REQUIRE(e.ok());
  const DnsMessage m = parse_dns_message(e.payload);
  CHECK(m.question == "live.test");
  REQUIRE(m.answers.size() == 2);
  CHECK(m.answers[0].data == "ns1.dynamo.test");
  CHECK(s.dns.tcp_queries() == 0);
  CHECK(e.at != Timestamp{});
}

TEST_CASE("live DNS falls back to TCP on truncation") {
  LiveSetup s;
  LiveTransport t(s.config);
  const Exchange e = t.exchange(ProbeRequest::dns("big.test", RrType::kNs));
  REQUIRE(e.ok());
  const DnsMessage m = parse_dns_message(e.payload);
  CHECK_FALSE(m.truncated);
  CHECK(m.answers.size() == 3);
  CHECK(s.dns.tcp_queries() == 1);
}

TEST_CASE("live DNS timeout") {
  LiveSetup s;
  LiveTransport t(s.config);
  const auto start = std::chrono::steady_clock::now();
  const Exchange e = t.exchange(ProbeRequest::dns("silent.test", RrType::kA));
  const auto took = std::chrono::steady_clock::now() - start;
  CHECK(e.status == ExchangeStatus::kTimeout);
  CHECK(took >= std::chrono::milliseconds{550});
  CHECK(took < std::chrono::milliseconds{3000});
}

TEST_CASE("live TCP connect outcomes") {
  LiveSetup s;
  LiveTransport t(s.config);
  CHECK(t.exchange(ProbeRequest::tcp("live.test", "127.0.0.1", s.plain.port())).ok());
  CHECK(t.exchange(ProbeRequest::tcp("live.test", "127.0.0.1", closed_port())).status == ExchangeStatus::kRefused);
}

TEST_CASE("live TLS handshake returns the leaf and the staple") {
  LiveSetup s;
  LiveTransport t(s.config);
  const Exchange e = t.exchange(ProbeRequest::tls("live.test", "127.0.0.1", s.secure.port()));
  REQUIRE(e.ok());
  const TlsHandshake h = decode_tls_handshake(e.payload);
  CHECK(h.leaf_der == s.world.find_server("127.0.0.1")->tls.leaf_der);
  CHECK(h.ocsp_staple == fake_ocsp_response());
  CHECK_FALSE(h.protocol.empty());

  // A plain listener cannot complete a handshake.
  CHECK_FALSE(t.exchange(ProbeRequest::tls("live.test", "127.0.0.1", s.plain.port())).ok());
}

TEST_CASE("live HTTP and HTTPS fetches") {
  LiveSetup s;
  LiveTransport t(s.config);
  for (const char* scheme : {"http", "https"}) {
    const std::uint16_t port = std::string_view(scheme) == "https" ? s.secure.port() : s.plain.port();
    const std::string url = fmt::format("{}://live.test/", scheme);
    const Exchange e = t.exchange(ProbeRequest::http(url, "live.test", "127.0.0.1", port));
    REQUIRE_MESSAGE(e.ok(), e.note);
    const HttpResponse r = parse_http_response(e.payload);
    CHECK(r.status == 200);
    CHECK(r.body.find("<p>live</p>") != std::string::npos);
  }
  const Exchange missing =
      t.exchange(ProbeRequest::http("http://live.test/nope", "live.test", "127.0.0.1", s.plain.port()));
  REQUIRE(missing.ok());
  CHECK(parse_http_response(missing.payload).status == 404);
}

TEST_CASE("every website probe end to end over loopback") {
  LiveSetup s;
  LiveTransport t(s.config);
  const PublicSuffixList psl;
  const ProbeContext ctx{t, s.config, psl};
  const WebsiteObservation o = probe_website(ctx, "live.test", 1);
  CHECK(o.ns.nameservers == std::vector<std::string>{"ns1.dynamo.test", "ns2.nsone.test"});
  CHECK(o.https == TriState::kYes);
  CHECK(o.certificate.ocsp_urls == std::vector<std::string>{"http://ocsp.ca-one.test"});
  CHECK(o.stapling == TriState::kYes);
  CHECK(o.cdn.fetch_status == FetchStatus::kOk);
  REQUIRE(o.cdn.chains.size() == 2);
  CHECK(o.cdn.chains[1].host == "static.live.test");
  CHECK(o.cdn.chains[1].targets == std::vector<std::string>{"live.test.fastedge-cdn.test"});
  CHECK_FALSE(validate(o, s.config.max_cname_chain).has_value());
}
