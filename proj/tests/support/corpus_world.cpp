#include "corpus_world.hpp"

#include <fmt/format.h>

#include "cert_mint.hpp"

namespace webdep::test {

namespace {

enum class Dns { kDynamo, kDynamoNsone, kNsone, kCloud, kUdnsCloud, kBighost, kSelf, kNsoneUdns, kTiny, kMegacorp };

// Twenty-slot rotation; every slot covers five ranks.
constexpr Dns kDnsRotation[20] = {
    Dns::kDynamo,  Dns::kNsone,     Dns::kDynamo,  Dns::kBighost, Dns::kDynamoNsone,
    Dns::kCloud,   Dns::kNsone,     Dns::kDynamo,  Dns::kSelf,    Dns::kNsoneUdns,
    Dns::kBighost, Dns::kUdnsCloud, Dns::kDynamo,  Dns::kNsone,   Dns::kDynamoNsone,
    Dns::kCloud,   Dns::kBighost,   Dns::kNsoneUdns, Dns::kSelf,  Dns::kNsone};

enum class Cdn { kNone, kFastStatic, kCloudWww, kShieldHeader, kFastAndSwift, kCloudHeader, kMegaWww };

std::string site_name(int i) { return fmt::format("site{:03}.test", i); }
std::string address_of(int i) { return fmt::format("10.0.0.{}", i); }

std::vector<std::string> nameservers(Dns d, int i) {
  const std::string site = site_name(i);
  switch (d) {
    case Dns::kDynamo: return {"ns1.dynamo.test", "ns2.dynamo.test"};
    case Dns::kDynamoNsone: return {"ns1.dynamo.test", "ns1.nsone.test"};
    case Dns::kNsone: return {"ns1.nsone.test", "ns2.nsone.test"};
    case Dns::kCloud:
      return {fmt::format("ns-{}.clouddns-0{}.test", i, i % 4), fmt::format("ns-{}.clouddns-0{}.test", i + 1, (i + 1) % 4)};
    case Dns::kUdnsCloud: return {"pdns1.udns.test", fmt::format("ns-{}.clouddns-01.test", i)};
    case Dns::kBighost: return {"ns1.bighost.test", "ns2.bighost.test"};
    case Dns::kSelf: return {"ns1." + site, "ns2." + site};
    case Dns::kNsoneUdns: return {"ns2.nsone.test", "pdns2.udns.test"};
    case Dns::kTiny: return {"a.tinydns.test", "b.tinydns.test"};
    case Dns::kMegacorp: return {"ns1.megacorp.test", "ns2.megacorp.test"};
  }
  return {};
}

struct Ca {
  std::string ocsp;
  std::string crl;
  std::string org;
};

Ca ca_for(int i) {
  switch (i % 5) {
    case 0:
    case 2: return {"http://ocsp.ca-one.test", "http://crl.ca-one.test/one.crl", "CA One"};
    case 1:
    case 4: return {"http://ocsp.ca-two.test/", "http://crl.ca-two.test/two.crl", "CA Two"};
    default: return {"http://ocsp.ca-three.test", "http://crl.ca-three.test/main.crl", "CA Three"};
  }
}

class Builder {
 public:
  Builder() { providers(); }

  CorpusWorld finish() { return std::move(out_); }

  void site(int i) {
    const std::string name = site_name(i);
    out_.domains.push_back({static_cast<std::uint32_t>(i), name});
    if (i == 7) return;  // not registered anywhere
    auto& z = w().zone(name);
    if (i == 13) {
      z.timeout = true;
      return;
    }
    if (i == 61) {
      z.garbage = true;
      return;
    }
    if (i == 62) {
      z.rcode = rcode::kServFail;
      return;
    }

    Dns dns = kDnsRotation[(i - 1) % 20];
    if (i == 51) dns = Dns::kSelf;
    if (i == 70 || i == 71) dns = Dns::kMegacorp;
    if (i == 88 || i == 89) dns = Dns::kTiny;
    z.ns = nameservers(dns, i);
    if (i == 60) z.ns = {"ns1.nsone.test", "NS2.NSONE.TEST", "ns1.nsone.test"};
    z.a = {address_of(i)};
    w().zone("www." + name).a = {address_of(i)};
    if (dns == Dns::kSelf) {
      w().zone("ns1." + name).a = {"10.1.0.1"};
      w().zone("ns2." + name).a = {"10.1.0.2"};
    }

    auto& srv = w().server(address_of(i));
    const bool refused = (i % 7 == 3 && i != 52) || i == 30;
    const bool https = !refused && i != 31;
    if (refused) srv.https_connect = ExchangeStatus::kRefused;
    if (i == 31) srv.https_connect = ExchangeStatus::kTimeout;
    if (i == 32) srv.tls_status = ExchangeStatus::kFailed;
    if (https && i != 32) certificate(i, srv);

    Cdn cdn = static_cast<Cdn>(i % 6);
    if (i == 70 || i == 71) cdn = Cdn::kMegaWww;
    pages(i, https, cdn);
  }

 private:
  SimWorld& w() { return out_.world; }

  void providers() {
    for (const char* host : {"ocsp.ca-two.test", "ocsp.smallca.test", "crl.ca-one.test"}) {
      w().zone(host).a = {"10.100.0.2"};
    }
    w().zone("ocsp.ca-one.test").cname = "ca-one.fastedge-cdn.test";
    w().zone("ocsp.ca-three.test").cname = "ca-three.swiftcdn.test";
    w().zone("ocsp.site051.test").a = {"10.0.0.51"};

    w().zone("ca-one.test").ns = {"ns1.dynamo.test", "ns2.dynamo.test"};
    w().zone("ca-two.test").ns = {"ns1.nsone.test", "pdns1.udns.test"};
    w().zone("ca-three.test").ns = {"ns-5.clouddns-01.test", "ns-6.clouddns-02.test"};
    w().zone("smallca.test").ns = {"ns1.bighost.test"};

    w().zone("fastedge-cdn.test").ns = {"ns1.nsone.test", "ns2.nsone.test"};
    w().zone("cloudedge.test").ns = {"ns1.cloudedge.test", "ns2.cloudedge.test"};
    w().zone("swiftcdn.test").ns = {"ns1.nsone.test", "ns1.dynamo.test"};
    w().zone("megacorp-cdn.test").ns = {"ns1.megacorp.test"};

    w().zone("ca-one.fastedge-cdn.test").a = {"10.201.0.1"};
    w().zone("ca-three.swiftcdn.test").a = {"10.203.0.1"};
    for (const char* a : {"10.100.0.2", "10.201.0.1", "10.202.0.1", "10.203.0.1", "10.204.0.1"}) w().server(a);
  }

  void certificate(int i, SimWorld::Server& srv) {
    const std::string name = site_name(i);
    CertSpec spec;
    spec.common_name = name;
    Ca ca = ca_for(i);
    spec.issuer_org = ca.org;
    spec.ocsp_urls = {ca.ocsp};
    spec.crl_urls = {ca.crl};
    if (i == 50) spec.ocsp_urls = {"ldap://ocsp.ca-one.test/"};
    if (i == 51) {
      spec.ocsp_urls = {"http://ocsp.site051.test/"};
      spec.crl_urls.clear();
      spec.issuer_org = "Site 051 Internal CA";
    }
    if (i == 52) {
      spec.ocsp_urls = {"http://ocsp.ca-two.test/", "http://ocsp.ca-one.test"};
      spec.ca_issuer_urls = {"http://certs.ca-two.test/issuer.crt"};
      spec.crl_urls = {"http://crl.ca-two.test/two.crl", "http://crl.ca-one.test/one.crl"};
    }
    if (i == 89) spec.ocsp_urls = {"http://ocsp.smallca.test/"};
    const MintedCert cert = mint_certificate(spec);
    srv.tls.leaf_der = cert.der;
    srv.key_pem = cert.key_pem;
    srv.tls.protocol = "TLSv1.3";
    if (i % 3 == 0 && i != 51) srv.tls.ocsp_staple = fake_ocsp_response();
  }

  void pages(int i, bool https, Cdn cdn) {
    const std::string name = site_name(i);
    const std::string scheme = https ? "https" : "http";
    const std::string landing = fmt::format("{}://{}/", scheme, name);
    std::vector<std::pair<std::string, std::string>> headers{{"Content-Type", "text/html"}};
    std::string links = "<a href=\"/about\">About</a> <a href=\"https://partner.test/\">Partner</a>\n";
    std::string final_url = landing;

    auto redirect_to = [&](const std::string& target) {
      w().add_page(landing, http_response(301, {{"Location", target}}, ""));
      final_url = target;
    };

    switch (cdn) {
      case Cdn::kNone: break;
      case Cdn::kFastStatic:
        w().zone("static." + name).cname = name + ".fastedge-cdn.test";
        w().zone(name + ".fastedge-cdn.test").a = {"10.201.0.1"};
        links += fmt::format("<script src=\"https://static.{}/app.js\"></script>\n", name);
        break;
      case Cdn::kCloudWww:
      case Cdn::kMegaWww: {
        const std::string edge = cdn == Cdn::kCloudWww ? name + ".cloudedge.test" : name + ".megacorp-cdn.test";
        w().zone("www." + name) = SimWorld::Zone{};
        w().zone("www." + name).cname = edge;
        w().zone(edge).a = {cdn == Cdn::kCloudWww ? "10.202.0.1" : "10.204.0.1"};
        redirect_to(fmt::format("{}://www.{}/", scheme, name));
        break;
      }
      case Cdn::kShieldHeader: headers.emplace_back("X-Shield-Id", fmt::format("{:08x}", i * 2654435761u)); break;
      case Cdn::kFastAndSwift:
        w().zone("static." + name).cname = name + ".fastedge-cdn.test";
        w().zone(name + ".fastedge-cdn.test").a = {"10.201.0.1"};
        w().zone("img." + name).cname = name + ".swiftcdn.test";
        w().zone(name + ".swiftcdn.test").a = {"10.203.0.1"};
        links += fmt::format("<link rel=\"stylesheet\" href=\"//static.{0}/s.css\"><img src=\"https://img.{0}/logo.png\">\n", name);
        break;
      case Cdn::kCloudHeader: headers.emplace_back("Server", "CloudEdge/2.1"); break;
    }

    if (i == 21) {
      w().zone("static." + name).cname = "edge." + name;
      w().zone("edge." + name).cname = "static." + name;
      links += fmt::format("<script src=\"https://static.{}/loop.js\"></script>\n", name);
    }
    if (i == 22) {
      w().zone("img." + name).cname = "h1.site022-chain.test";
      for (int h = 1; h < 10; ++h) {
        w().zone(fmt::format("h{}.site022-chain.test", h)).cname = fmt::format("h{}.site022-chain.test", h + 1);
      }
      w().zone("h10.site022-chain.test").a = {"10.0.0.22"};
      links += fmt::format("<img src=\"https://img.{}/deep.png\">\n", name);
    }
    if (i == 41) redirect_to("https://elsewhere.test/landing");
    if (i == 42) {
      redirect_to(fmt::format("{}://{}/r1", scheme, name));
      for (int r = 1; r < 9; ++r) {
        w().add_page(fmt::format("{}://{}/r{}", scheme, name, r),
                     http_response(302, {{"Location", fmt::format("/r{}", r + 1)}}, ""));
      }
      return;
    }
    if (final_url.find("elsewhere.test") != std::string::npos) return;

    const std::string body = fmt::format(
        "<!doctype html>\n<html><head><title>{0}</title></head>\n<body>\n{1}</body></html>\n", name, links);
    w().add_page(final_url, http_response(200, headers, body, i % 10 == 9));
  }

  CorpusWorld out_;
};

}  // namespace

CorpusWorld make_corpus_world() {
  Builder b;
  for (int i = 1; i <= 100; ++i) b.site(i);
  return b.finish();
}

}  // namespace webdep::test
