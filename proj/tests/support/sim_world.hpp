#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "webdep/probes/transport.hpp"

namespace webdep::test {

// A small synthetic Internet: DNS zones, servers by address and web pages by
// URL. It answers ProbeRequests exactly as a resolver and servers would, so
// probes can run against it without a network.
class SimWorld {
 public:
  struct Zone {
    std::vector<std::string> ns;  // returned verbatim, duplicates and case included
    std::vector<std::string> a;
    std::optional<std::string> cname;
    std::optional<std::uint8_t> rcode;  // forced response code for every query
    bool timeout = false;               // the resolver never answers
    bool garbage = false;               // the answer is a malformed message
    bool truncated = false;             // UDP answers carry TC (for the loopback server)
  };

  struct Server {
    ExchangeStatus https_connect = ExchangeStatus::kOk;
    ExchangeStatus http_connect = ExchangeStatus::kOk;
    ExchangeStatus tls_status = ExchangeStatus::kOk;
    TlsHandshake tls;
    std::string key_pem;  // private key of tls.leaf_der, for real TLS servers
  };

  Zone& zone(std::string_view name);
  Server& server(std::string_view address);
  void add_page(std::string_view url, std::string raw_response);

  const Zone* find_zone(std::string_view name) const;
  const Server* find_server(std::string_view address) const;
  const std::string* find_page(std::string_view url) const;
  const std::map<std::string, Server, std::less<>>& servers() const noexcept { return servers_; }

  // Response bytes for one question, or nullopt when the resolver stays silent.
  std::optional<std::vector<std::uint8_t>> dns_answer(std::uint16_t id, std::string_view name,
                                                      RrType type, bool over_udp) const;

  // The whole exchange, timestamp excluded.
  Exchange answer(const ProbeRequest& request) const;

 private:
  std::map<std::string, Zone, std::less<>> zones_;
  std::map<std::string, Server, std::less<>> servers_;
  std::map<std::string, std::string, std::less<>> pages_;
};

// Raw HTTP/1.1 response text.
std::string http_response(int status, const std::vector<std::pair<std::string, std::string>>& headers,
                          std::string_view body, bool chunked = false);

// Transport over a SimWorld. Exchange times advance by `step` per request,
// from `base`, so a single-threaded scan is fully deterministic.
class SimTransport final : public Transport {
 public:
  explicit SimTransport(const SimWorld& world, Timestamp base = default_base(),
                        std::chrono::milliseconds step = std::chrono::milliseconds{10});

  Exchange exchange(const ProbeRequest& request) override;
  Timestamp now() override { return base_; }

  std::size_t requests() const noexcept { return count_.load(); }
  static Timestamp default_base();

 private:
  const SimWorld& world_;
  Timestamp base_;
  std::chrono::milliseconds step_;
  std::atomic<std::size_t> count_{0};
};

// Wraps a transport and records how many requests were in flight at once and
// when each connection-type request reached each host.
class InstrumentedTransport final : public Transport {
 public:
  InstrumentedTransport(Transport& inner, std::chrono::microseconds hold);

  Exchange exchange(const ProbeRequest& request) override;
  Timestamp now() override { return inner_.now(); }

  std::size_t max_inflight() const noexcept { return max_.load(); }
  // host -> steady-clock arrival times of tcp/tls/http requests.
  std::map<std::string, std::vector<std::chrono::steady_clock::time_point>> arrivals() const;

 private:
  Transport& inner_;
  std::chrono::microseconds hold_;
  std::atomic<std::size_t> current_{0};
  std::atomic<std::size_t> max_{0};
  mutable std::mutex mu_;
  std::map<std::string, std::vector<std::chrono::steady_clock::time_point>> arrivals_;
};

}  // namespace webdep::test
