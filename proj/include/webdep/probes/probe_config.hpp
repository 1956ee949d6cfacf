#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace webdep {

struct ProbeConfig {
  // host:port of the recursive resolver all DNS queries go to.
  std::string recursive_resolver = "8.8.8.8:53";
  std::chrono::milliseconds dns_timeout{2000};
  std::uint32_t dns_attempts = 2;  // UDP tries before giving up
  std::chrono::milliseconds tcp_timeout{3000};
  std::chrono::milliseconds http_timeout{5000};
  std::uint32_t max_inflight = 16;
  // Minimum gap between two connections to the same server.
  std::chrono::milliseconds per_host_min_interval{250};
  std::uint32_t max_cname_chain = 8;
  std::uint32_t max_landing_links = 50;
  std::uint32_t max_redirects = 5;
  std::uint32_t max_body_bytes = 1 << 20;
  std::string user_agent = "webdep/1.0 (dependency measurement)";
  std::uint16_t https_port = 443;
  std::uint16_t http_port = 80;

  // Throws kConfigError.
  void validate() const;
};

}  // namespace webdep
