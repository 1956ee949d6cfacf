#include "webdep/probes/probe_config.hpp"

#include "webdep/util/error.hpp"

namespace webdep {

void ProbeConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kConfigError, what);
  };
  require(recursive_resolver.find(':') != std::string::npos, "recursive_resolver must be host:port");
  require(dns_timeout.count() > 0 && tcp_timeout.count() > 0 && http_timeout.count() > 0,
          "timeouts must be positive");
  require(dns_attempts >= 1, "dns_attempts must be at least 1");
  require(max_inflight >= 1, "max_inflight must be at least 1");
  require(per_host_min_interval.count() >= 0, "per_host_min_interval must not be negative");
  require(max_cname_chain >= 1, "max_cname_chain must be at least 1");
  require(max_landing_links >= 1, "max_landing_links must be at least 1");
  require(max_body_bytes >= 1024, "max_body_bytes must be at least 1024");
  require(https_port != 0 && http_port != 0, "ports must be non-zero");
}

}  // namespace webdep
