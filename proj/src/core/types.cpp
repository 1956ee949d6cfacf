#include "webdep/core/types.hpp"

#include <fmt/format.h>

namespace webdep {

std::string_view to_token(ServiceType t) noexcept {
  switch (t) {
    case ServiceType::kWebsite: return "website";
    case ServiceType::kDnsProvider: return "dns";
    case ServiceType::kCdnProvider: return "cdn";
    case ServiceType::kOcspProvider: return "ocsp";
  }
  return "?";
}

std::string_view to_string(ServiceType t) noexcept {
  switch (t) {
    case ServiceType::kWebsite: return "Website";
    case ServiceType::kDnsProvider: return "DnsProvider";
    case ServiceType::kCdnProvider: return "CdnProvider";
    case ServiceType::kOcspProvider: return "OcspProvider";
  }
  return "?";
}

std::optional<ServiceType> parse_service_type(std::string_view token) noexcept {
  for (ServiceType t : kAllServiceTypes) {
    if (token == to_token(t) || token == to_string(t)) return t;
  }
  return std::nullopt;
}

std::string to_string(const NodeKey& key) {
  return fmt::format("{}:{}", to_token(key.type), key.name);
}

}  // namespace webdep
