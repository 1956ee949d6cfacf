#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace webdep {

// Declaration order is the canonical ordering used for nodes, exports and
// reports.
enum class ServiceType : std::uint8_t { kWebsite, kDnsProvider, kCdnProvider, kOcspProvider };

inline constexpr std::array<ServiceType, 4> kAllServiceTypes{
    ServiceType::kWebsite, ServiceType::kDnsProvider, ServiceType::kCdnProvider,
    ServiceType::kOcspProvider};

inline constexpr std::array<ServiceType, 3> kProviderTypes{
    ServiceType::kDnsProvider, ServiceType::kCdnProvider, ServiceType::kOcspProvider};

inline constexpr std::size_t kServiceTypeCount = kAllServiceTypes.size();

constexpr std::size_t index_of(ServiceType t) noexcept { return static_cast<std::size_t>(t); }

// Tokens used in text formats and on the command line: website, dns, cdn, ocsp.
std::string_view to_token(ServiceType t) noexcept;
// Human label: Website, DnsProvider, ...
std::string_view to_string(ServiceType t) noexcept;
std::optional<ServiceType> parse_service_type(std::string_view token) noexcept;

// The five edge directions that occur in practice:
// Website -> {DNS, CDN, OCSP}, CDN -> DNS, OCSP -> {DNS, CDN}.
constexpr bool is_permitted_edge(ServiceType source, ServiceType target) noexcept {
  switch (source) {
    case ServiceType::kWebsite: return target != ServiceType::kWebsite;
    case ServiceType::kCdnProvider: return target == ServiceType::kDnsProvider;
    case ServiceType::kOcspProvider:
      return target == ServiceType::kDnsProvider || target == ServiceType::kCdnProvider;
    case ServiceType::kDnsProvider: return false;
  }
  return false;
}

struct NodeKey {
  ServiceType type = ServiceType::kWebsite;
  std::string name;

  friend auto operator<=>(const NodeKey&, const NodeKey&) = default;
  friend bool operator==(const NodeKey&, const NodeKey&) = default;
};

// "dns:cloudflare.com" style rendering used in diagnostics and CLI arguments.
std::string to_string(const NodeKey& key);

}  // namespace webdep
