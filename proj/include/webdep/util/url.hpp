#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace webdep {

// Absolute http(s) URL, host normalized to lower case.
struct Url {
  std::string scheme;  // "http" or "https"
  std::string host;
  std::uint16_t port = 0;  // explicit or scheme default
  std::string target = "/";  // path + query, never empty

  bool default_port() const noexcept {
    return (scheme == "http" && port == 80) || (scheme == "https" && port == 443);
  }
  std::string to_string() const;
  friend bool operator==(const Url&, const Url&) = default;
};

// Parses an absolute http/https URL. Userinfo and fragment are dropped.
// Returns nullopt for other schemes or an invalid host.
std::optional<Url> parse_url(std::string_view text);

// Resolves an href/src/Location value against `base`: absolute URLs,
// protocol-relative `//host/...`, absolute paths and relative paths.
std::optional<Url> resolve_reference(const Url& base, std::string_view reference);

}  // namespace webdep
