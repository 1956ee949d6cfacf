#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace webdep {

std::string ascii_lower(std::string_view text);
// Case-insensitive ASCII substring test.
bool icontains(std::string_view haystack, std::string_view needle) noexcept;

// Lower-cases ASCII and strips one trailing dot. Does not validate.
std::string normalize_hostname(std::string_view host);

// LDH hostname check: 1..253 octets, labels 1..63 octets of [a-z0-9-_],
// no leading/trailing hyphen. Underscore is tolerated because it shows up in
// real CNAME targets. Expects a normalized name.
bool is_valid_hostname(std::string_view host) noexcept;

std::vector<std::string_view> split_labels(std::string_view host);

// True when `host` equals `domain` or is a subdomain of it.
bool is_same_or_subdomain(std::string_view host, std::string_view domain) noexcept;

}  // namespace webdep
