#include "webdep/util/url.hpp"

#include <charconv>

#include <fmt/format.h>

#include "webdep/util/hostname.hpp"

namespace webdep {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && static_cast<unsigned char>(s.front()) <= ' ') s.remove_prefix(1);
  while (!s.empty() && static_cast<unsigned char>(s.back()) <= ' ') s.remove_suffix(1);
  return s;
}

}  // namespace

std::string Url::to_string() const {
  if (default_port()) return fmt::format("{}://{}{}", scheme, host, target);
  return fmt::format("{}://{}:{}{}", scheme, host, port, target);
}

std::optional<Url> parse_url(std::string_view text) {
  text = trim(text);
  const auto sep = text.find("://");
  if (sep == std::string_view::npos) return std::nullopt;
  Url url;
  url.scheme = ascii_lower(text.substr(0, sep));
  if (url.scheme != "http" && url.scheme != "https") return std::nullopt;
  std::string_view rest = text.substr(sep + 3);
  const auto authority_end = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, authority_end);
  std::string_view tail =
      authority_end == std::string_view::npos ? std::string_view{} : rest.substr(authority_end);
  if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
    authority.remove_prefix(at + 1);
  }
  url.port = url.scheme == "https" ? 443 : 80;
  if (const auto colon = authority.rfind(':'); colon != std::string_view::npos) {
    const auto port_text = authority.substr(colon + 1);
    authority = authority.substr(0, colon);
    if (!port_text.empty()) {
      unsigned value = 0;
      auto [p, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), value);
      if (ec != std::errc{} || p != port_text.data() + port_text.size() || value == 0 ||
          value > 65535) {
        return std::nullopt;
      }
      url.port = static_cast<std::uint16_t>(value);
    }
  }
  url.host = normalize_hostname(authority);
  if (!is_valid_hostname(url.host)) return std::nullopt;
  if (const auto hash = tail.find('#'); hash != std::string_view::npos) tail = tail.substr(0, hash);
  if (tail.empty()) {
    url.target = "/";
  } else if (tail.front() == '?') {
    url.target = fmt::format("/{}", tail);
  } else {
    url.target = std::string(tail);
  }
  return url;
}

std::optional<Url> resolve_reference(const Url& base, std::string_view reference) {
  reference = trim(reference);
  if (reference.empty()) return base;
  if (reference.starts_with("//")) return parse_url(fmt::format("{}:{}", base.scheme, reference));
  if (reference.find("://") != std::string_view::npos) return parse_url(reference);
  const auto colon = reference.find(':');
  const auto slash = reference.find('/');
  if (colon != std::string_view::npos && (slash == std::string_view::npos || colon < slash)) {
    return std::nullopt;  // mailto:, javascript:, data: ...
  }
  Url out = base;
  if (const auto hash = reference.find('#'); hash != std::string_view::npos) {
    reference = reference.substr(0, hash);
  }
  if (reference.empty()) return out;
  if (reference.front() == '/') {
    out.target = std::string(reference);
  } else if (reference.front() == '?') {
    const auto q = base.target.find('?');
    out.target = fmt::format("{}{}", base.target.substr(0, q), reference);
  } else {
    auto dir = base.target.substr(0, base.target.find('?'));
    dir = dir.substr(0, dir.rfind('/') + 1);
    out.target = fmt::format("{}{}", dir.empty() ? "/" : dir, reference);
  }
  return out;
}

}  // namespace webdep
