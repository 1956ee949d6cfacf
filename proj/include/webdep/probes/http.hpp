#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "webdep/ingest/observation.hpp"

namespace webdep {

struct HttpResponse {
  int status = 0;
  std::vector<HeaderField> headers;  // in wire order, names lower-cased
  std::string body;                  // de-chunked

  // First value of a header, by lower-case name.
  const std::string* header(std::string_view name) const;
};

// Parses a raw HTTP/1.x response as read until connection close. Handles
// Content-Length, chunked transfer coding and read-until-close bodies. A body
// cut short by the reader is kept as far as it goes. Throws kParseError.
HttpResponse parse_http_response(std::span<const std::uint8_t> raw);

// Values of href= and src= attributes in document order. No HTML entity
// decoding beyond &amp;.
std::vector<std::string> extract_link_attributes(std::string_view html);

}  // namespace webdep
