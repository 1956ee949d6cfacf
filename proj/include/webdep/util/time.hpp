#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace webdep {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

Timestamp now_utc();

// RFC 3339 UTC with millisecond precision, e.g. 2026-01-01T00:00:00.000Z.
std::string format_rfc3339(Timestamp ts);

// Accepts the format above, with or without fractional seconds, and a numeric
// offset in place of `Z`. Throws Error(kParseError).
Timestamp parse_rfc3339(std::string_view text);

}  // namespace webdep
