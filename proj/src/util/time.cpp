#include "webdep/util/time.hpp"

#include <charconv>

#include <fmt/format.h>

#include "webdep/util/error.hpp"

namespace webdep {

namespace {

using std::chrono::days;
using std::chrono::milliseconds;

// Howard Hinnant's civil-date algorithms.
constexpr long long days_from_civil(long long y, unsigned m, unsigned d) noexcept {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

struct Civil {
  long long year;
  unsigned month;
  unsigned day;
};

constexpr Civil civil_from_days(long long z) noexcept {
  z += 719468;
  const long long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long long y = static_cast<long long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2), m, d};
}

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorCode::kParseError, fmt::format("not an RFC 3339 timestamp: '{}'", text));
}

unsigned digits(std::string_view text, std::size_t pos, std::size_t n) {
  if (pos + n > text.size()) bad(text);
  unsigned value = 0;
  const auto* first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + n, value);
  if (ec != std::errc{} || ptr != first + n) bad(text);
  return value;
}

void expect(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) bad(text);
}

}  // namespace

Timestamp now_utc() {
  return std::chrono::time_point_cast<milliseconds>(std::chrono::system_clock::now());
}

std::string format_rfc3339(Timestamp ts) {
  const long long total_ms = ts.time_since_epoch().count();
  long long day = total_ms / 86'400'000;
  long long rem = total_ms % 86'400'000;
  if (rem < 0) {
    rem += 86'400'000;
    --day;
  }
  const Civil c = civil_from_days(day);
  const long long h = rem / 3'600'000;
  const long long mi = rem / 60'000 % 60;
  const long long s = rem / 1000 % 60;
  const long long ms = rem % 1000;
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}.{:03}Z", c.year, c.month, c.day,
                     h, mi, s, ms);
}

Timestamp parse_rfc3339(std::string_view text) {
  const unsigned year = digits(text, 0, 4);
  expect(text, 4, '-');
  const unsigned month = digits(text, 5, 2);
  expect(text, 7, '-');
  const unsigned day = digits(text, 8, 2);
  if (text.size() < 11 || (text[10] != 'T' && text[10] != 't')) bad(text);
  const unsigned hour = digits(text, 11, 2);
  expect(text, 13, ':');
  const unsigned minute = digits(text, 14, 2);
  expect(text, 16, ':');
  const unsigned second = digits(text, 17, 2);
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 ||
      second > 60) {
    bad(text);
  }
  std::size_t pos = 19;
  long long millis = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int scale = 100;
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      millis += (text[pos] - '0') * scale;
      scale /= 10;
      ++pos;
    }
    if (pos == start) bad(text);
  }
  long long offset_minutes = 0;
  if (pos < text.size() && (text[pos] == 'Z' || text[pos] == 'z')) {
    ++pos;
  } else if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    const int sign = text[pos] == '-' ? -1 : 1;
    const unsigned oh = digits(text, pos + 1, 2);
    expect(text, pos + 3, ':');
    const unsigned om = digits(text, pos + 4, 2);
    offset_minutes = sign * static_cast<long long>(oh * 60 + om);
    pos += 6;
  } else {
    bad(text);
  }
  if (pos != text.size()) bad(text);
  const long long day_count = days_from_civil(year, month, day);
  const long long ms = ((day_count * 24 + hour) * 60 + minute - offset_minutes) * 60'000 +
                       second * 1000LL + millis;
  return Timestamp{milliseconds{ms}};
}

}  // namespace webdep
