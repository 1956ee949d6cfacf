#include "webdep/util/percent.hpp"

#include <fmt/format.h>

namespace webdep {

namespace {
__extension__ typedef unsigned __int128 u128;
}  // namespace

double Ratio::percent() const noexcept {
  if (denominator == 0) return 0.0;
  return 100.0 * static_cast<double>(numerator) / static_cast<double>(denominator);
}

std::optional<std::string> format_percent(Ratio r) {
  if (r.denominator == 0) return std::nullopt;
  // Hundredths of a percent: n * 10^4 / d.
  const u128 scaled = static_cast<u128>(r.numerator) * 10'000u;
  u128 q = scaled / r.denominator;
  const u128 rem = scaled % r.denominator;
  const u128 twice = rem * 2;
  if (twice > r.denominator || (twice == r.denominator && (q % 2) == 1)) ++q;
  const auto value = static_cast<std::uint64_t>(q);
  return fmt::format("{}.{:02}", value / 100, value % 100);
}

std::string percent_cell(Ratio r) { return format_percent(r).value_or(""); }

}  // namespace webdep
