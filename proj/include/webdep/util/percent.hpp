#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace webdep {

// An exact count ratio. Percentages are only materialized when formatted, so
// every report rounds from the exact value exactly once.
struct Ratio {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;

  bool defined() const noexcept { return denominator != 0; }
  double percent() const noexcept;
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

// "37.80" style: percentage with two decimals, round-half-even on the exact
// rational value. Empty optional for an empty denominator.
std::optional<std::string> format_percent(Ratio r);

// Same, but renders an undefined ratio as an empty string (CSV cells).
std::string percent_cell(Ratio r);

}  // namespace webdep
