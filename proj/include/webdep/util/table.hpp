#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace webdep {

// A small report table that renders as CSV or as a JSON array of objects.
// Integer columns become JSON numbers; text and percentage columns stay
// strings so the two-decimal formatting survives. Empty cells become null.
class Table {
 public:
  enum class Kind : std::uint8_t { kText, kInteger, kPercent };
  struct Column {
    std::string name;
    Kind kind = Kind::kText;
  };

  explicit Table(std::vector<Column> columns) : columns_(std::move(columns)) {}

  // Throws kInvalidArgument when the width does not match.
  void add_row(std::vector<std::string> cells);

  const std::vector<Column>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string csv_escape(const std::string& cell);

}  // namespace webdep
