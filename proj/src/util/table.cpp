#include "webdep/util/table.hpp"

#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "webdep/util/error.hpp"

namespace webdep {

void Table::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("row has {} cells, table has {} columns", cells.size(), columns_.size()));
  }
  rows_.push_back(std::move(cells));
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void Table::write_csv(std::ostream& out) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << csv_escape(columns_[i].name);
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(row[i]);
    out << '\n';
  }
}

void Table::write_json(std::ostream& out) const {
  using nlohmann::ordered_json;
  ordered_json doc = ordered_json::array();
  for (const auto& row : rows_) {
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& cell = row[i];
      if (cell.empty()) {
        obj[columns_[i].name] = nullptr;
      } else if (columns_[i].kind == Kind::kInteger) {
        obj[columns_[i].name] = std::stoull(cell);
      } else {
        obj[columns_[i].name] = cell;
      }
    }
    doc.push_back(std::move(obj));
  }
  out << doc.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
}

}  // namespace webdep
