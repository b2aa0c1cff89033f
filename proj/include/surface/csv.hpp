#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace surface {

// Parsed CSV document with a mandatory header row. Quoted fields follow
// RFC 4180; both LF and CRLF line endings are accepted.
class CsvTable {
 public:
  static CsvTable parse(std::string_view text, std::string_view source = "csv");

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  std::optional<std::size_t> find_column(std::string_view name) const;
  // Throws ValidationError naming the source when a column is absent.
  std::size_t column(std::string_view name) const;
  void require_columns(std::initializer_list<std::string_view> names) const;

  // 1-based line on which a data row started, for diagnostics.
  std::size_t line_of(std::size_t row) const { return lines_[row]; }
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;
};

std::string csv_escape(std::string_view field);

// Appends one CSV record terminated by '\n'.
void append_csv_row(std::string& out, std::initializer_list<std::string_view> fields);
void append_csv_row(std::string& out, const std::vector<std::string>& fields);

}  // namespace surface
