#include "surface/csv.hpp"

#include <fmt/format.h>

#include "surface/error.hpp"

namespace surface {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : ValidationError(fmt::format("{}:{}: {}", line, column, message)), line_(line), column_(column) {}

namespace {

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

std::vector<Record> split_records(std::string_view text, std::string_view source) {
  std::vector<Record> records;
  Record current;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t column = 0;
  current.line = 1;

  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // A lone empty field is a blank line; skip it.
    if (!(current.fields.size() == 1 && current.fields[0].empty())) {
      records.push_back(std::move(current));
    }
    current = Record{};
    current.line = line;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    ++column;
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') {
          ++line;
          column = 0;
        }
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started || !field.empty()) {
          throw ParseError(fmt::format("{}: stray quote inside unquoted field", source), line, column);
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        field.push_back(c);
        break;
      case '\n':
        ++line;
        column = 0;
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) {
    throw ParseError(fmt::format("{}: unterminated quoted field", source), line, column);
  }
  if (!field.empty() || field_started || !current.fields.empty()) end_record();
  return records;
}

}  // namespace

CsvTable CsvTable::parse(std::string_view text, std::string_view source) {
  CsvTable table;
  table.source_ = std::string(source);
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  auto records = split_records(text, source);
  if (records.empty()) {
    throw ValidationError(fmt::format("{}: missing header row", source));
  }
  table.header_ = std::move(records.front().fields);
  for (std::size_t i = 0; i < table.header_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (table.header_[i] == table.header_[j]) {
        throw ValidationError(fmt::format("{}: duplicate column '{}'", source, table.header_[i]));
      }
    }
  }
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].fields.size() != table.header_.size()) {
      throw ParseError(fmt::format("{}: expected {} fields, found {}", source, table.header_.size(),
                                   records[r].fields.size()),
                       records[r].line, 1);
    }
    table.lines_.push_back(records[r].line);
    table.rows_.push_back(std::move(records[r].fields));
  }
  return table;
}

std::optional<std::size_t> CsvTable::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t CsvTable::column(std::string_view name) const {
  if (auto i = find_column(name)) return *i;
  throw ValidationError(fmt::format("{}: missing required column '{}'", source_, name));
}

void CsvTable::require_columns(std::initializer_list<std::string_view> names) const {
  for (auto name : names) (void)column(name);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void append_csv_row(std::string& out, std::initializer_list<std::string_view> fields) {
  bool first = true;
  for (auto f : fields) {
    if (!first) out.push_back(',');
    out += csv_escape(f);
    first = false;
  }
  out.push_back('\n');
}

void append_csv_row(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += csv_escape(fields[i]);
  }
  out.push_back('\n');
}

}  // namespace surface
