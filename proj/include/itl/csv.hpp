#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace itl::csv {

struct Row {
  std::size_t line_number = 0;  // 1-based line in the file
  std::vector<std::string> fields;
};

/// Comma-separated table with a required header. Fields may be quoted with
/// double quotes; surrounding whitespace of unquoted fields is trimmed.
struct Table {
  std::filesystem::path source;
  std::vector<std::string> header;
  std::vector<Row> rows;

  /// Column position; throws ParseError if the header lacks it.
  std::size_t column(std::string_view name) const;

  /// Throws ParseError naming file, row and column.
  [[noreturn]] void fail(const Row& row, std::string_view column, const std::string& message) const;

  std::optional<double> optional_number(const Row& row, std::size_t col) const;
  double number(const Row& row, std::size_t col) const;
};

Table read(const std::filesystem::path& path);
Table parse(std::string_view text, const std::filesystem::path& source = "<memory>");

std::vector<std::string> split_line(std::string_view line);

/// Quotes a field if it contains a comma, quote or newline.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Fixed-point text with `decimals` digits; negative zero prints as zero.
std::string fixed(double value, int decimals);

/// Shortest text that reads back to the same double.
std::string exact(double value);

}  // namespace itl::csv
