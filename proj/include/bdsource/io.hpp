#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bdsource {

// Minimal CSV table: first line is the header, fields are comma-separated,
// surrounding whitespace is trimmed. Lookups are by column name so writers
// may append extra columns without breaking readers.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  // Index of a column, or -1 when absent.
  int column_index(const std::string& name) const;
  // Field access that throws ValidationError naming the offending row/column.
  const std::string& field(std::size_t row, const std::string& column) const;
  double numeric_field(std::size_t row, const std::string& column) const;
  long long integer_field(std::size_t row, const std::string& column) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const CsvTable& table);

// Writes `content` to `path` via a temporary file and an atomic rename, so a
// failed run never leaves a partial output behind.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// Formats a double with enough digits to round-trip exactly.
std::string format_double(double value);

}  // namespace bdsource
