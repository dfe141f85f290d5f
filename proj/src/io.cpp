#include "bdsource/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "bdsource/error.hpp"

namespace bdsource {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

int CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

const std::string& CsvTable::field(std::size_t row, const std::string& column) const {
  int col = column_index(column);
  if (col < 0) {
    throw ValidationError("csv: missing required column '" + column + "'");
  }
  if (row >= rows.size() || static_cast<std::size_t>(col) >= rows[row].size()) {
    throw ValidationError("csv: row " + std::to_string(row + 1) +
                          " has no value for column '" + column + "'");
  }
  return rows[row][static_cast<std::size_t>(col)];
}

double CsvTable::numeric_field(std::size_t row, const std::string& column) const {
  const std::string& s = field(row, column);
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("csv: row " + std::to_string(row + 1) + ", column '" +
                          column + "': not a number: '" + s + "'");
  }
}

long long CsvTable::integer_field(std::size_t row, const std::string& column) const {
  const std::string& s = field(row, column);
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("csv: row " + std::to_string(row + 1) + ", column '" +
                          column + "': not an integer: '" + s + "'");
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (!have_header) {
      table.columns = split_fields(line);
      have_header = true;
    } else {
      auto fields = split_fields(line);
      if (fields.size() != table.columns.size()) {
        throw ValidationError("csv: row " + std::to_string(table.rows.size() + 1) +
                              " has " + std::to_string(fields.size()) +
                              " fields, expected " + std::to_string(table.columns.size()));
      }
      table.rows.push_back(std::move(fields));
    }
  }
  if (!have_header) throw ValidationError("csv: empty input, header line required");
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  return read_csv(in);
}

void write_csv(std::ostream& out, const CsvTable& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << row[i];
    }
    out << "\n";
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open for writing: " + tmp);
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw ValidationError("write failed: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw ValidationError("rename failed for " + path + ": " + std::strerror(errno));
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace bdsource
