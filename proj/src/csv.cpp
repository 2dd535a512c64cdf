#include "splendorqd/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sqd::csv {

namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string format_row(const Row& row) {
  std::string line;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) line += ',';
    line += quote(row[i]);
  }
  return line;
}

void write(std::ostream& out, const Row& header, const std::vector<Row>& rows) {
  out << format_row(header) << '\n';
  for (const Row& row : rows) out << format_row(row) << '\n';
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw std::runtime_error("csv: missing column '" + name + "'");
}

Table read(std::istream& in) {
  std::vector<Row> records;
  Row row;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw std::runtime_error("csv: unterminated quoted field");
  if (any) {
    row.push_back(std::move(field));
    records.push_back(std::move(row));
  }
  Table table;
  if (records.empty()) return table;
  table.header = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() == 1 && records[i][0].empty()) continue;
    if (records[i].size() != table.header.size())
      throw std::runtime_error("csv: row " + std::to_string(i) + " has " + std::to_string(records[i].size()) +
                               " fields, header has " + std::to_string(table.header.size()));
    table.rows.push_back(std::move(records[i]));
  }
  return table;
}

Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open " + path);
  return read(in);
}

void write_file(const std::string& path, const Row& header, const std::vector<Row>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("csv: cannot write " + path);
  write(out, header, rows);
  if (!out) throw std::runtime_error("csv: write failed for " + path);
}

}  // namespace sqd::csv
