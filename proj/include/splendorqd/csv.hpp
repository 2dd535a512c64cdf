#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sqd::csv {

using Row = std::vector<std::string>;

/// Comma-separated with double-quote escaping. Fields containing commas,
/// quotes or newlines are quoted on write.
std::string format_row(const Row& row);
void write(std::ostream& out, const Row& header, const std::vector<Row>& rows);

struct Table {
  Row header;
  std::vector<Row> rows;

  /// Column index by name; throws std::runtime_error when absent.
  std::size_t column(const std::string& name) const;
};

/// Throws std::runtime_error on unterminated quotes or ragged rows.
Table read(std::istream& in);
Table read_file(const std::string& path);
void write_file(const std::string& path, const Row& header, const std::vector<Row>& rows);

}  // namespace sqd::csv
