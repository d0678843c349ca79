#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace spectra_forge {

using CsvCell = std::variant<std::string, double, long long>;

/// Table written as `#`-prefixed header lines, a column row, then data.
/// Doubles use 17 significant digits; the body depends only on the cells.
class CsvTable {
 public:
  CsvTable(std::string name, std::vector<std::string> columns);

  void set_meta(const std::string& key, const std::string& value);
  void set_unit(const std::string& column, const std::string& unit);
  void add_row(std::vector<CsvCell> row);

  const std::string& name() const { return name_; }
  std::size_t rows() const { return rows_.size(); }

  std::string header() const;
  std::string body() const;
  /// Writes header + body to path; throws Error on I/O failure.
  void write(const std::string& path) const;

 private:
  std::string name_;
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::map<std::string, std::string> units_;
  std::vector<std::vector<CsvCell>> rows_;
};

std::string format_double(double v);
/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace spectra_forge
