#include "spectra_forge/csv.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "spectra_forge/core.hpp"

namespace spectra_forge {

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CsvTable::CsvTable(std::string name, std::vector<std::string> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {}

void CsvTable::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : meta_)
    if (k == key) {
      v = value;
      return;
    }
  meta_.emplace_back(key, value);
}

void CsvTable::set_unit(const std::string& column, const std::string& unit) { units_[column] = unit; }

void CsvTable::add_row(std::vector<CsvCell> row) {
  if (row.size() != columns_.size())
    throw ShapeMismatch("table " + name_ + ": row has " + std::to_string(row.size()) +
                        " cells, expected " + std::to_string(columns_.size()));
  rows_.push_back(std::move(row));
}

std::string CsvTable::header() const {
  std::ostringstream os;
  os << "# table: " << name_ << "\n";
  for (const auto& [k, v] : meta_) os << "# " << k << ": " << v << "\n";
  if (!units_.empty()) {
    os << "# units:";
    for (const auto& c : columns_) {
      auto it = units_.find(c);
      if (it != units_.end()) os << " " << c << "=" << it->second;
    }
    os << "\n";
  }
  return os.str();
}

std::string CsvTable::body() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << quote(columns_[i]);
  os << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::string>)
              os << quote(v);
            else if constexpr (std::is_same_v<T, double>)
              os << format_double(v);
            else
              os << v;
          },
          row[i]);
    }
    os << "\n";
  }
  return os.str();
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << header() << body();
  if (!out) throw Error("write failed: " + path);
}

}  // namespace spectra_forge
