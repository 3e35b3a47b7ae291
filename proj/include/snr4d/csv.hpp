#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "snr4d/errors.hpp"

namespace snr4d {

// Fixed-format rendering so identical values always serialize to identical
// bytes; CSV bodies are part of the determinism contract.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace detail {

inline std::string csv_cell(double v) { return format_number(v); }
inline std::string csv_cell(int v) { return std::to_string(v); }
inline std::string csv_cell(long v) { return std::to_string(v); }
inline std::string csv_cell(unsigned long v) { return std::to_string(v); }
inline std::string csv_cell(const char* v) { return v; }
inline std::string csv_cell(std::string v) { return v; }

}  // namespace detail

// A CSV file with a '#'-prefixed metadata block, a header row, and data
// rows. Rendering is deterministic in field order and number format.
class CsvDocument {
 public:
  void add_metadata(std::string key, std::string value) {
    metadata_.emplace_back(std::move(key), std::move(value));
  }

  void set_columns(std::vector<std::string> columns) { columns_ = std::move(columns); }

  template <typename... Cells>
  void add_row(Cells&&... cells) {
    std::vector<std::string> row{detail::csv_cell(std::forward<Cells>(cells))...};
    if (!columns_.empty() && row.size() != columns_.size())
      throw ConfigError("csv row width does not match header");
    rows_.push_back(std::move(row));
  }

  std::string to_string() const {
    std::string out;
    for (const auto& [k, v] : metadata_) out += "# " + k + ": " + v + "\n";
    out += join(columns_);
    for (const auto& row : rows_) out += join(row);
    return out;
  }

  void write_file(const std::filesystem::path& path) const {
    std::ofstream of(path, std::ios::binary);
    if (!of) throw ConfigError("cannot write " + path.string());
    of << to_string();
  }

  std::size_t row_count() const { return rows_.size(); }

 private:
  static std::string join(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line += ',';
      line += cells[i];
    }
    line += '\n';
    return line;
  }

  std::vector<std::pair<std::string, std::string>> metadata_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace snr4d
