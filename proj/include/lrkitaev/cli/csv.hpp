#pragma once

// CSV tables with a one-line JSON metadata header:
//
//   # {"table": ..., "columns": [...], "config": {...}, ...}
//   k,p_k_numeric,...
//   0.001,0.73,...

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace lrk::cli {

using Cell = std::variant<double, long long, std::string>;

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double x);

class CsvTable {
 public:
  CsvTable(std::string name, std::vector<std::string> columns, nlohmann::json metadata);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t rows() const noexcept { return rows_.size(); }

  /// Throws std::invalid_argument if the row width does not match.
  void add_row(std::vector<Cell> row);

  std::string str() const;

  /// Writes atomically (temporary file, then rename).
  void write(const std::filesystem::path& path) const;

 private:
  std::string name_;
  std::vector<std::string> columns_;
  nlohmann::json metadata_;
  std::vector<std::vector<Cell>> rows_;
};

/// Metadata common to every output: tool, version, units, resolved config.
nlohmann::json base_metadata(const nlohmann::json& config);

/// Reads back a table written by CsvTable: metadata and string cells.
struct CsvContents {
  nlohmann::json metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};
CsvContents read_csv(const std::filesystem::path& path);

}  // namespace lrk::cli
