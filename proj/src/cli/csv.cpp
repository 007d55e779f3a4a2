#include "lrkitaev/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lrkitaev/errors.hpp"

namespace lrk::cli {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::string name, std::vector<std::string> columns, nlohmann::json metadata)
    : name_(std::move(name)), columns_(std::move(columns)), metadata_(std::move(metadata)) {
  metadata_["table"] = name_;
  metadata_["columns"] = columns_;
}

void CsvTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw std::invalid_argument("CSV row width mismatch in " + name_);
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream out;
  out << "# " << metadata_.dump() << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              out << format_double(v);
            } else {
              out << v;
            }
          },
          row[i]);
    }
    out << '\n';
  }
  return out.str();
}

void CsvTable::write(const std::filesystem::path& path) const {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << str();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

nlohmann::json base_metadata(const nlohmann::json& config) {
  return {{"tool", "lrkitaev"},
          {"version", LRKITAEV_VERSION},
          {"units", "J = 1 sets the energy scale; delta, mu and n_exc are in these units"},
          {"config", config}};
}

CsvContents read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  CsvContents out;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw ConfigError(path.string() + ": missing metadata line");
  out.metadata = nlohmann::json::parse(line.substr(2));
  if (!std::getline(in, line)) throw ConfigError(path.string() + ": missing header row");
  out.columns = split(line);
  while (std::getline(in, line))
    if (!line.empty()) out.rows.push_back(split(line));
  return out;
}

}  // namespace lrk::cli
