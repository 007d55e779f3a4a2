#include "lrkitaev/cli/manifest.hpp"

#include <fstream>

namespace lrk::cli {

Manifest::Manifest(const std::filesystem::path& dir, nlohmann::json config) : path_(dir / "manifest.json") {
  std::filesystem::create_directories(dir);
  data_ = {{"config", std::move(config)}, {"completed", nlohmann::json::object()}, {"failed", nlohmann::json::object()}};
  std::ifstream in(path_);
  if (!in) return;
  try {
    auto old = nlohmann::json::parse(in);
    if (old.value("config", nlohmann::json()) == data_["config"] && old.contains("completed")) {
      data_["completed"] = old["completed"];
      if (old.contains("failed")) data_["failed"] = old["failed"];
      resumed_ = !data_["completed"].empty();
    }
  } catch (const nlohmann::json::exception&) {
    // Unreadable manifest: start over.
  }
}

std::optional<nlohmann::json> Manifest::completed(const std::string& key) const {
  std::lock_guard lock(mutex_);
  const auto& done = data_["completed"];
  if (auto it = done.find(key); it != done.end()) return *it;
  return std::nullopt;
}

void Manifest::mark_completed(const std::string& key, nlohmann::json summary) {
  std::lock_guard lock(mutex_);
  data_["completed"][key] = std::move(summary);
  data_["failed"].erase(key);
  save_locked();
}

void Manifest::mark_failed(const std::string& key, const std::string& message) {
  std::lock_guard lock(mutex_);
  data_["failed"][key] = message;
  save_locked();
}

std::size_t Manifest::completed_count() const {
  std::lock_guard lock(mutex_);
  return data_["completed"].size();
}

std::size_t Manifest::failed_count() const {
  std::lock_guard lock(mutex_);
  return data_["failed"].size();
}

void Manifest::save_locked() const {
  auto tmp = path_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << data_.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path_);
}

}  // namespace lrk::cli
