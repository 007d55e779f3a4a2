#pragma once

// Progress record of a sweep, kept as manifest.json in the output directory.
// A rerun with the same resolved config skips cells already completed.

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

#include "json.hpp"

namespace lrk::cli {

class Manifest {
 public:
  /// Loads dir/manifest.json if it was written for the same config;
  /// otherwise starts empty. Creates the directory.
  Manifest(const std::filesystem::path& dir, nlohmann::json config);

  std::optional<nlohmann::json> completed(const std::string& key) const;
  void mark_completed(const std::string& key, nlohmann::json summary);
  void mark_failed(const std::string& key, const std::string& message);

  std::size_t completed_count() const;
  std::size_t failed_count() const;
  bool resumed() const noexcept { return resumed_; }

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  void save_locked() const;

  std::filesystem::path path_;
  nlohmann::json data_;
  bool resumed_ = false;
  mutable std::mutex mutex_;
};

}  // namespace lrk::cli
