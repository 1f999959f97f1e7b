#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gwsurr {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

// Writes `<artifact>.prov.json` recording the command, version, seed, the
// resolved config and the hash of every input artifact. Content is fully
// deterministic (no timestamps) so identical runs produce identical bytes.
void write_provenance(const std::filesystem::path& artifact, const std::string& command,
                      const nlohmann::json& config,
                      const std::vector<std::filesystem::path>& inputs);

/// Exclusive lock on an output directory; throws if another holder exists.
class DirLock {
 public:
  explicit DirLock(const std::filesystem::path& dir);
  ~DirLock();
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  std::filesystem::path lock_path_;
};

}  // namespace gwsurr
