#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace gwsurr {

// Self-describing binary array container:
//
//   bytes 0..7   magic "GWSURR01"
//   bytes 8..11  header length, unsigned 32-bit little-endian
//   header       UTF-8 JSON: {"dtype": "f64"|"c128", "shape": [...], "meta": {...}}
//   payload      row-major little-endian raw values
//
// Payload length must equal product(shape) * dtype size; files are written
// atomically (temp file + rename) and round-trip bit-exactly.
inline constexpr std::string_view kContainerMagic = "GWSURR01";

struct ArrayContainer {
  std::string dtype;                // "f64" or "c128"
  std::vector<std::size_t> shape;   // 1-D or 2-D
  nlohmann::json meta;              // named metadata object
  Eigen::MatrixXd f64;              // valid when dtype == "f64"
  Eigen::MatrixXcd c128;            // valid when dtype == "c128"

  static ArrayContainer real(const Eigen::MatrixXd& data, nlohmann::json meta = {});
  static ArrayContainer real_vector(const Eigen::VectorXd& data, nlohmann::json meta = {});
  static ArrayContainer complex(const Eigen::MatrixXcd& data, nlohmann::json meta = {});
};

void save_container(const std::filesystem::path& path, const ArrayContainer& container);
ArrayContainer load_container(const std::filesystem::path& path);

/// Writes bytes to a temp file in the target directory and renames over the
/// destination, so readers never observe a partially written container.
void atomic_write_bytes(const std::filesystem::path& path, const std::string& bytes);

}  // namespace gwsurr
