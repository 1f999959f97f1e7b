#include "gwsurr/provenance.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <openssl/evp.h>

#include "gwsurr/container.hpp"

namespace gwsurr {

namespace fs = std::filesystem;

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("sha256_file: cannot open " + path.string());

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256_file: digest init failed");
  }
  std::array<char, 65536> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    const auto got = in.gcount();
    if (got > 0 && EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(got)) != 1) {
      throw std::runtime_error("sha256_file: digest update failed");
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw std::runtime_error("sha256_file: digest final failed");
  }
  std::string hex(2 * len, '0');
  static const char* alphabet = "0123456789abcdef";
  for (unsigned int i = 0; i < len; ++i) {
    hex[2 * i] = alphabet[digest[i] >> 4];
    hex[2 * i + 1] = alphabet[digest[i] & 0xF];
  }
  return hex;
}

void write_provenance(const fs::path& artifact, const std::string& command,
                      const nlohmann::json& config, const std::vector<fs::path>& inputs) {
  nlohmann::json prov;
  prov["command"] = command;
  prov["version"] = std::string(kToolkitVersion);
  prov["config"] = config;
  prov["artifact"] = artifact.filename().string();
  nlohmann::json in = nlohmann::json::object();
  for (const auto& p : inputs) {
    in[p.filename().string()] = {{"path", p.string()}, {"sha256", sha256_file(p)}};
  }
  prov["inputs"] = in;
  atomic_write_bytes(artifact.string() + ".prov.json", prov.dump(2) + "\n");
}

DirLock::DirLock(const fs::path& dir) {
  fs::create_directories(dir);
  lock_path_ = dir / ".gwsurr.lock";
  const int fd = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    throw std::runtime_error("output directory is locked by another command (remove " +
                             lock_path_.string() + " if stale)");
  }
  ::close(fd);
}

DirLock::~DirLock() {
  std::error_code ec;
  fs::remove(lock_path_, ec);
}

}  // namespace gwsurr
