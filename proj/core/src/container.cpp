#include "gwsurr/container.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "container payloads are little-endian; big-endian hosts are unsupported");

namespace gwsurr {

namespace fs = std::filesystem;

ArrayContainer ArrayContainer::real(const Eigen::MatrixXd& data, nlohmann::json meta) {
  ArrayContainer c;
  c.dtype = "f64";
  c.shape = {static_cast<std::size_t>(data.rows()), static_cast<std::size_t>(data.cols())};
  c.meta = std::move(meta);
  c.f64 = data;
  return c;
}

ArrayContainer ArrayContainer::real_vector(const Eigen::VectorXd& data, nlohmann::json meta) {
  ArrayContainer c;
  c.dtype = "f64";
  c.shape = {static_cast<std::size_t>(data.size())};
  c.meta = std::move(meta);
  c.f64 = data.transpose();
  return c;
}

ArrayContainer ArrayContainer::complex(const Eigen::MatrixXcd& data, nlohmann::json meta) {
  ArrayContainer c;
  c.dtype = "c128";
  c.shape = {static_cast<std::size_t>(data.rows()), static_cast<std::size_t>(data.cols())};
  c.meta = std::move(meta);
  c.c128 = data;
  return c;
}

namespace {

std::size_t element_count(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t s : shape) n *= s;
  return n;
}

std::pair<std::size_t, std::size_t> matrix_dims(const std::vector<std::size_t>& shape) {
  if (shape.size() == 1) return {1, shape[0]};
  if (shape.size() == 2) return {shape[0], shape[1]};
  throw std::runtime_error("container: only 1-D and 2-D shapes are supported");
}

void append_row_major(std::string& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      out.append(reinterpret_cast<const char*>(&v), sizeof(double));
    }
  }
}

void append_row_major(std::string& out, const Eigen::MatrixXcd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double re = m(r, c).real();
      const double im = m(r, c).imag();
      out.append(reinterpret_cast<const char*>(&re), sizeof(double));
      out.append(reinterpret_cast<const char*>(&im), sizeof(double));
    }
  }
}

}  // namespace

void atomic_write_bytes(const fs::path& path, const std::string& bytes) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

void save_container(const fs::path& path, const ArrayContainer& container) {
  if (container.dtype != "f64" && container.dtype != "c128") {
    throw std::invalid_argument("container: unknown dtype " + container.dtype);
  }
  const auto [rows, cols] = matrix_dims(container.shape);
  nlohmann::json header;
  header["dtype"] = container.dtype;
  header["shape"] = container.shape;
  header["meta"] = container.meta.is_null() ? nlohmann::json::object() : container.meta;
  const std::string header_text = header.dump();
  if (header_text.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::runtime_error("container: header too large");
  }

  std::string bytes;
  const std::size_t dsize = container.dtype == "f64" ? 8 : 16;
  bytes.reserve(12 + header_text.size() + element_count(container.shape) * dsize);
  bytes.append(kContainerMagic);
  const auto hlen = static_cast<std::uint32_t>(header_text.size());
  bytes.append(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  bytes.append(header_text);

  if (container.dtype == "f64") {
    if (static_cast<std::size_t>(container.f64.rows()) != rows ||
        static_cast<std::size_t>(container.f64.cols()) != cols) {
      throw std::invalid_argument("container: f64 data does not match shape");
    }
    append_row_major(bytes, container.f64);
  } else {
    if (static_cast<std::size_t>(container.c128.rows()) != rows ||
        static_cast<std::size_t>(container.c128.cols()) != cols) {
      throw std::invalid_argument("container: c128 data does not match shape");
    }
    append_row_major(bytes, container.c128);
  }
  atomic_write_bytes(path, bytes);
}

ArrayContainer load_container(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open container: " + path.string());

  char magic[8];
  in.read(magic, 8);
  if (!in || std::string_view(magic, 8) != kContainerMagic) {
    throw std::runtime_error("bad container magic in " + path.string());
  }
  std::uint32_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  if (!in) throw std::runtime_error("truncated container header in " + path.string());
  std::string header_text(hlen, '\0');
  in.read(header_text.data(), hlen);
  if (!in) throw std::runtime_error("truncated container header in " + path.string());

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("corrupt container header in " + path.string() + ": " + e.what());
  }

  ArrayContainer c;
  c.dtype = header.at("dtype").get<std::string>();
  c.shape = header.at("shape").get<std::vector<std::size_t>>();
  c.meta = header.value("meta", nlohmann::json::object());
  if (c.dtype != "f64" && c.dtype != "c128") {
    throw std::runtime_error("unknown dtype '" + c.dtype + "' in " + path.string());
  }

  const auto [rows, cols] = matrix_dims(c.shape);
  const std::size_t n = element_count(c.shape);
  const std::size_t payload = n * (c.dtype == "f64" ? 8 : 16);
  std::string data(payload, '\0');
  in.read(data.data(), static_cast<std::streamsize>(payload));
  if (static_cast<std::size_t>(in.gcount()) != payload) {
    throw std::runtime_error("truncated container payload in " + path.string());
  }
  in.peek();
  if (!in.eof()) {
    throw std::runtime_error("trailing bytes after payload in " + path.string());
  }

  const char* p = data.data();
  if (c.dtype == "f64") {
    c.f64.resize(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t col = 0; col < cols; ++col) {
        double v;
        std::memcpy(&v, p, sizeof(double));
        p += sizeof(double);
        c.f64(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = v;
      }
    }
  } else {
    c.c128.resize(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t col = 0; col < cols; ++col) {
        double re, im;
        std::memcpy(&re, p, sizeof(double));
        p += sizeof(double);
        std::memcpy(&im, p, sizeof(double));
        p += sizeof(double);
        c.c128(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = {re, im};
      }
    }
  }
  return c;
}

}  // namespace gwsurr
