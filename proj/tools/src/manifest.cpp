#include "uq/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "ensuq/error.hpp"

#ifndef UQ_VERSION
#define UQ_VERSION "0.0.0"
#endif

namespace uq {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw ensuq::Error(ensuq::Errc::IoFailure, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ensuq::Error(ensuq::Errc::FileNotFound, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

nlohmann::json to_json(const RunManifest& m) {
  return nlohmann::json{
      {"config", m.config},
      {"dataset", {{"path", m.dataset_path},
                   {"sha256", m.dataset_sha256},
                   {"rows", m.rows},
                   {"features", m.dims},
                   {"classes", m.classes}}},
      {"version", m.version},
      {"timestamp", m.timestamp},
      {"outputs", m.outputs},
  };
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string_view toolkit_version() noexcept { return UQ_VERSION; }

}  // namespace uq
