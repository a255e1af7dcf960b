#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace uq {

/// Lower-case hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);
/// Throws ensuq::Error{FileNotFound}.
std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
  nlohmann::json config;
  std::string dataset_path;
  std::string dataset_sha256;
  std::size_t rows = 0;
  std::size_t dims = 0;
  std::size_t classes = 0;
  std::string version;
  std::string timestamp;  // UTC, ISO 8601
  std::vector<std::string> outputs;
};

nlohmann::json to_json(const RunManifest& manifest);

std::string utc_timestamp();
std::string_view toolkit_version() noexcept;

}  // namespace uq
