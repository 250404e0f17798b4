#pragma once

#include <filesystem>
#include <cstdint>
#include <string>
#include <vector>

#include "scriptfocus/image.hpp"

namespace scriptfocus::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::string sha256_hex(const void* data, std::size_t size);
std::string image_sha256(const Image& image);
std::vector<std::uint8_t> base64_decode(const std::string& text);
std::string file_bytes(const std::string& path);
void write_text(const std::string& path, const std::string& text);

// Directory holding committed test data (tests/data).
std::string test_data_dir();

}  // namespace scriptfocus::testing
