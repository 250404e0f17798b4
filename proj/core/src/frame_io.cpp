#include "scriptfocus/frame_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "scriptfocus/error.hpp"

namespace scriptfocus {

namespace fs = std::filesystem;

std::string frame_filename(std::int64_t index) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "frame_%06lld.png", static_cast<long long>(index));
  return buf;
}

std::map<std::int64_t, std::string> list_frames(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::kInputMissing, "frames directory '" + dir + "' does not exist");
  }
  constexpr std::string_view kPrefix = "frame_";
  constexpr std::string_view kSuffix = ".png";
  std::map<std::int64_t, std::string> frames;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.size() <= kPrefix.size() + kSuffix.size() || !name.starts_with(kPrefix) ||
        !name.ends_with(kSuffix)) {
      continue;
    }
    const std::string digits =
        name.substr(kPrefix.size(), name.size() - kPrefix.size() - kSuffix.size());
    if (digits.size() > 12 ||
        !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); })) {
      continue;
    }
    frames.emplace(std::stoll(digits), entry.path().string());
  }
  return frames;
}

PngDims read_png_dims(const std::string& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    const std::string message = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::kIo, path + ": " + message);
  }
  PngDims dims{static_cast<int>(image.width), static_cast<int>(image.height)};
  png_image_free(&image);
  return dims;
}

void write_file_atomic(const std::string& path, const void* data, std::size_t size) {
  const std::string tmp = path + ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw Error(ErrorCode::kIo, "cannot write '" + tmp + "'");
  }
  fs::rename(tmp, path);
}

}  // namespace scriptfocus
