#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace scriptfocus {

// `frame_%06d.png`
std::string frame_filename(std::int64_t index);

// Frames in `dir` named frame_<digits>.png, keyed by index. Throws
// Error{kInputMissing} when the directory does not exist.
std::map<std::int64_t, std::string> list_frames(const std::string& dir);

struct PngDims {
  int width = 0;
  int height = 0;
};

// Reads only the PNG header.
PngDims read_png_dims(const std::string& path);

// Writes bytes to `path` through a temporary file and rename, so a reader
// never sees a partial frame.
void write_file_atomic(const std::string& path, const void* data, std::size_t size);

}  // namespace scriptfocus
