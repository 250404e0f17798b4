#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scriptfocus/image.hpp"

namespace scriptfocus {

// PNG codec (8-bit RGB output; gray, palette and alpha inputs are converted).
// Failures throw Error{kIo} or Error{kInputMissing}.
Image read_png(const std::string& path);
Image decode_png(std::span<const std::uint8_t> bytes);
void write_png(const std::string& path, const Image& image);
std::vector<std::uint8_t> encode_png(const Image& image);

}  // namespace scriptfocus
