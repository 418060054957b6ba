#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pyra/image.hpp"

namespace pyra {

struct DecodeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Decodes a PNG or JPEG byte stream into 8-bit RGB. Alpha is discarded,
// grayscale is promoted to RGB. Throws DecodeError on malformed input.
RgbImage decode_image(const std::vector<std::uint8_t>& bytes);

// Encodes as 8-bit RGB PNG, no interlacing.
std::vector<std::uint8_t> encode_png(const RgbImage& image);
std::vector<std::uint8_t> encode_png(const GrayMap& map);

RgbImage load_image(const std::string& path);
void save_png(const std::string& path, const RgbImage& image);
void save_png(const std::string& path, const GrayMap& map);

}  // namespace pyra
