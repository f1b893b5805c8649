#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mlsal/image.hpp"

namespace mlsal {

/// 8-bit grayscale raster, used for masks and quantized maps.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;
};

/// Reads an 8-bit PNG (gray, gray+alpha, RGB, RGBA or palette) as RGB.
/// 16-bit PNGs are rejected.
RgbImage read_image(const std::filesystem::path& path);

/// Reads an 8-bit PNG and reduces it to its first channel.
GrayImage read_gray(const std::filesystem::path& path);

/// round(255 * v) with halves rounded up, clamped to [0,255].
std::uint8_t quantize(double v);
GrayImage quantize_map(const PixelMap& map);

void write_map(const std::filesystem::path& path, const PixelMap& map);
void write_gray(const std::filesystem::path& path, const GrayImage& img);
void write_rgb(const std::filesystem::path& path, const RgbImage& img);
void write_gray16(const std::filesystem::path& path, int width, int height, const std::vector<std::uint16_t>& data);

/// In-memory PNG encoding of a map; what write_map puts on disk.
std::vector<std::uint8_t> encode_map_png(const PixelMap& map);

}  // namespace mlsal
