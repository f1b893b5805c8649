#include "mlsal/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace mlsal {

namespace {

struct PngImage {
    png_image image;

    PngImage() {
        std::memset(&image, 0, sizeof(image));
        image.version = PNG_IMAGE_VERSION;
    }
    ~PngImage() { png_image_free(&image); }
    PngImage(const PngImage&) = delete;
    PngImage& operator=(const PngImage&) = delete;
};

std::vector<std::uint8_t> read_png(const std::filesystem::path& path, png_uint_32 format, int& width,
                                   int& height) {
    PngImage png;
    if (!png_image_begin_read_from_file(&png.image, path.c_str())) {
        throw Error("cannot read PNG '" + path.string() + "': " + png.image.message);
    }
    if (png.image.format & PNG_FORMAT_FLAG_LINEAR) {
        throw Error("unsupported bit depth (16-bit) in '" + path.string() + "'");
    }
    png.image.format = format;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(png.image));
    if (!png_image_finish_read(&png.image, nullptr, buffer.data(), 0, nullptr)) {
        throw Error("cannot decode PNG '" + path.string() + "': " + png.image.message);
    }
    width = static_cast<int>(png.image.width);
    height = static_cast<int>(png.image.height);
    return buffer;
}

void write_png(const std::filesystem::path& path, png_uint_32 format, int width, int height, const void* data) {
    PngImage png;
    png.image.width = static_cast<png_uint_32>(width);
    png.image.height = static_cast<png_uint_32>(height);
    png.image.format = format;
    if (!png_image_write_to_file(&png.image, path.c_str(), 0, data, 0, nullptr)) {
        throw Error("cannot write PNG '" + path.string() + "': " + png.image.message);
    }
}

}  // namespace

RgbImage read_image(const std::filesystem::path& path) {
    RgbImage img;
    img.data = read_png(path, PNG_FORMAT_RGB, img.width, img.height);
    return img;
}

GrayImage read_gray(const std::filesystem::path& path) {
    int width = 0;
    int height = 0;
    const std::vector<std::uint8_t> rgb = read_png(path, PNG_FORMAT_RGB, width, height);
    GrayImage img{width, height, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height)};
    for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = rgb[3 * i];
    return img;
}

std::uint8_t quantize(double v) {
    const double scaled = std::floor(255.0 * v + 0.5);
    return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

GrayImage quantize_map(const PixelMap& map) {
    GrayImage img{map.width, map.height, std::vector<std::uint8_t>(map.pixel_count())};
    std::transform(map.data.begin(), map.data.end(), img.data.begin(), quantize);
    return img;
}

void write_map(const std::filesystem::path& path, const PixelMap& map) { write_gray(path, quantize_map(map)); }

void write_gray(const std::filesystem::path& path, const GrayImage& img) {
    write_png(path, PNG_FORMAT_GRAY, img.width, img.height, img.data.data());
}

void write_rgb(const std::filesystem::path& path, const RgbImage& img) {
    write_png(path, PNG_FORMAT_RGB, img.width, img.height, img.data.data());
}

void write_gray16(const std::filesystem::path& path, int width, int height, const std::vector<std::uint16_t>& data) {
    write_png(path, PNG_FORMAT_LINEAR_Y, width, height, data.data());
}

std::vector<std::uint8_t> encode_map_png(const PixelMap& map) {
    const GrayImage img = quantize_map(map);
    PngImage png;
    png.image.width = static_cast<png_uint_32>(img.width);
    png.image.height = static_cast<png_uint_32>(img.height);
    png.image.format = PNG_FORMAT_GRAY;
    png_alloc_size_t size = 0;
    if (!png_image_write_get_memory_size(png.image, size, 0, img.data.data(), 0, nullptr)) {
        throw Error(std::string("cannot encode PNG: ") + png.image.message);
    }
    std::vector<std::uint8_t> bytes(size);
    if (!png_image_write_to_memory(&png.image, bytes.data(), &size, 0, img.data.data(), 0, nullptr)) {
        throw Error(std::string("cannot encode PNG: ") + png.image.message);
    }
    bytes.resize(size);
    return bytes;
}

}  // namespace mlsal
