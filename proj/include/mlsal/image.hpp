#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlsal {

/// Thrown for contract violations and unusable inputs across the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kMinImageSide = 8;

/// Row-major 8-bit RGB image.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // r,g,b interleaved

    RgbImage() = default;
    RgbImage(int w, int h);

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    std::uint8_t* at(int x, int y) { return &data[3 * (static_cast<std::size_t>(y) * width + x)]; }
    const std::uint8_t* at(int x, int y) const {
        return &data[3 * (static_cast<std::size_t>(y) * width + x)];
    }
};

struct Lab {
    double l = 0.0;
    double a = 0.0;
    double b = 0.0;
};

/// Per-pixel CIELAB image (D65, 2 degree observer).
struct LabImage {
    int width = 0;
    int height = 0;
    std::vector<Lab> data;

    std::size_t pixel_count() const { return data.size(); }
    const Lab& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// Row-major scalar map. Saliency maps live in [0,1] once normalized.
struct PixelMap {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    PixelMap() = default;
    PixelMap(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    std::size_t pixel_count() const { return data.size(); }
    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// Summed-area table with a zero guard row and column.
class IntegralImage {
public:
    explicit IntegralImage(const PixelMap& map);

    /// Sum over [x0,x1) x [y0,y1).
    double sum(int x0, int y0, int x1, int y1) const {
        return sums_[y1 * stride_ + x1] - sums_[y0 * stride_ + x1] - sums_[y1 * stride_ + x0] +
               sums_[y0 * stride_ + x0];
    }

private:
    std::size_t stride_;
    std::vector<double> sums_;
};

Lab rgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);
LabImage rgb_to_lab(const RgbImage& img);

/// Inverse conversion, clamped into the sRGB gamut.
std::array<std::uint8_t, 3> lab_to_rgb(const Lab& lab);

/// Lab channels rescaled to [0,1]: L/100, (a+128)/255, (b+128)/255.
std::array<double, 3> scaled_lab(const Lab& lab);

/// Min-max rescale to [0,1]. A constant input maps to all zeros.
void normalize_in_place(std::span<double> values);
std::vector<double> normalize_map(std::vector<double> values);
PixelMap normalize_map(PixelMap map);

/// L channel divided by 100.
PixelMap lightness_map(const LabImage& img);

void check_same_size(int w0, int h0, int w1, int h1, const char* what);

/// Edge-preserving smoothing of `input` steered by the lightness of `guide`.
/// Windows are (2r+1)^2 squares clipped at the image border.
PixelMap guided_filter(const LabImage& guide, const PixelMap& input, int radius, double eps);
PixelMap guided_filter(const PixelMap& guide, const PixelMap& input, int radius, double eps);

/// Mean over the clipped (2r+1)^2 window around every pixel.
PixelMap box_mean(const PixelMap& input, int radius);

int default_guided_radius(int width, int height);

}  // namespace mlsal
