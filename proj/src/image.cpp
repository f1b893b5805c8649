#include "mlsal/image.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mlsal {

namespace {

// sRGB primaries, D65 reference white.
constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.0;
constexpr double kWhiteZ = 1.08883;
constexpr double kEpsilon = 216.0 / 24389.0;
constexpr double kKappa = 24389.0 / 27.0;

double srgb_to_linear(double c) {
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double c) {
    return c <= 0.0031308 ? 12.92 * c : 1.055 * std::pow(c, 1.0 / 2.4) - 0.055;
}

double lab_f(double t) {
    return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

double lab_f_inv(double f) {
    const double f3 = f * f * f;
    return f3 > kEpsilon ? f3 : (116.0 * f - 16.0) / kKappa;
}

std::array<double, 256> make_linear_table() {
    std::array<double, 256> table{};
    for (int i = 0; i < 256; ++i) table[i] = srgb_to_linear(i / 255.0);
    return table;
}

}  // namespace

IntegralImage::IntegralImage(const PixelMap& map)
    : stride_(map.width + 1), sums_((map.width + 1) * static_cast<std::size_t>(map.height + 1), 0.0) {
    for (int y = 0; y < map.height; ++y) {
        double row = 0.0;
        for (int x = 0; x < map.width; ++x) {
            row += map.at(x, y);
            sums_[(y + 1) * stride_ + x + 1] = sums_[y * stride_ + x + 1] + row;
        }
    }
}

RgbImage::RgbImage(int w, int h) : width(w), height(h), data(3 * static_cast<std::size_t>(w) * h, 0) {}

Lab rgb_to_lab(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    static const std::array<double, 256> linear = make_linear_table();
    const double r = linear[r8];
    const double g = linear[g8];
    const double b = linear[b8];

    const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;

    const double fx = lab_f(x / kWhiteX);
    const double fy = lab_f(y / kWhiteY);
    const double fz = lab_f(z / kWhiteZ);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

LabImage rgb_to_lab(const RgbImage& img) {
    LabImage out;
    out.width = img.width;
    out.height = img.height;
    out.data.resize(img.pixel_count());
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        const std::uint8_t* p = &img.data[3 * i];
        out.data[i] = rgb_to_lab(p[0], p[1], p[2]);
    }
    return out;
}

std::array<std::uint8_t, 3> lab_to_rgb(const Lab& lab) {
    const double fy = (lab.l + 16.0) / 116.0;
    const double fx = fy + lab.a / 500.0;
    const double fz = fy - lab.b / 200.0;
    const double x = kWhiteX * lab_f_inv(fx);
    const double y = kWhiteY * (lab.l > kKappa * kEpsilon ? fy * fy * fy : lab.l / kKappa);
    const double z = kWhiteZ * lab_f_inv(fz);

    const double lin[3] = {
        3.2404542 * x - 1.5371385 * y - 0.4985314 * z,
        -0.9692660 * x + 1.8760108 * y + 0.0415560 * z,
        0.0556434 * x - 0.2040259 * y + 1.0572252 * z,
    };
    std::array<std::uint8_t, 3> out{};
    for (int c = 0; c < 3; ++c) {
        const double v = linear_to_srgb(std::clamp(lin[c], 0.0, 1.0));
        out[c] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    }
    return out;
}

std::array<double, 3> scaled_lab(const Lab& lab) {
    return {lab.l / 100.0, (lab.a + 128.0) / 255.0, (lab.b + 128.0) / 255.0};
}

void normalize_in_place(std::span<double> values) {
    if (values.empty()) return;
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    if (!(range > 0.0)) {
        std::fill(values.begin(), values.end(), 0.0);
        return;
    }
    for (double& v : values) v = (v - lo) / range;
}

std::vector<double> normalize_map(std::vector<double> values) {
    normalize_in_place(values);
    return values;
}

PixelMap normalize_map(PixelMap map) {
    normalize_in_place(map.data);
    return map;
}

PixelMap lightness_map(const LabImage& img) {
    PixelMap out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) out.data[i] = img.data[i].l / 100.0;
    return out;
}

void check_same_size(int w0, int h0, int w1, int h1, const char* what) {
    if (w0 != w1 || h0 != h1) {
        std::ostringstream msg;
        msg << what << ": dimension mismatch " << w0 << "x" << h0 << " vs " << w1 << "x" << h1;
        throw Error(msg.str());
    }
}

int default_guided_radius(int width, int height) {
    return std::max(1, static_cast<int>(std::lround(0.04 * std::min(width, height))));
}

}  // namespace mlsal
