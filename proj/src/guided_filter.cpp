#include "mlsal/image.hpp"

#include <algorithm>

namespace mlsal {

namespace {

PixelMap multiply(const PixelMap& a, const PixelMap& b) {
    PixelMap out(a.width, a.height);
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = a.data[i] * b.data[i];
    return out;
}

}  // namespace

PixelMap box_mean(const PixelMap& input, int radius) {
    const IntegralImage table(input);
    PixelMap out(input.width, input.height);
    for (int y = 0; y < input.height; ++y) {
        const int y0 = std::max(0, y - radius);
        const int y1 = std::min(input.height, y + radius + 1);
        for (int x = 0; x < input.width; ++x) {
            const int x0 = std::max(0, x - radius);
            const int x1 = std::min(input.width, x + radius + 1);
            out.at(x, y) = table.sum(x0, y0, x1, y1) / static_cast<double>((x1 - x0) * (y1 - y0));
        }
    }
    return out;
}

PixelMap guided_filter(const PixelMap& guide, const PixelMap& input, int radius, double eps) {
    check_same_size(guide.width, guide.height, input.width, input.height, "guided_filter");
    if (radius < 1) throw Error("guided_filter: radius must be >= 1");
    if (!(eps > 0.0)) throw Error("guided_filter: eps must be > 0");

    const PixelMap mean_i = box_mean(guide, radius);
    const PixelMap mean_p = box_mean(input, radius);
    const PixelMap mean_ii = box_mean(multiply(guide, guide), radius);
    const PixelMap mean_ip = box_mean(multiply(guide, input), radius);

    PixelMap a(guide.width, guide.height);
    PixelMap b(guide.width, guide.height);
    for (std::size_t k = 0; k < a.data.size(); ++k) {
        const double var = mean_ii.data[k] - mean_i.data[k] * mean_i.data[k];
        const double cov = mean_ip.data[k] - mean_i.data[k] * mean_p.data[k];
        a.data[k] = cov / (var + eps);
        b.data[k] = mean_p.data[k] - a.data[k] * mean_i.data[k];
    }

    const PixelMap mean_a = box_mean(a, radius);
    const PixelMap mean_b = box_mean(b, radius);
    PixelMap out(guide.width, guide.height);
    for (std::size_t k = 0; k < out.data.size(); ++k) {
        out.data[k] = mean_a.data[k] * guide.data[k] + mean_b.data[k];
    }
    return out;
}

PixelMap guided_filter(const LabImage& guide, const PixelMap& input, int radius, double eps) {
    check_same_size(guide.width, guide.height, input.width, input.height, "guided_filter");
    return guided_filter(lightness_map(guide), input, radius, eps);
}

}  // namespace mlsal
