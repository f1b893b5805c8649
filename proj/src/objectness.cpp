#include "mlsal/objectness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mlsal {

namespace {

constexpr double kWindowScales[] = {0.2, 0.35, 0.5, 0.7, 0.9};
constexpr double kAspectRatios[] = {0.5, 1.0, 2.0};
// Contrast below this is cancellation noise from the summed-area tables.
constexpr double kContrastFloor = 1e-9;

struct ChannelTables {
    std::array<IntegralImage, 3> channels;

    double distance(int ix0, int iy0, int ix1, int iy1, int ox0, int oy0, int ox1, int oy1) const {
        const double inner_area = static_cast<double>(ix1 - ix0) * (iy1 - iy0);
        const double ring_area = static_cast<double>(ox1 - ox0) * (oy1 - oy0) - inner_area;
        if (ring_area <= 0.0) return 0.0;
        double d2 = 0.0;
        for (const IntegralImage& table : channels) {
            const double inner = table.sum(ix0, iy0, ix1, iy1);
            const double ring = table.sum(ox0, oy0, ox1, oy1) - inner;
            const double diff = inner / inner_area - ring / ring_area;
            d2 += diff * diff;
        }
        const double d = std::sqrt(d2);
        return d < kContrastFloor ? 0.0 : d;
    }
};

ChannelTables region_color_tables(const SuperpixelLabeling& labeling, const SuperpixelFeatures& features) {
    std::array<PixelMap, 3> planes;
    for (auto& plane : planes) plane = PixelMap(labeling.width, labeling.height);
    std::vector<std::array<double, 3>> colors(features.regions.size());
    for (std::size_t i = 0; i < colors.size(); ++i) colors[i] = scaled_lab(features.regions[i].mean_lab);
    for (std::size_t p = 0; p < labeling.labels.size(); ++p) {
        const auto& c = colors[labeling.labels[p]];
        for (int k = 0; k < 3; ++k) planes[k].data[p] = c[k];
    }
    return ChannelTables{{IntegralImage(planes[0]), IntegralImage(planes[1]), IntegralImage(planes[2])}};
}

}  // namespace

std::vector<WindowCandidate> propose_windows(const LabImage& img, const SuperpixelLabeling& labeling,
                                             const SuperpixelFeatures& features, int count) {
    check_same_size(img.width, img.height, labeling.width, labeling.height, "propose_windows");
    if (count < 1) throw Error("propose_windows: window count must be >= 1");
    if (features.region_count() != labeling.region_count) {
        throw Error("propose_windows: features do not match labeling");
    }
    const int w = img.width;
    const int h = img.height;
    const ChannelTables tables = region_color_tables(labeling, features);
    const double base = std::min(w, h);

    std::vector<WindowCandidate> candidates;
    for (const double scale : kWindowScales) {
        for (const double aspect : kAspectRatios) {
            const double side = scale * base;
            const int ww = static_cast<int>(std::lround(side * std::sqrt(aspect)));
            const int wh = static_cast<int>(std::lround(side / std::sqrt(aspect)));
            if (ww < 1 || wh < 1 || ww > w || wh > h) continue;
            if (static_cast<long long>(ww) * wh < kMinWindowArea) continue;
            const int stride_x = std::max(1, static_cast<int>(std::lround(ww / 8.0)));
            const int stride_y = std::max(1, static_cast<int>(std::lround(wh / 8.0)));
            for (int y0 = 0; y0 + wh <= h; y0 += stride_y) {
                for (int x0 = 0; x0 + ww <= w; x0 += stride_x) {
                    const int ox0 = std::max(0, x0 - ww / 2);
                    const int oy0 = std::max(0, y0 - wh / 2);
                    const int ox1 = std::min(w, x0 + ww + (ww - ww / 2));
                    const int oy1 = std::min(h, y0 + wh + (wh - wh / 2));
                    const double contrast = tables.distance(x0, y0, x0 + ww, y0 + wh, ox0, oy0, ox1, oy1);
                    candidates.push_back({x0, y0, x0 + ww, y0 + wh, contrast});
                }
            }
        }
    }
    if (candidates.empty()) throw Error("propose_windows: image too small for the smallest window scale");

    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    const std::size_t keep = std::min(order.size(), static_cast<std::size_t>(count));
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (candidates[a].score != candidates[b].score) return candidates[a].score > candidates[b].score;
                          return a < b;
                      });

    const double best = candidates[order.front()].score;
    std::vector<WindowCandidate> out;
    out.reserve(keep);
    for (std::size_t k = 0; k < keep; ++k) {
        WindowCandidate window = candidates[order[k]];
        window.score = best > 0.0 ? window.score / best : 0.0;
        out.push_back(window);
    }
    return out;
}

std::pair<double, double> object_center(const PixelMap& cbp) {
    const double fallback_x = 0.5 * (cbp.width - 1);
    const double fallback_y = 0.5 * (cbp.height - 1);
    if (cbp.data.empty()) return {fallback_x, fallback_y};
    const double mean = std::accumulate(cbp.data.begin(), cbp.data.end(), 0.0) / static_cast<double>(cbp.data.size());
    double mass = 0.0, sx = 0.0, sy = 0.0;
    for (int y = 0; y < cbp.height; ++y) {
        for (int x = 0; x < cbp.width; ++x) {
            const double v = cbp.at(x, y);
            if (v < mean) continue;
            mass += v;
            sx += v * x;
            sy += v * y;
        }
    }
    if (!(mass > 0.0)) return {fallback_x, fallback_y};
    return {sx / mass, sy / mass};
}

double window_accuracy(const WindowCandidate& window, const PixelMap& cbp, double beta) {
    double inside = 0.0;
    for (int y = window.y0; y < window.y1; ++y) {
        for (int x = window.x0; x < window.x1; ++x) inside += cbp.at(x, y);
    }
    return inside / (static_cast<double>(window.area()) + beta);
}

ObjectnessResult pixel_objectness(const std::vector<WindowCandidate>& windows, const PixelMap& cbp, double beta) {
    if (windows.empty()) throw Error("pixel_objectness: no windows");
    if (!(beta > 0.0)) throw Error("pixel_objectness: beta must be > 0");
    const int w = cbp.width;
    const int h = cbp.height;
    for (const WindowCandidate& win : windows) {
        if (win.x0 < 0 || win.y0 < 0 || win.x1 > w || win.y1 > h || win.x0 >= win.x1 || win.y0 >= win.y1) {
            throw Error("pixel_objectness: window outside the map");
        }
    }

    ObjectnessResult result;
    std::tie(result.center_x, result.center_y) = object_center(cbp);
    const IntegralImage table(cbp);

    PixelMap acc(w, h);
    std::vector<double> gx(w);
    std::vector<double> gy(h);
    result.accuracy.reserve(windows.size());
    for (const WindowCandidate& win : windows) {
        const double psi = table.sum(win.x0, win.y0, win.x1, win.y1) / (static_cast<double>(win.area()) + beta);
        result.accuracy.push_back(psi);
        const double weight = win.score * psi;
        if (weight == 0.0) continue;
        const double sigma_x = 0.5 * win.width();
        const double sigma_y = 0.5 * win.height();
        // The Gaussian separates into a row factor and a column factor.
        for (int x = 0; x < w; ++x) {
            const double d = x - result.center_x;
            gx[x] = std::exp(-d * d / (2.0 * sigma_x * sigma_x));
        }
        for (int y = 0; y < h; ++y) {
            const double d = y - result.center_y;
            gy[y] = weight * std::exp(-d * d / (2.0 * sigma_y * sigma_y));
        }
        for (int y = 0; y < h; ++y) {
            double* row = &acc.data[static_cast<std::size_t>(y) * w];
            const double fy = gy[y];
            for (int x = 0; x < w; ++x) row[x] += fy * gx[x];
        }
    }
    result.pixel_map = normalize_map(std::move(acc));
    return result;
}

void region_objectness(ObjectnessResult& result, const SuperpixelLabeling& labeling) {
    result.region_raw = region_means(labeling, result.pixel_map);
    result.region_map.values = normalize_map(result.region_raw);
}

}  // namespace mlsal
