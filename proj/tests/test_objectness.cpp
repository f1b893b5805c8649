#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mlsal/objectness.hpp"
#include "oracles.hpp"

using namespace mlsal;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

struct Segmented {
    LabImage lab;
    SuperpixelLabeling labeling;
    SuperpixelFeatures features;
};

Segmented segment(const RgbImage& img, int n) {
    Segmented s;
    s.lab = rgb_to_lab(img);
    s.labeling = slic_segment(s.lab, {n, 10.0, 10});
    s.features = extract_features(s.labeling, s.lab, 0.15);
    return s;
}

double iou(const WindowCandidate& w, int x0, int y0, int x1, int y1) {
    const int ix = std::max(0, std::min(w.x1, x1) - std::max(w.x0, x0));
    const int iy = std::max(0, std::min(w.y1, y1) - std::max(w.y0, y0));
    const double inter = static_cast<double>(ix) * iy;
    return inter / (static_cast<double>(w.area()) + static_cast<double>(x1 - x0) * (y1 - y0) - inter);
}

}  // namespace

TEST_CASE("whole-image window on a full map") {
    const PixelMap cbp(20, 10, 1.0);
    const WindowCandidate win{0, 0, 20, 10, 1.0};
    CHECK(window_accuracy(win, cbp, 1.0) == doctest::Approx(200.0 / 201.0).epsilon(1e-15));
    const ObjectnessResult r = pixel_objectness({win}, cbp, 1.0);
    CHECK(r.accuracy[0] == doctest::Approx(200.0 / 201.0).epsilon(1e-15));
}

TEST_CASE("window over a zero map area contributes nothing") {
    PixelMap cbp(20, 20, 0.0);
    for (int y = 10; y < 20; ++y)
        for (int x = 10; x < 20; ++x) cbp.at(x, y) = 1.0;
    const WindowCandidate empty{0, 0, 8, 8, 1.0};
    const WindowCandidate full{8, 8, 20, 20, 0.7};
    const ObjectnessResult both = pixel_objectness({empty, full}, cbp, 1.0);
    const ObjectnessResult one = pixel_objectness({full}, cbp, 1.0);
    CHECK(both.accuracy[0] == 0.0);
    CHECK(both.pixel_map.data == one.pixel_map.data);
}

TEST_CASE("pixel objectness matches the direct double loop") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> coord(0, 19);
    for (int trial = 0; trial < 20; ++trial) {
        const PixelMap cbp = oracle::random_map(rng, 20, 20);
        std::vector<WindowCandidate> windows;
        std::uniform_real_distribution<double> score(0.1, 1.0);
        for (int k = 0; k < 2; ++k) {
            int x0 = coord(rng), x1 = coord(rng), y0 = coord(rng), y1 = coord(rng);
            if (x0 > x1) std::swap(x0, x1);
            if (y0 > y1) std::swap(y0, y1);
            windows.push_back({x0, y0, x1 + 1, y1 + 1, score(rng)});
        }
        const ObjectnessResult r = pixel_objectness(windows, cbp, 1.0);
        CHECK(max_abs_diff(r.pixel_map.data, oracle::objectness(windows, cbp, 1.0)) <= 1e-12);
        for (double psi : r.accuracy) {
            CHECK(psi >= 0.0);
            CHECK(psi < 1.0);
        }
    }
}

TEST_CASE("objectness is invariant to scaling every window score") {
    std::mt19937_64 rng(4);
    const PixelMap cbp = oracle::random_map(rng, 24, 18);
    std::vector<WindowCandidate> windows = {{2, 3, 12, 15, 0.4}, {5, 1, 20, 9, 0.9}, {0, 0, 24, 18, 0.2}};
    const ObjectnessResult base = pixel_objectness(windows, cbp, 1.0);
    for (auto& w : windows) w.score *= 2.0;
    const ObjectnessResult doubled = pixel_objectness(windows, cbp, 1.0);
    CHECK(max_abs_diff(base.pixel_map.data, doubled.pixel_map.data) <= 1e-12);
}

TEST_CASE("single window objectness falls off away from the center") {
    PixelMap cbp(30, 30, 0.0);
    for (int y = 12; y < 20; ++y)
        for (int x = 8; x < 14; ++x) cbp.at(x, y) = 1.0;
    const ObjectnessResult r = pixel_objectness({{4, 6, 20, 26, 1.0}}, cbp, 1.0);
    const int cx = static_cast<int>(std::lround(r.center_x)), cy = static_cast<int>(std::lround(r.center_y));
    for (int y = 0; y < 30; ++y) {
        for (int x = cx; x + 1 < 30; ++x) CHECK(r.pixel_map.at(x + 1, y) <= r.pixel_map.at(x, y));
        for (int x = cx; x > 0; --x) CHECK(r.pixel_map.at(x - 1, y) <= r.pixel_map.at(x, y));
    }
    for (int x = 0; x < 30; ++x) {
        for (int y = cy; y + 1 < 30; ++y) CHECK(r.pixel_map.at(x, y + 1) <= r.pixel_map.at(x, y));
    }
}

TEST_CASE("object center") {
    const auto [fx, fy] = object_center(PixelMap(21, 11, 0.0));
    CHECK(fx == 10.0);
    CHECK(fy == 5.0);

    PixelMap m(10, 10, 0.0);
    m.at(2, 3) = 1.0;
    m.at(6, 3) = 1.0;
    const auto [x, y] = object_center(m);
    CHECK(x == 4.0);
    CHECK(y == 3.0);
}

TEST_CASE("region pooling") {
    std::mt19937_64 rng(31);
    ObjectnessResult r;
    r.pixel_map = oracle::random_map(rng, 16, 16);
    SuperpixelLabeling lab{16, 16, 4, std::vector<int>(256)};
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) lab.labels[y * 16 + x] = (x >= 8) + 2 * (y >= 8);
    region_objectness(r, lab);
    for (int l = 0; l < 4; ++l) {
        double s = 0;
        int c = 0;
        for (int y = 0; y < 16; ++y) {
            for (int x = 0; x < 16; ++x) {
                if (lab.at(x, y) != l) continue;
                s += r.pixel_map.at(x, y);
                ++c;
            }
        }
        CHECK(std::abs(r.region_raw[l] - s / c) <= 1e-12);
    }
    CHECK(max_abs_diff(r.region_map.values, oracle::minmax(r.region_raw)) <= 1e-15);

    ObjectnessResult flat;
    flat.pixel_map = PixelMap(16, 16, 0.3);
    region_objectness(flat, lab);
    for (double v : flat.region_raw) CHECK(std::abs(v - 0.3) <= 1e-15);
    for (double v : flat.region_map.values) CHECK(v == 0.0);

    SuperpixelLabeling singles{16, 16, 256, std::vector<int>(256)};
    for (int p = 0; p < 256; ++p) singles.labels[p] = p;
    region_objectness(r, singles);
    CHECK(max_abs_diff(r.region_map.values, oracle::minmax(r.pixel_map.data)) <= 1e-15);
}

TEST_CASE("uniform image gives zero window scores") {
    const Segmented s = segment(testutil::solid(64, 48, 30, 150, 60), 30);
    const auto windows = propose_windows(s.lab, s.labeling, s.features, 50);
    CHECK(windows.size() == 50);
    for (const auto& w : windows) CHECK(w.score == 0.0);
}

TEST_CASE("top window finds a centered square") {
    const Segmented s = segment(testutil::centered_square(120, 120, 40), 100);
    const auto windows = propose_windows(s.lab, s.labeling, s.features, 200);
    REQUIRE(!windows.empty());
    const WindowCandidate& top = windows.front();
    const double cx = 0.5 * (top.x0 + top.x1), cy = 0.5 * (top.y0 + top.y1);
    CHECK(std::hypot(cx - 60.0, cy - 60.0) <= 10.0);
    CHECK(iou(top, 40, 40, 80, 80) >= 0.5);
    CHECK(top.score == 1.0);
    for (std::size_t k = 1; k < windows.size(); ++k) CHECK(windows[k].score <= windows[k - 1].score);
}

TEST_CASE("window proposals honor their contract") {
    const Segmented s = segment(testutil::centered_square(90, 70, 30), 60);
    CHECK(propose_windows(s.lab, s.labeling, s.features, 1).size() == 1);
    for (const auto& w : propose_windows(s.lab, s.labeling, s.features, 200)) {
        CHECK(w.x0 >= 0);
        CHECK(w.x0 < w.x1);
        CHECK(w.x1 <= 90);
        CHECK(w.y0 >= 0);
        CHECK(w.y0 < w.y1);
        CHECK(w.y1 <= 70);
        CHECK(w.area() >= kMinWindowArea);
        CHECK(w.score >= 0.0);
        CHECK(w.score <= 1.0);
    }
    CHECK_THROWS_AS(propose_windows(s.lab, s.labeling, s.features, 0), Error);

    // On an 8x8 image even the largest window is under the minimum area.
    Segmented tiny;
    tiny.lab = rgb_to_lab(testutil::solid(8, 8, 1, 2, 3));
    tiny.labeling = {8, 8, 1, std::vector<int>(64, 0)};
    tiny.features = extract_features(tiny.labeling, tiny.lab, 0.15);
    CHECK_THROWS_AS(propose_windows(tiny.lab, tiny.labeling, tiny.features, 10), Error);
}
