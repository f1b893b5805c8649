#include "mlsal/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace mlsal {

namespace {

// Distribution code is written out here so the corpus is the same on every
// standard library (the std:: distributions are implementation-defined).
class Random {
public:
    Random(std::uint64_t seed, std::uint64_t stream) : engine_(mix(seed * 0x9E3779B97F4A7C15ULL + stream)) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct Shape {
    bool ellipse = true;
    double cx = 0, cy = 0, rx = 0, ry = 0;
    Lab color;

    bool contains(double x, double y) const {
        const double u = (x - cx) / rx;
        const double v = (y - cy) / ry;
        return ellipse ? u * u + v * v <= 1.0 : std::abs(u) <= 1.0 && std::abs(v) <= 1.0;
    }
};

double lab_distance(const Lab& p, const Lab& q) {
    return std::sqrt((p.l - q.l) * (p.l - q.l) + (p.a - q.a) * (p.a - q.a) + (p.b - q.b) * (p.b - q.b));
}

Lab random_color(Random& rng) { return {rng.uniform(30.0, 80.0), rng.uniform(-40.0, 40.0), rng.uniform(-40.0, 40.0)}; }

bool placement_ok(const std::vector<std::uint8_t>& mask, int w, int h) {
    std::size_t area = 0;
    for (const std::uint8_t v : mask) area += v;
    const double total = static_cast<double>(w) * h;
    if (area < 0.02 * total || area > 0.40 * total) return false;

    const int side = static_cast<int>(std::ceil(kSynthCornerFraction * std::min(w, h)));
    const int origins[4][2] = {{0, 0}, {w - side, 0}, {0, h - side}, {w - side, h - side}};
    std::size_t in_corners = 0;
    for (const auto& o : origins) {
        std::size_t hits = 0;
        for (int y = o[1]; y < o[1] + side; ++y) {
            for (int x = o[0]; x < o[0] + side; ++x) hits += mask[static_cast<std::size_t>(y) * w + x];
        }
        if (hits >= 0.05 * side * side) return false;
        in_corners += hits;
    }
    return in_corners < 0.05 * static_cast<double>(area);
}

EvalSample make_sample(std::uint64_t seed, int index) {
    const int w = kSynthWidth;
    const int h = kSynthHeight;
    Random rng(seed, static_cast<std::uint64_t>(index));

    const Lab background = random_color(rng);
    const double grad_angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double grad_amp = rng.uniform(3.0, 8.0);
    struct Wave {
        double fx, fy, phase, amp;
    };
    Wave waves[3];
    for (Wave& wave : waves) {
        wave = {rng.uniform(0.02, 0.12), rng.uniform(0.02, 0.12), rng.uniform(0.0, 2.0 * std::numbers::pi),
                rng.uniform(1.0, 3.0)};
    }

    std::vector<Shape> shapes;
    std::vector<std::uint8_t> mask;
    for (int attempt = 0;; ++attempt) {
        if (attempt > 10000) throw Error("synth_corpus: could not place objects");
        shapes.clear();
        const int count = rng.uniform() < 0.7 ? 1 : 2;
        for (int k = 0; k < count; ++k) {
            Shape s;
            s.ellipse = rng.uniform() < 0.6;
            s.rx = rng.uniform(16.0, count == 1 ? 70.0 : 45.0);
            s.ry = rng.uniform(14.0, count == 1 ? 55.0 : 38.0);
            s.cx = rng.uniform(0.6 * s.rx, w - 0.6 * s.rx);
            s.cy = rng.uniform(0.6 * s.ry, h - 0.6 * s.ry);
            do {
                s.color = random_color(rng);
            } while (lab_distance(s.color, background) < 40.0);
            shapes.push_back(s);
        }
        mask.assign(static_cast<std::size_t>(w) * h, 0);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                for (const Shape& s : shapes) {
                    if (s.contains(x, y)) mask[static_cast<std::size_t>(y) * w + x] = 1;
                }
            }
        }
        if (placement_ok(mask, w, h)) break;
    }

    EvalSample sample;
    char name[32];
    std::snprintf(name, sizeof(name), "synth_%04d", index);
    sample.name = name;
    sample.image = RgbImage(w, h);
    sample.mask = Mask{w, h, mask};

    const double gx = std::cos(grad_angle), gy = std::sin(grad_angle);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double u = (x - 0.5 * w) / w, v = (y - 0.5 * h) / h;
            Lab p = background;
            p.l += grad_amp * 2.0 * (gx * u + gy * v);
            for (const Wave& wave : waves) p.l += wave.amp * std::sin(wave.fx * x + wave.fy * y + wave.phase);
            for (const Shape& s : shapes) {
                if (!s.contains(x, y)) continue;
                const double du = (x - s.cx) / s.rx, dv = (y - s.cy) / s.ry;
                p = s.color;
                p.l += 6.0 * (0.5 - std::min(1.0, du * du + dv * dv));  // soft shading
            }
            p.l += 2.0 * rng.normal();
            p.a += 1.5 * rng.normal();
            p.b += 1.5 * rng.normal();
            p.l = std::clamp(p.l, 0.0, 100.0);
            const auto rgb = lab_to_rgb(p);
            std::uint8_t* out = sample.image.at(x, y);
            out[0] = rgb[0];
            out[1] = rgb[1];
            out[2] = rgb[2];
        }
    }
    return sample;
}

}  // namespace

std::vector<EvalSample> synth_corpus(std::uint64_t seed, int count) {
    if (count < 1) throw Error("synth_corpus: count must be >= 1");
    std::vector<EvalSample> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(make_sample(seed, i));
    return out;
}

void write_corpus(const std::filesystem::path& dir, const std::vector<EvalSample>& samples) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "images");
    fs::create_directories(dir / "masks");
    for (const EvalSample& s : samples) {
        write_rgb(dir / "images" / (s.name + ".png"), s.image);
        GrayImage mask{s.mask.width, s.mask.height, std::vector<std::uint8_t>(s.mask.data.size())};
        for (std::size_t i = 0; i < mask.data.size(); ++i) mask.data[i] = s.mask.data[i] ? 255 : 0;
        write_gray(dir / "masks" / (s.name + ".png"), mask);
    }
}

}  // namespace mlsal
