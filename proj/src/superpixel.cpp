#include "mlsal/superpixel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace mlsal {

namespace {

struct Center {
    double l, a, b, x, y;
};

double color_dist2(const Lab& p, const Center& c) {
    const double dl = p.l - c.l;
    const double da = p.a - c.a;
    const double db = p.b - c.b;
    return dl * dl + da * da + db * db;
}

double lab_dist2(const Lab& p, const Lab& q) {
    const double dl = p.l - q.l;
    const double da = p.a - q.a;
    const double db = p.b - q.b;
    return dl * dl + da * da + db * db;
}

std::vector<Center> seed_centers(const LabImage& img, double step) {
    const int w = img.width;
    const int h = img.height;
    const int cols = std::max(1, static_cast<int>(std::lround(w / step)));
    const int rows = std::max(1, static_cast<int>(std::lround(h / step)));
    const double sx = static_cast<double>(w) / cols;
    const double sy = static_cast<double>(h) / rows;

    auto gradient = [&](int x, int y) {
        const int xl = std::max(0, x - 1), xr = std::min(w - 1, x + 1);
        const int yu = std::max(0, y - 1), yd = std::min(h - 1, y + 1);
        return lab_dist2(img.at(xr, y), img.at(xl, y)) + lab_dist2(img.at(x, yd), img.at(x, yu));
    };

    std::vector<Center> centers;
    centers.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            int bx = std::min(w - 1, static_cast<int>((c + 0.5) * sx));
            int by = std::min(h - 1, static_cast<int>((r + 0.5) * sy));
            // Move the seed to the lowest-gradient pixel of its 3x3 neighborhood.
            double best = gradient(bx, by);
            const int ox = bx, oy = by;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int x = ox + dx, y = oy + dy;
                    if (x < 0 || y < 0 || x >= w || y >= h) continue;
                    const double g = gradient(x, y);
                    if (g < best) {
                        best = g;
                        bx = x;
                        by = y;
                    }
                }
            }
            const Lab& p = img.at(bx, by);
            centers.push_back({p.l, p.a, p.b, static_cast<double>(bx), static_cast<double>(by)});
        }
    }
    return centers;
}

std::vector<int> initial_labels(int w, int h, double step) {
    const int cols = std::max(1, static_cast<int>(std::lround(w / step)));
    const int rows = std::max(1, static_cast<int>(std::lround(h / step)));
    const double sx = static_cast<double>(w) / cols;
    const double sy = static_cast<double>(h) / rows;
    std::vector<int> labels(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        const int r = std::min(rows - 1, static_cast<int>(y / sy));
        for (int x = 0; x < w; ++x) {
            const int c = std::min(cols - 1, static_cast<int>(x / sx));
            labels[static_cast<std::size_t>(y) * w + x] = r * cols + c;
        }
    }
    return labels;
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    int find(int i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }
    void attach(int child, int root) { parent_[find(child)] = find(root); }

private:
    std::vector<int> parent_;
};

// Splits every cluster into 4-connected components, keeps the largest piece
// of each cluster and merges the rest into the largest adjacent kept region.
// Returns contiguous labels in raster order of first appearance.
int enforce_connectivity(int w, int h, std::vector<int>& labels) {
    const std::size_t n = labels.size();
    std::vector<int> comp(n, -1);
    std::vector<int> comp_label;
    std::vector<int> comp_size;
    std::vector<std::vector<int>> comp_pixels;
    std::vector<int> stack;

    for (std::size_t start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        const int id = static_cast<int>(comp_label.size());
        const int label = labels[start];
        comp_label.push_back(label);
        comp_pixels.emplace_back();
        auto& pixels = comp_pixels.back();
        comp[start] = id;
        stack.assign(1, static_cast<int>(start));
        while (!stack.empty()) {
            const int p = stack.back();
            stack.pop_back();
            pixels.push_back(p);
            const int x = p % w, y = p / w;
            const int nbrs[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
            for (const auto& q : nbrs) {
                if (q[0] < 0 || q[1] < 0 || q[0] >= w || q[1] >= h) continue;
                const int qi = q[1] * w + q[0];
                if (comp[qi] < 0 && labels[qi] == label) {
                    comp[qi] = id;
                    stack.push_back(qi);
                }
            }
        }
        comp_size.push_back(static_cast<int>(pixels.size()));
    }

    const int comp_count = static_cast<int>(comp_label.size());
    // Largest component per cluster label; ties go to the first found.
    std::vector<int> best_of_label;
    for (int c = 0; c < comp_count; ++c) {
        const int label = comp_label[c];
        if (label >= static_cast<int>(best_of_label.size())) best_of_label.resize(label + 1, -1);
        const int cur = best_of_label[label];
        if (cur < 0 || comp_size[c] > comp_size[cur]) best_of_label[label] = c;
    }
    std::vector<char> resolved(comp_count, 0);
    for (int c = 0; c < comp_count; ++c) resolved[c] = best_of_label[comp_label[c]] == c;

    DisjointSets sets(comp_count);
    std::vector<int> region_size = comp_size;
    bool pending = true;
    while (pending) {
        pending = false;
        bool progress = false;
        for (int c = 0; c < comp_count; ++c) {
            if (resolved[c]) continue;
            int target = -1;
            for (const int p : comp_pixels[c]) {
                const int x = p % w, y = p / w;
                const int nbrs[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
                for (const auto& q : nbrs) {
                    if (q[0] < 0 || q[1] < 0 || q[0] >= w || q[1] >= h) continue;
                    const int other = comp[q[1] * w + q[0]];
                    if (other == c || !resolved[other]) continue;
                    const int root = sets.find(other);
                    if (target < 0 || region_size[root] > region_size[target] ||
                        (region_size[root] == region_size[target] && root < target)) {
                        target = root;
                    }
                }
            }
            if (target < 0) {
                pending = true;
                continue;
            }
            sets.attach(c, target);
            region_size[target] += comp_size[c];
            resolved[c] = 1;
            progress = true;
        }
        if (pending && !progress) throw Error("slic_segment: connectivity pass did not converge");
    }

    std::vector<int> final_id(comp_count, -1);
    int next = 0;
    for (std::size_t p = 0; p < n; ++p) {
        const int root = sets.find(comp[p]);
        if (final_id[root] < 0) final_id[root] = next++;
        labels[p] = final_id[root];
    }
    return next;
}

}  // namespace

std::string_view corner_name(Corner corner) {
    switch (corner) {
        case Corner::LeftUp: return "LU";
        case Corner::RightUp: return "RU";
        case Corner::LeftDown: return "LD";
        case Corner::RightDown: return "RD";
        case Corner::None: break;
    }
    return "none";
}

SuperpixelLabeling slic_segment(const LabImage& img, const SlicParams& params) {
    const int w = img.width;
    const int h = img.height;
    if (w < kMinImageSide || h < kMinImageSide) throw Error("slic_segment: image smaller than 8x8");
    const long long pixels = static_cast<long long>(w) * h;
    if (params.region_target < 16 || params.region_target > pixels / 16) {
        std::ostringstream msg;
        msg << "slic_segment: region target " << params.region_target << " outside [16, " << pixels / 16 << "]";
        throw Error(msg.str());
    }
    if (!(params.compactness > 0.0)) throw Error("slic_segment: compactness must be > 0");
    if (params.max_iterations < 1) throw Error("slic_segment: max_iterations must be >= 1");

    const double step = std::sqrt(static_cast<double>(pixels) / params.region_target);
    std::vector<Center> centers = seed_centers(img, step);
    std::vector<int> labels = initial_labels(w, h, step);
    std::vector<double> dist(labels.size());
    const double spatial_weight = (params.compactness / step) * (params.compactness / step);
    const int reach = static_cast<int>(std::ceil(step));

    for (int iter = 0; iter < params.max_iterations; ++iter) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        for (std::size_t k = 0; k < centers.size(); ++k) {
            const Center& c = centers[k];
            const int x0 = std::max(0, static_cast<int>(c.x) - reach);
            const int x1 = std::min(w - 1, static_cast<int>(c.x) + reach);
            const int y0 = std::max(0, static_cast<int>(c.y) - reach);
            const int y1 = std::min(h - 1, static_cast<int>(c.y) + reach);
            for (int y = y0; y <= y1; ++y) {
                for (int x = x0; x <= x1; ++x) {
                    const std::size_t p = static_cast<std::size_t>(y) * w + x;
                    const double dx = x - c.x, dy = y - c.y;
                    const double d = color_dist2(img.data[p], c) + spatial_weight * (dx * dx + dy * dy);
                    if (d < dist[p]) {
                        dist[p] = d;
                        labels[p] = static_cast<int>(k);
                    }
                }
            }
        }

        std::vector<Center> sums(centers.size(), Center{0, 0, 0, 0, 0});
        std::vector<int> counts(centers.size(), 0);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const std::size_t p = static_cast<std::size_t>(y) * w + x;
                Center& s = sums[labels[p]];
                const Lab& lab = img.data[p];
                s.l += lab.l;
                s.a += lab.a;
                s.b += lab.b;
                s.x += x;
                s.y += y;
                ++counts[labels[p]];
            }
        }
        for (std::size_t k = 0; k < centers.size(); ++k) {
            if (counts[k] == 0) continue;
            const double inv = 1.0 / counts[k];
            centers[k] = {sums[k].l * inv, sums[k].a * inv, sums[k].b * inv, sums[k].x * inv, sums[k].y * inv};
        }
    }

    SuperpixelLabeling out;
    out.width = w;
    out.height = h;
    out.region_count = enforce_connectivity(w, h, labels);
    out.labels = std::move(labels);
    return out;
}

int corner_square_side(int width, int height, double corner_fraction) {
    return static_cast<int>(std::ceil(corner_fraction * std::min(width, height)));
}

std::vector<int> SuperpixelFeatures::corner_set(Corner corner) const {
    std::vector<int> out;
    for (int i = 0; i < region_count(); ++i) {
        if (regions[i].corner == corner) out.push_back(i);
    }
    return out;
}

SuperpixelFeatures extract_features(const SuperpixelLabeling& labeling, const LabImage& img,
                                    double corner_fraction) {
    check_same_size(labeling.width, labeling.height, img.width, img.height, "extract_features");
    if (!(corner_fraction > 0.0 && corner_fraction < 0.5)) {
        throw Error("extract_features: corner_fraction must lie in (0, 0.5)");
    }
    const int w = labeling.width;
    const int h = labeling.height;
    const int n = labeling.region_count;
    const int side = corner_square_side(w, h, corner_fraction);

    SuperpixelFeatures f;
    f.width = w;
    f.height = h;
    f.regions.resize(n);
    std::vector<std::array<double, 5>> sums(n, {0, 0, 0, 0, 0});
    std::vector<std::array<int, 4>> corner_hits(n, {0, 0, 0, 0});
    std::vector<std::vector<int>> adjacent(n);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int label = labeling.at(x, y);
            const Lab& lab = img.at(x, y);
            auto& s = sums[label];
            s[0] += lab.l;
            s[1] += lab.a;
            s[2] += lab.b;
            s[3] += x;
            s[4] += y;
            ++f.regions[label].size;

            const bool left = x < side, right = x >= w - side;
            const bool up = y < side, down = y >= h - side;
            if (left && up) ++corner_hits[label][0];
            if (right && up) ++corner_hits[label][1];
            if (left && down) ++corner_hits[label][2];
            if (right && down) ++corner_hits[label][3];

            if (x + 1 < w) {
                const int other = labeling.at(x + 1, y);
                if (other != label) {
                    adjacent[label].push_back(other);
                    adjacent[other].push_back(label);
                }
            }
            if (y + 1 < h) {
                const int other = labeling.at(x, y + 1);
                if (other != label) {
                    adjacent[label].push_back(other);
                    adjacent[other].push_back(label);
                }
            }
        }
    }

    const double sx = w > 1 ? 1.0 / (w - 1) : 0.0;
    const double sy = h > 1 ? 1.0 / (h - 1) : 0.0;
    for (int i = 0; i < n; ++i) {
        Region& r = f.regions[i];
        if (r.size == 0) throw Error("extract_features: empty region in labeling");
        const double inv = 1.0 / r.size;
        r.mean_lab = {sums[i][0] * inv, sums[i][1] * inv, sums[i][2] * inv};
        r.cx = sums[i][3] * inv * sx;
        r.cy = sums[i][4] * inv * sy;

        int best = -1;
        for (int c = 0; c < 4; ++c) {
            if (corner_hits[i][c] > 0 && (best < 0 || corner_hits[i][c] > corner_hits[i][best])) best = c;
        }
        r.corner = best < 0 ? Corner::None : kCorners[best];

        auto& adj = adjacent[i];
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }

    f.neighbors.resize(n);
    for (int i = 0; i < n; ++i) {
        std::vector<int> hood = adjacent[i];
        for (const int j : adjacent[i]) hood.insert(hood.end(), adjacent[j].begin(), adjacent[j].end());
        std::sort(hood.begin(), hood.end());
        hood.erase(std::unique(hood.begin(), hood.end()), hood.end());
        hood.erase(std::remove(hood.begin(), hood.end(), i), hood.end());
        f.neighbors[i] = std::move(hood);
    }
    f.adjacent = std::move(adjacent);
    return f;
}

PixelMap render_regions(const SuperpixelLabeling& labeling, std::span<const double> values) {
    if (values.size() != static_cast<std::size_t>(labeling.region_count)) {
        throw Error("render_regions: value count does not match region count");
    }
    PixelMap out(labeling.width, labeling.height);
    for (std::size_t p = 0; p < out.data.size(); ++p) out.data[p] = values[labeling.labels[p]];
    return out;
}

std::vector<double> region_means(const SuperpixelLabeling& labeling, const PixelMap& map) {
    check_same_size(labeling.width, labeling.height, map.width, map.height, "region_means");
    std::vector<double> sums(labeling.region_count, 0.0);
    std::vector<int> counts(labeling.region_count, 0);
    for (std::size_t p = 0; p < map.data.size(); ++p) {
        sums[labeling.labels[p]] += map.data[p];
        ++counts[labeling.labels[p]];
    }
    for (int i = 0; i < labeling.region_count; ++i) {
        if (counts[i] == 0) throw Error("region_means: empty region in labeling");
        sums[i] /= counts[i];
    }
    return sums;
}

std::vector<std::uint16_t> labels_u16(const SuperpixelLabeling& labeling) {
    std::vector<std::uint16_t> out(labeling.labels.size());
    std::transform(labeling.labels.begin(), labeling.labels.end(), out.begin(),
                   [](int v) { return static_cast<std::uint16_t>(v); });
    return out;
}

}  // namespace mlsal
