#pragma once

#include <cstdint>
#include <queue>
#include <string>
#include <vector>

#include "mlsal/affinity.hpp"
#include "mlsal/image.hpp"
#include "mlsal/superpixel.hpp"

namespace testutil {

inline mlsal::RgbImage solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    mlsal::RgbImage img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::uint8_t* p = img.at(x, y);
            p[0] = r;
            p[1] = g;
            p[2] = b;
        }
    }
    return img;
}

/// Blue field with a red square of side `side` centered in it.
inline mlsal::RgbImage centered_square(int w, int h, int side) {
    mlsal::RgbImage img = solid(w, h, 0, 0, 255);
    const int x0 = (w - side) / 2, y0 = (h - side) / 2;
    for (int y = y0; y < y0 + side; ++y) {
        for (int x = x0; x < x0 + side; ++x) {
            std::uint8_t* p = img.at(x, y);
            p[0] = 255;
            p[1] = 0;
            p[2] = 0;
        }
    }
    return img;
}

/// Empty string when the labeling is a partition into non-empty 4-connected
/// regions; otherwise a description of the first violation.
inline std::string labeling_violation(const mlsal::SuperpixelLabeling& lab) {
    const int w = lab.width, h = lab.height, n = lab.region_count;
    if (lab.labels.size() != static_cast<std::size_t>(w) * h) return "label count";
    std::vector<int> first(n, -1), size(n, 0);
    for (std::size_t p = 0; p < lab.labels.size(); ++p) {
        const int l = lab.labels[p];
        if (l < 0 || l >= n) return "label out of range";
        if (first[l] < 0) first[l] = static_cast<int>(p);
        ++size[l];
    }
    std::vector<char> seen(lab.labels.size(), 0);
    for (int l = 0; l < n; ++l) {
        if (first[l] < 0) return "empty region " + std::to_string(l);
        int reached = 0;
        std::queue<int> q;
        q.push(first[l]);
        seen[first[l]] = 1;
        while (!q.empty()) {
            const int p = q.front();
            q.pop();
            ++reached;
            const int x = p % w, y = p / w;
            const int nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
            for (const auto& c : nb) {
                if (c[0] < 0 || c[1] < 0 || c[0] >= w || c[1] >= h) continue;
                const int s = c[1] * w + c[0];
                if (!seen[s] && lab.labels[s] == l) {
                    seen[s] = 1;
                    q.push(s);
                }
            }
        }
        if (reached != size[l]) return "region " + std::to_string(l) + " not 4-connected";
    }
    return {};
}

/// Empty string when W is symmetric with zero diagonal and G is row-stochastic.
inline std::string graph_violation(const mlsal::AffinityGraph& g) {
    const Eigen::MatrixXd w = Eigen::MatrixXd(g.weights);
    const Eigen::MatrixXd n = Eigen::MatrixXd(g.normalized);
    for (int i = 0; i < w.rows(); ++i) {
        if (w(i, i) != 0.0) return "non-zero diagonal";
        for (int j = 0; j < w.cols(); ++j) {
            if (w(i, j) != w(j, i)) return "asymmetric W";
            if (w(i, j) < 0.0 || w(i, j) > 1.0) return "weight out of [0,1]";
        }
        if (std::abs(n.row(i).sum() - 1.0) > 1e-9) return "row sum of G";
    }
    return {};
}

inline std::string adjacency_violation(const mlsal::SuperpixelFeatures& f) {
    auto contains = [](const std::vector<int>& v, int x) {
        for (int y : v) {
            if (y == x) return true;
        }
        return false;
    };
    for (int i = 0; i < f.region_count(); ++i) {
        for (int j : f.adjacent[i]) {
            if (!contains(f.adjacent[j], i)) return "adjacency asymmetric";
        }
        for (int j : f.neighbors[i]) {
            if (j == i || !contains(f.neighbors[j], i)) return "neighborhood asymmetric";
        }
    }
    return {};
}

}  // namespace testutil
