#include "mlsal/multilayer.hpp"

#include <algorithm>
#include <cstdint>

#include "mlsal/energy.hpp"

namespace mlsal {

namespace {

std::vector<std::vector<int>> binarize_maps(const std::vector<PixelMap>& maps) {
    std::vector<std::vector<int>> out;
    out.reserve(maps.size());
    for (const PixelMap& map : maps) {
        check_same_size(maps.front().width, maps.front().height, map.width, map.height, "similarity_matrix");
        out.push_back(binarize_adaptive(map.data));
    }
    return out;
}

// Per-pixel weighted sum with the terms added in sorted order, so the result
// does not depend on the order of the maps.
PixelMap sorted_sum(const std::vector<PixelMap>& maps, const std::vector<double>& weights) {
    PixelMap out(maps.front().width, maps.front().height);
    std::vector<double> terms(maps.size());
    for (const PixelMap& map : maps) check_same_size(out.width, out.height, map.width, map.height, "fusion");
    for (std::size_t p = 0; p < out.data.size(); ++p) {
        for (std::size_t m = 0; m < maps.size(); ++m) terms[m] = weights[m] * maps[m].data[p];
        std::sort(terms.begin(), terms.end());
        double sum = 0.0;
        for (const double t : terms) sum += t;
        out.data[p] = sum;
    }
    return out;
}

std::vector<std::vector<std::int64_t>> agreement_counts(const std::vector<PixelMap>& maps) {
    const auto binary = binarize_maps(maps);
    const std::size_t m = maps.size();
    std::vector<std::vector<std::int64_t>> counts(m, std::vector<std::int64_t>(m, 0));
    for (std::size_t i = 0; i < m; ++i) {
        counts[i][i] = static_cast<std::int64_t>(binary[i].size());
        for (std::size_t j = i + 1; j < m; ++j) {
            std::int64_t agree = 0;
            for (std::size_t p = 0; p < binary[i].size(); ++p) agree += binary[i][p] == binary[j][p];
            counts[i][j] = counts[j][i] = agree;
        }
    }
    return counts;
}

}  // namespace

Eigen::MatrixXd similarity_matrix(const std::vector<PixelMap>& maps) {
    if (maps.empty()) return {};
    const auto counts = agreement_counts(maps);
    const double pixels = static_cast<double>(maps.front().pixel_count());
    const auto m = static_cast<Eigen::Index>(maps.size());
    Eigen::MatrixXd sm(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) sm(i, j) = static_cast<double>(counts[i][j]) / pixels;
    }
    return sm;
}

ScaleStack make_scale_stack(std::vector<PixelMap> maps) {
    if (maps.empty()) throw Error("make_scale_stack: no maps");
    ScaleStack stack;
    const auto counts = agreement_counts(maps);
    const auto m = static_cast<Eigen::Index>(maps.size());
    const double pixels = static_cast<double>(maps.front().pixel_count());

    stack.similarity.resize(m, m);
    stack.judgment.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        std::int64_t total = 0;
        for (Eigen::Index j = 0; j < m; ++j) {
            stack.similarity(i, j) = static_cast<double>(counts[i][j]) / pixels;
            total += counts[i][j];
        }
        // One division of an exact integer total, so equal totals give equal y.
        stack.judgment[i] = static_cast<double>(total) / (pixels * static_cast<double>(m));
    }
    stack.weights = emphasize_least_similar(stack.judgment, &stack.least_similar);
    stack.maps = std::move(maps);
    return stack;
}

Eigen::VectorXd emphasize_least_similar(const Eigen::VectorXd& judgment, int* index) {
    if (judgment.size() == 0) throw Error("emphasize_least_similar: empty judgment vector");
    int least = 0;
    for (Eigen::Index i = 1; i < judgment.size(); ++i) {
        if (judgment[i] < judgment[least]) least = static_cast<int>(i);
    }
    Eigen::VectorXd weights = judgment;
    weights[least] = 1.0;
    if (index) *index = least;
    return weights;
}

PixelMap weighted_fusion(const ScaleStack& stack) {
    std::vector<double> weights(stack.weights.data(), stack.weights.data() + stack.weights.size());
    return normalize_map(sorted_sum(stack.maps, weights));
}

PixelMap mean_fusion(const std::vector<PixelMap>& maps) {
    if (maps.empty()) throw Error("mean_fusion: no maps");
    const double inv = 1.0 / static_cast<double>(maps.size());
    return normalize_map(sorted_sum(maps, std::vector<double>(maps.size(), inv)));
}

PixelMap refine_map(const LabImage& guide, const PixelMap& map, int radius, double eps) {
    return normalize_map(guided_filter(guide, map, radius, eps));
}

PixelMap integrate_multilayer(const ScaleStack& stack, const LabImage& guide, int radius, double eps) {
    return refine_map(guide, weighted_fusion(stack), radius, eps);
}

}  // namespace mlsal
