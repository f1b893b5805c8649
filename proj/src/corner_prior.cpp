#include "mlsal/corner_prior.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace mlsal {

RegionSaliency region_prior(const SuperpixelFeatures& features, RegionPriorMode mode) {
    RegionSaliency out{std::vector<double>(features.regions.size(), 1.0)};
    if (mode == RegionPriorMode::Luma) {
        for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = features.regions[i].mean_lab.l / 100.0;
    }
    return out;
}

RegionSaliency corner_saliency(const AffinityGraph& graph, Corner corner, const RegionSaliency& prior) {
    const std::vector<int>& seeds = graph.corner_set(corner);
    if (seeds.empty()) throw Error("corner_saliency: empty corner set " + std::string(corner_name(corner)));
    if (prior.size() != static_cast<std::size_t>(graph.region_count)) {
        throw Error("corner_saliency: prior size does not match region count");
    }

    std::vector<char> in_corner(graph.region_count, 0);
    for (const int j : seeds) in_corner[j] = 1;

    const double inv_n = 1.0 / static_cast<double>(seeds.size());
    RegionSaliency out{std::vector<double>(graph.region_count)};
    for (int i = 0; i < graph.region_count; ++i) {
        double mass = 0.0;
        for (SparseMatrix::InnerIterator it(graph.normalized, i); it; ++it) {
            if (in_corner[it.col()]) mass += it.value();
        }
        out.values[i] = (1.0 - mass * inv_n) * prior.values[i];
    }
    return out;
}

RegionSaliency combine_corners(const RegionSaliency& lu, const RegionSaliency& ru, const RegionSaliency& ld,
                               const RegionSaliency& rd) {
    const std::size_t n = lu.size();
    if (ru.size() != n || ld.size() != n || rd.size() != n) throw Error("combine_corners: size mismatch");
    RegionSaliency out{std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        // Fixed multiplication order keeps the result bit-identical under any
        // permutation of the inputs.
        std::array<double, 4> f = {lu.values[i], ru.values[i], ld.values[i], rd.values[i]};
        std::sort(f.begin(), f.end());
        out.values[i] = ((f[0] * f[1]) * f[2]) * f[3];
    }
    normalize_in_place(out.values);
    return out;
}

RegionSaliency corner_background_prior(const AffinityGraph& graph, const RegionSaliency& prior) {
    return combine_corners(corner_saliency(graph, Corner::LeftUp, prior),
                           corner_saliency(graph, Corner::RightUp, prior),
                           corner_saliency(graph, Corner::LeftDown, prior),
                           corner_saliency(graph, Corner::RightDown, prior));
}

}  // namespace mlsal
