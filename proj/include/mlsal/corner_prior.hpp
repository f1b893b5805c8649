#pragma once

#include <vector>

#include "mlsal/affinity.hpp"

namespace mlsal {

/// One scalar per superpixel region.
struct RegionSaliency {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

enum class RegionPriorMode { Constant, Luma };

/// Per-region weight f(i): 1 everywhere, or mean lightness L/100 of the region.
RegionSaliency region_prior(const SuperpixelFeatures& features, RegionPriorMode mode);

/// (1 - mean_{j in corner set} g_ij) * f(i) for every region.
RegionSaliency corner_saliency(const AffinityGraph& graph, Corner corner, const RegionSaliency& prior);

/// Elementwise product of the four corner maps, min-max normalized.
RegionSaliency combine_corners(const RegionSaliency& lu, const RegionSaliency& ru, const RegionSaliency& ld,
                               const RegionSaliency& rd);

/// Corner-background prior map for a graph.
RegionSaliency corner_background_prior(const AffinityGraph& graph, const RegionSaliency& prior);

}  // namespace mlsal
