#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mlsal/image.hpp"

namespace mlsal {

enum class Corner : std::uint8_t { LeftUp = 0, RightUp = 1, LeftDown = 2, RightDown = 3, None = 4 };

inline constexpr std::array<Corner, 4> kCorners = {Corner::LeftUp, Corner::RightUp, Corner::LeftDown,
                                                   Corner::RightDown};

std::string_view corner_name(Corner corner);

/// Pixel -> region index map. Every region is non-empty and 4-connected.
struct SuperpixelLabeling {
    int width = 0;
    int height = 0;
    int region_count = 0;
    std::vector<int> labels;

    int at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

struct SlicParams {
    int region_target = 200;
    double compactness = 10.0;
    int max_iterations = 10;
};

/// SLIC clustering in (L,a,b,x,y) with grid seeding, followed by a
/// connectivity pass that keeps the largest component of every cluster and
/// merges orphan components into their largest adjacent region.
SuperpixelLabeling slic_segment(const LabImage& img, const SlicParams& params);

struct Region {
    Lab mean_lab;
    double cx = 0.0;  // centroid, normalized by (width-1, height-1)
    double cy = 0.0;
    int size = 0;
    Corner corner = Corner::None;
};

struct SuperpixelFeatures {
    int width = 0;
    int height = 0;
    std::vector<Region> regions;
    std::vector<std::vector<int>> adjacent;   // 4-connected direct neighbors, sorted
    std::vector<std::vector<int>> neighbors;  // direct neighbors plus their neighbors, sorted, self excluded

    int region_count() const { return static_cast<int>(regions.size()); }
    std::vector<int> corner_set(Corner corner) const;
};

/// Side of each corner square: ceil(corner_fraction * min(width, height)).
int corner_square_side(int width, int height, double corner_fraction);

SuperpixelFeatures extract_features(const SuperpixelLabeling& labeling, const LabImage& img,
                                    double corner_fraction);

/// Broadcasts one value per region to every pixel of that region.
PixelMap render_regions(const SuperpixelLabeling& labeling, std::span<const double> values);

/// Per-region mean of a pixel map.
std::vector<double> region_means(const SuperpixelLabeling& labeling, const PixelMap& map);

/// Region indices as 16-bit values, for debug dumps.
std::vector<std::uint16_t> labels_u16(const SuperpixelLabeling& labeling);

}  // namespace mlsal
