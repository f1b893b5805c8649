#pragma once

#include <vector>

#include "mlsal/corner_prior.hpp"
#include "mlsal/superpixel.hpp"

namespace mlsal {

/// Candidate object window; bounds are [x0,x1) x [y0,y1).
struct WindowCandidate {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;
    double score = 0.0;  // P_h in [0,1]

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    long long area() const { return static_cast<long long>(width()) * height(); }
};

inline constexpr long long kMinWindowArea = 64;

/// Sliding-window proposal generator.
///
/// Windows come from a fixed grid: sides {0.2, 0.35, 0.5, 0.7, 0.9} of
/// min(width, height), aspect ratios {0.5, 1, 2} (width/height), and a
/// stride of 1/8 of the window extent along each axis. Each window is scored
/// by the distance between the mean scaled-Lab color of the superpixel-
/// averaged image inside it and the same mean over its surround, the ring
/// between the window and its 2x dilation (clipped to the image). Scores are
/// divided by the best raw score, and the top `count` windows are returned
/// in descending score order (ties by generation order).
std::vector<WindowCandidate> propose_windows(const LabImage& img, const SuperpixelLabeling& labeling,
                                             const SuperpixelFeatures& features, int count);

struct ObjectnessResult {
    PixelMap pixel_map;                 // normalized W(p)
    std::vector<double> accuracy;       // psi_h per window
    double center_x = 0.0;              // CBP object center used for every window
    double center_y = 0.0;
    std::vector<double> region_raw;     // per-region mean of pixel_map
    RegionSaliency region_map;          // normalized region_raw (OFP)
};

/// Saliency-weighted centroid of the pixels at or above the map mean.
/// Falls back to the image center when the map carries no mass.
std::pair<double, double> object_center(const PixelMap& cbp);

/// psi_h = sum_{p in window} v(p) / (|window| + beta).
double window_accuracy(const WindowCandidate& window, const PixelMap& cbp, double beta);

/// Pixel objectness: every window contributes P_h * psi_h times a Gaussian
/// centered on the CBP object center with sigma = half the window extent.
/// Fills pixel_map (normalized), accuracy and the center.
ObjectnessResult pixel_objectness(const std::vector<WindowCandidate>& windows, const PixelMap& cbp, double beta);

/// Region pooling of the pixel map; fills region_raw and region_map.
void region_objectness(ObjectnessResult& result, const SuperpixelLabeling& labeling);

}  // namespace mlsal
