#pragma once

#include <vector>

#include <Eigen/Core>

#include "mlsal/image.hpp"

namespace mlsal {

/// Per-scale maps and the statistics used to weight them.
struct ScaleStack {
    std::vector<PixelMap> maps;
    Eigen::MatrixXd similarity;       // SM, M x M
    Eigen::VectorXd judgment;         // y_m = mean_n SM_mn
    Eigen::VectorXd weights;          // y with the least similar entry set to 1
    int least_similar = 0;
};

/// Binarizes each map at its mean and returns the fraction of pixels on
/// which each pair of binarized maps agrees.
Eigen::MatrixXd similarity_matrix(const std::vector<PixelMap>& maps);

/// y with its smallest entry (the first one on ties) replaced by 1.
Eigen::VectorXd emphasize_least_similar(const Eigen::VectorXd& judgment, int* index = nullptr);

/// Computes SM, y, the argmin (ties to the lowest index) and the weights.
ScaleStack make_scale_stack(std::vector<PixelMap> maps);

/// normalize(sum_m weights_m * map_m), before refinement.
PixelMap weighted_fusion(const ScaleStack& stack);

/// normalize(mean_m map_m), the plain averaging baseline.
PixelMap mean_fusion(const std::vector<PixelMap>& maps);

/// Guided-filter refinement steered by the input lightness, then normalize.
PixelMap refine_map(const LabImage& guide, const PixelMap& map, int radius, double eps);

/// Weighted fusion followed by refinement.
PixelMap integrate_multilayer(const ScaleStack& stack, const LabImage& guide, int radius, double eps);

}  // namespace mlsal
