#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "mlsal/superpixel.hpp"

namespace mlsal {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct AffinityParams {
    double sigma_color = 0.1;    // bandwidth on [0,1]-scaled Lab
    double sigma_spatial = 0.25; // bandwidth on normalized coordinates
    bool squared_distance = false;
};

/// Region graph: weights W, degrees D and the row-normalized G = D^-1 W.
/// Edges join 2-hop neighbors and every pair of corner (background) regions.
struct AffinityGraph {
    int region_count = 0;
    SparseMatrix weights;
    Eigen::VectorXd degrees;
    SparseMatrix normalized;
    std::array<std::vector<int>, 4> corner_sets;  // indexed by Corner
    std::vector<int> background;                  // union of the corner sets, sorted

    const std::vector<int>& corner_set(Corner corner) const {
        return corner_sets[static_cast<std::size_t>(corner)];
    }
};

/// exp(-d / (2 sigma^2)) with d the Euclidean (or squared) distance.
double affinity_kernel(double distance, double sigma, bool squared_distance);

/// Builds W from region features; degrees and G are filled by row_normalize.
AffinityGraph build_affinity(const SuperpixelFeatures& features, const AffinityParams& params);

/// Fills degrees and the row-normalized matrix. Throws on a zero-degree row.
void row_normalize(AffinityGraph& graph);

/// Assembles a graph from explicit symmetric weights (fixtures, experiments).
AffinityGraph graph_from_dense(const Eigen::MatrixXd& weights, std::array<std::vector<int>, 4> corner_sets = {});

}  // namespace mlsal
