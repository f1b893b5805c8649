#include "mlsal/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mlsal {

double affinity_kernel(double distance, double sigma, bool squared_distance) {
    const double d = squared_distance ? distance * distance : distance;
    return std::exp(-d / (2.0 * sigma * sigma));
}

AffinityGraph build_affinity(const SuperpixelFeatures& features, const AffinityParams& params) {
    if (!(params.sigma_color > 0.0) || !(params.sigma_spatial > 0.0)) {
        throw Error("build_affinity: bandwidths must be > 0");
    }
    const int n = features.region_count();

    AffinityGraph graph;
    graph.region_count = n;
    std::vector<char> is_background(n, 0);
    for (int i = 0; i < n; ++i) {
        const Corner corner = features.regions[i].corner;
        if (corner == Corner::None) continue;
        graph.corner_sets[static_cast<std::size_t>(corner)].push_back(i);
        graph.background.push_back(i);
        is_background[i] = 1;
    }

    std::vector<std::array<double, 3>> color(n);
    for (int i = 0; i < n; ++i) color[i] = scaled_lab(features.regions[i].mean_lab);

    auto weight = [&](int i, int j) {
        const double dl = color[i][0] - color[j][0];
        const double da = color[i][1] - color[j][1];
        const double db = color[i][2] - color[j][2];
        const double dx = features.regions[i].cx - features.regions[j].cx;
        const double dy = features.regions[i].cy - features.regions[j].cy;
        const double c = affinity_kernel(std::sqrt(dl * dl + da * da + db * db), params.sigma_color,
                                         params.squared_distance);
        const double s = affinity_kernel(std::sqrt(dx * dx + dy * dy), params.sigma_spatial,
                                         params.squared_distance);
        return c * s;
    };

    std::vector<Eigen::Triplet<double>> triplets;
    std::vector<int> row;
    for (int i = 0; i < n; ++i) {
        row = features.neighbors[i];
        if (is_background[i]) row.insert(row.end(), graph.background.begin(), graph.background.end());
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        for (const int j : row) {
            if (j == i) continue;
            triplets.emplace_back(i, j, weight(i, j));
        }
    }
    graph.weights.resize(n, n);
    graph.weights.setFromTriplets(triplets.begin(), triplets.end());
    graph.weights.makeCompressed();
    row_normalize(graph);
    return graph;
}

void row_normalize(AffinityGraph& graph) {
    const int n = static_cast<int>(graph.weights.rows());
    graph.degrees = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        for (SparseMatrix::InnerIterator it(graph.weights, i); it; ++it) graph.degrees[i] += it.value();
    }
    graph.normalized = graph.weights;
    for (int i = 0; i < n; ++i) {
        if (!(graph.degrees[i] > 0.0)) {
            std::ostringstream msg;
            msg << "row_normalize: region " << i << " has zero degree";
            throw Error(msg.str());
        }
        const double inv = 1.0 / graph.degrees[i];
        for (SparseMatrix::InnerIterator it(graph.normalized, i); it; ++it) it.valueRef() *= inv;
    }
}

AffinityGraph graph_from_dense(const Eigen::MatrixXd& weights, std::array<std::vector<int>, 4> corner_sets) {
    AffinityGraph graph;
    graph.region_count = static_cast<int>(weights.rows());
    graph.weights = weights.sparseView();
    graph.weights.makeCompressed();
    for (const auto& set : corner_sets) graph.background.insert(graph.background.end(), set.begin(), set.end());
    std::sort(graph.background.begin(), graph.background.end());
    graph.corner_sets = std::move(corner_sets);
    row_normalize(graph);
    return graph;
}

}  // namespace mlsal
