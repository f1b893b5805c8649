#pragma once

#include <vector>

#include <Eigen/Core>

#include "mlsal/affinity.hpp"
#include "mlsal/corner_prior.hpp"

namespace mlsal {

inline constexpr double kXiClip = 1e-3;

/// T_i = 1 iff value_i >= mean. A constant map is all ones.
std::vector<int> binarize_adaptive(std::span<const double> values);

/// Quadratic energy over region values s:
///
///   E(s) = 1/2 [ sum_i a_i (s_i - 1)^2 + sum_i (1 - T_i) s_i^2
///                + sum_{i,j} w_ij (s_i - s_j)^2 ]
///
/// with the smoothness sum running over ordered pairs, so its gradient is
/// 2 L s for the graph Laplacian L = D - W.
struct EnergyProblem {
    Eigen::VectorXd foreground;  // a_i
    Eigen::VectorXd background;  // 1 - T_i
    SparseMatrix weights;        // symmetric, zero diagonal
};

/// a_i = -log(1 - clip(xi_i)). With `literal_sign` the sign is flipped to
/// log(1 - xi_i), which makes the foreground term a reward.
EnergyProblem make_energy_problem(std::span<const double> xi, std::span<const int> binary, const SparseMatrix& weights,
                                  bool literal_sign = false);

double energy_value(const EnergyProblem& problem, const Eigen::VectorXd& s);
Eigen::VectorXd energy_gradient(const EnergyProblem& problem, const Eigen::VectorXd& s);

struct EnergySolution {
    Eigen::VectorXd values;     // stationary point, unnormalized
    double relative_residual = 0.0;
    bool degenerate = false;    // system singular; values hold the input map
};

/// Solves (Diag(a) + Diag(1-T) + 2L) s = a.
EnergySolution solve_energy(const EnergyProblem& problem, std::span<const double> fallback);

struct OptimizedMap {
    RegionSaliency saliency;  // normalized
    bool degenerate = false;
};

/// Minimizes the energy of map `xi` with indicator `binary` over the edges of
/// `graph`; the solution is normalized to [0,1].
OptimizedMap optimize_energy(const RegionSaliency& xi, std::span<const int> binary, const AffinityGraph& graph,
                             bool literal_sign = false);

/// cbp * (1 - exp(-eta * ofp)) before normalization.
std::vector<double> fuse_raw(const RegionSaliency& cbp, const RegionSaliency& ofp, double eta);
RegionSaliency fuse_slp(const RegionSaliency& cbp, const RegionSaliency& ofp, double eta);

}  // namespace mlsal
