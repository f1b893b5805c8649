#include "mlsal/energy.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mlsal {

namespace {

constexpr double kResidualTarget = 1e-10;

using ColMatrix = Eigen::SparseMatrix<double>;

ColMatrix system_matrix(const EnergyProblem& problem) {
    const Eigen::Index n = problem.foreground.size();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(problem.weights.nonZeros() + n));
    for (Eigen::Index i = 0; i < n; ++i) {
        double degree = 0.0;
        for (SparseMatrix::InnerIterator it(problem.weights, i); it; ++it) {
            degree += it.value();
            triplets.emplace_back(i, it.col(), -2.0 * it.value());
        }
        triplets.emplace_back(i, i, problem.foreground[i] + problem.background[i] + 2.0 * degree);
    }
    ColMatrix a(n, n);
    a.setFromTriplets(triplets.begin(), triplets.end());
    a.makeCompressed();
    return a;
}

template <typename Solver>
bool solve_with(Solver& solver, const ColMatrix& a, const Eigen::VectorXd& rhs, Eigen::VectorXd& x, double& residual) {
    solver.compute(a);
    if (solver.info() != Eigen::Success) return false;
    x = solver.solve(rhs);
    if (solver.info() != Eigen::Success || !x.allFinite()) return false;
    const double scale = std::max(rhs.norm(), std::numeric_limits<double>::min());
    residual = (a * x - rhs).norm() / scale;
    for (int refine = 0; refine < 3 && residual > kResidualTarget; ++refine) {
        x += solver.solve(rhs - a * x);
        residual = (a * x - rhs).norm() / scale;
    }
    return residual <= kResidualTarget;
}

}  // namespace

std::vector<int> binarize_adaptive(std::span<const double> values) {
    std::vector<int> out(values.size(), 1);
    if (values.empty()) return out;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) return out;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] >= mean ? 1 : 0;
    return out;
}

EnergyProblem make_energy_problem(std::span<const double> xi, std::span<const int> binary, const SparseMatrix& weights,
                                  bool literal_sign) {
    const std::size_t n = xi.size();
    if (binary.size() != n || static_cast<std::size_t>(weights.rows()) != n ||
        static_cast<std::size_t>(weights.cols()) != n) {
        throw Error("make_energy_problem: size mismatch");
    }
    EnergyProblem problem;
    problem.foreground.resize(static_cast<Eigen::Index>(n));
    problem.background.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double clipped = std::clamp(xi[i], 0.0, 1.0 - kXiClip);
        const double log_term = std::log1p(-clipped);
        problem.foreground[static_cast<Eigen::Index>(i)] = literal_sign ? log_term : -log_term;
        problem.background[static_cast<Eigen::Index>(i)] = binary[i] ? 0.0 : 1.0;
    }
    problem.weights = weights;
    return problem;
}

double energy_value(const EnergyProblem& problem, const Eigen::VectorXd& s) {
    double fidelity = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        fidelity += problem.foreground[i] * (s[i] - 1.0) * (s[i] - 1.0) + problem.background[i] * s[i] * s[i];
    }
    double smooth = 0.0;
    for (Eigen::Index i = 0; i < problem.weights.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(problem.weights, i); it; ++it) {
            const double d = s[i] - s[it.col()];
            smooth += it.value() * d * d;
        }
    }
    return 0.5 * (fidelity + smooth);
}

Eigen::VectorXd energy_gradient(const EnergyProblem& problem, const Eigen::VectorXd& s) {
    Eigen::VectorXd grad = problem.foreground.cwiseProduct((s - Eigen::VectorXd::Ones(s.size()))) +
                           problem.background.cwiseProduct(s);
    for (Eigen::Index i = 0; i < problem.weights.outerSize(); ++i) {
        for (SparseMatrix::InnerIterator it(problem.weights, i); it; ++it) {
            grad[i] += 2.0 * it.value() * (s[i] - s[it.col()]);
        }
    }
    return grad;
}

EnergySolution solve_energy(const EnergyProblem& problem, std::span<const double> fallback) {
    const Eigen::Index n = problem.foreground.size();
    EnergySolution out;
    auto give_up = [&] {
        out.degenerate = true;
        out.values = Eigen::Map<const Eigen::VectorXd>(fallback.data(), static_cast<Eigen::Index>(fallback.size()));
        return out;
    };
    if (static_cast<Eigen::Index>(fallback.size()) != n) throw Error("solve_energy: fallback size mismatch");
    if ((problem.foreground.array() == 0.0).all() && (problem.background.array() == 0.0).all()) return give_up();

    const ColMatrix a = system_matrix(problem);
    const bool definite = (problem.foreground.array() >= 0.0).all();
    bool ok = false;
    if (definite) {
        Eigen::SimplicialLDLT<ColMatrix> solver;
        ok = solve_with(solver, a, problem.foreground, out.values, out.relative_residual);
    } else {
        Eigen::SparseLU<ColMatrix> solver;
        ok = solve_with(solver, a, problem.foreground, out.values, out.relative_residual);
    }
    if (!ok) return give_up();
    return out;
}

OptimizedMap optimize_energy(const RegionSaliency& xi, std::span<const int> binary, const AffinityGraph& graph,
                             bool literal_sign) {
    const EnergyProblem problem = make_energy_problem(xi.values, binary, graph.weights, literal_sign);
    const EnergySolution solution = solve_energy(problem, xi.values);
    OptimizedMap out;
    out.degenerate = solution.degenerate;
    out.saliency.values.assign(solution.values.data(), solution.values.data() + solution.values.size());
    normalize_in_place(out.saliency.values);
    return out;
}

std::vector<double> fuse_raw(const RegionSaliency& cbp, const RegionSaliency& ofp, double eta) {
    if (cbp.size() != ofp.size()) throw Error("fuse_slp: size mismatch");
    std::vector<double> out(cbp.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = cbp.values[i] * -std::expm1(-eta * ofp.values[i]);
    return out;
}

RegionSaliency fuse_slp(const RegionSaliency& cbp, const RegionSaliency& ofp, double eta) {
    return RegionSaliency{normalize_map(fuse_raw(cbp, ofp, eta))};
}

}  // namespace mlsal
