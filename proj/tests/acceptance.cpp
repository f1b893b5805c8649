// Acceptance run: prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "helpers.hpp"
#include "mlsal/bench.hpp"
#include "mlsal/pipeline.hpp"
#include "mlsal/synth.hpp"
#include "oracles.hpp"

using namespace mlsal;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail = " " + what + ";";
        pass = pass && ok;
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

const std::vector<EvalSample>& corpus() {
    static const std::vector<EvalSample> samples = synth_corpus(7, 50);
    return samples;
}

EnergyProblem problem_of(const oracle::EnergyInstance& e) {
    const SparseMatrix w = e.w.sparseView();
    return make_energy_problem(e.xi, e.binary, w);
}

Outcome energy_oracle() {
    Outcome o;
    std::mt19937_64 rng(2024);
    double worst = 0.0, worst_grad = 0.0;
    for (int k = 0; k < 100; ++k) {
        const auto e = oracle::random_instance(rng, 10);
        const EnergyProblem p = problem_of(e);
        const EnergySolution s = solve_energy(p, e.xi);
        o.require(!s.degenerate, "degenerate random instance");
        const auto ref = oracle::descend(e);
        for (int i = 0; i < 10; ++i) worst = std::max(worst, std::abs(s.values[i] - ref[i]));

        std::uniform_real_distribution<double> u(0.0, 1.0);
        Eigen::VectorXd x(10);
        for (int i = 0; i < 10; ++i) x[i] = u(rng);
        const Eigen::VectorXd g = energy_gradient(p, x);
        Eigen::VectorXd fd(10);
        const double h = 1e-5;
        for (int i = 0; i < 10; ++i) {
            std::vector<double> up(x.data(), x.data() + 10), down = up;
            up[i] += h;
            down[i] -= h;
            fd[i] = (oracle::energy(e, up) - oracle::energy(e, down)) / (2 * h);
        }
        worst_grad = std::max(worst_grad, (g - fd).norm() / std::max(g.norm(), 1e-300));
    }
    o.require(worst <= 1e-6, "solution differs from descent");
    o.require(worst_grad <= 1e-5, "gradient differs from finite differences");
    o.detail += " max|s-s_gd|=" + fmt("%.2e", worst) + " grad_rel=" + fmt("%.2e", worst_grad);
    return o;
}

Outcome guided_oracle() {
    Outcome o;
    std::mt19937_64 rng(77);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const PixelMap guide = oracle::random_map(rng, 16, 16);
        const PixelMap input = oracle::random_map(rng, 16, 16);
        const PixelMap a = guided_filter(guide, input, 2, 1e-3);
        const PixelMap b = oracle::guided_filter(guide, input, 2, 1e-3);
        for (std::size_t p = 0; p < a.data.size(); ++p) worst = std::max(worst, std::abs(a.data[p] - b.data[p]));
    }
    o.require(worst <= 1e-10, "guided filter differs from regression oracle");
    o.detail += " max|diff|=" + fmt("%.2e", worst);
    return o;
}

Outcome objectness_oracle() {
    Outcome o;
    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<int> coord(0, 19);
    std::uniform_real_distribution<double> score(0.05, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const PixelMap cbp = oracle::random_map(rng, 20, 20);
        std::vector<WindowCandidate> windows;
        for (int j = 0; j < 2; ++j) {
            int x0 = coord(rng), x1 = coord(rng), y0 = coord(rng), y1 = coord(rng);
            if (x0 > x1) std::swap(x0, x1);
            if (y0 > y1) std::swap(y0, y1);
            windows.push_back({x0, y0, x1 + 1, y1 + 1, score(rng)});
        }
        const auto fast = pixel_objectness(windows, cbp, 1.0).pixel_map.data;
        const auto ref = oracle::objectness(windows, cbp, 1.0);
        for (std::size_t p = 0; p < fast.size(); ++p) worst = std::max(worst, std::abs(fast[p] - ref[p]));
    }
    o.require(worst <= 1e-12, "objectness differs from double loop");
    o.detail += " max|diff|=" + fmt("%.2e", worst);
    return o;
}

// Graph invariants on every corpus image and scale; the energy sanity check
// reuses the same graphs with the corner prior as the input map.
struct CorpusGraphs {
    Outcome graphs;
    Outcome energy;
};

CorpusGraphs corpus_graphs() {
    CorpusGraphs out;
    const PipelineConfig config;
    int checked = 0, solved = 0;
    auto check_solution = [&](const oracle::EnergyInstance& e, const std::vector<double>& s) {
        for (double v : s) out.energy.require(v >= -1e-6 && v <= 1 + 1e-6, "solution outside [0,1]");
        const double best = oracle::energy(e, s);
        const std::size_t n = s.size();
        out.energy.require(best <= oracle::energy(e, std::vector<double>(n, 0.0)), "E(s*) > E(0)");
        out.energy.require(best <= oracle::energy(e, std::vector<double>(n, 1.0)), "E(s*) > E(1)");
        out.energy.require(best <= oracle::energy(e, e.xi), "E(s*) > E(xi)");
        ++solved;
    };

    std::mt19937_64 rng(99);
    for (int k = 0; k < 100; ++k) {
        const auto e = oracle::random_instance(rng, 10);
        const EnergySolution s = solve_energy(problem_of(e), e.xi);
        check_solution(e, {s.values.data(), s.values.data() + s.values.size()});
    }

    for (const EvalSample& sample : corpus()) {
        const LabImage lab = rgb_to_lab(sample.image);
        for (int n : config.scales) {
            const SuperpixelLabeling labeling = slic_segment(lab, {n, config.compactness, config.slic_iterations});
            const SuperpixelFeatures f = extract_features(labeling, lab, config.corner_fraction);
            const AffinityGraph g = build_affinity(f, {config.sigma1, config.sigma2, config.squared_distance});
            const std::string where = sample.name + " N=" + std::to_string(n) + ": ";
            const std::string lv = testutil::labeling_violation(labeling);
            const std::string gv = testutil::graph_violation(g);
            const std::string av = testutil::adjacency_violation(f);
            out.graphs.require(lv.empty(), where + lv);
            out.graphs.require(gv.empty(), where + gv);
            out.graphs.require(av.empty(), where + av);
            ++checked;

            const RegionSaliency cbp = corner_background_prior(g, region_prior(f, config.f_mode));
            oracle::EnergyInstance e;
            e.xi = cbp.values;
            e.binary = binarize_adaptive(cbp.values);
            e.w = Eigen::MatrixXd(g.weights);
            const EnergySolution s = solve_energy(make_energy_problem(e.xi, e.binary, g.weights), e.xi);
            if (!s.degenerate) check_solution(e, {s.values.data(), s.values.data() + s.values.size()});
        }
    }
    out.graphs.detail += " segmentations=" + std::to_string(checked);
    out.energy.detail += " solves=" + std::to_string(solved);
    return out;
}

Outcome multilayer_contracts() {
    Outcome o;
    const PipelineConfig config;
    for (int k = 0; k < 3; ++k) {
        const EvalSample& sample = corpus()[k];
        const PipelineResult r = run_pipeline(sample.image, config);
        const Eigen::MatrixXd& sm = r.stack.similarity;
        o.require(sm.isApprox(sm.transpose(), 0.0) && sm == sm.transpose(), "SM not symmetric");
        o.require((sm.diagonal().array() == 1.0).all(), "SM diagonal not 1");

        const int radius = guided_radius_for(config, sample.image.width, sample.image.height);
        std::vector<PixelMap> maps = r.stack.maps;
        std::array<int, 5> order = {0, 1, 2, 3, 4};
        std::mt19937_64 rng(k);
        for (int t = 0; t < 5; ++t) {
            std::shuffle(order.begin(), order.end(), rng);
            std::vector<PixelMap> permuted;
            for (int i : order) permuted.push_back(maps[i]);
            const PixelMap mlp = integrate_multilayer(make_scale_stack(permuted), r.lab, radius, config.guided_eps);
            o.require(mlp.data == r.mlp.data, "scale order changes the map");
        }

        // Corner maps of one scale, combined in every order.
        const ScaleResult& s = r.scales[2];
        const RegionSaliency prior = region_prior(s.features, config.f_mode);
        std::array<RegionSaliency, 4> corners;
        for (Corner c : kCorners) corners[static_cast<int>(c)] = corner_saliency(s.graph, c, prior);
        std::array<int, 4> co = {0, 1, 2, 3};
        do {
            const auto v = combine_corners(corners[co[0]], corners[co[1]], corners[co[2]], corners[co[3]]);
            o.require(v.values == s.cbp.values, "corner order changes the prior");
        } while (std::next_permutation(co.begin(), co.end()));

        PipelineConfig single = config;
        single.scales = {200};
        const PipelineResult one = run_pipeline(sample.image, single);
        const PixelMap expect = refine_map(one.lab, one.scales[0].slp_map, radius, config.guided_eps);
        o.require(one.stack.weights.size() == 1 && one.stack.weights[0] == 1.0, "single-scale weight");
        o.require(one.mlp.data == expect.data, "single-scale map is not the refined layer");
    }
    return o;
}

Outcome quality() {
    Outcome o;
    const DatasetReports r = evaluate_samples(corpus(), PipelineConfig{}, 1);
    o.require(r.mlp.skipped() == 0, "samples skipped");
    o.require(r.mlp.adaptive_f >= 0.75, "adaptive F below 0.75");
    o.require(r.mlp.adaptive_f >= r.mean_fusion.adaptive_f, "integration below mean fusion");
    o.detail += " F_mlp=" + fmt("%.4f", r.mlp.adaptive_f) + " F_mean=" + fmt("%.4f", r.mean_fusion.adaptive_f) +
                " (per-sample mean " + fmt("%.4f", r.mlp.mean_sample_f) + ")";
    return o;
}

Outcome determinism() {
    Outcome o;
    const PipelineConfig config;
    for (int k = 0; k < 3; ++k) {
        const RgbImage& img = corpus()[k].image;
        const auto a = encode_map_png(run_pipeline(img, config, 1).mlp);
        const auto b = encode_map_png(run_pipeline(img, config, 1).mlp);
        const auto c = encode_map_png(run_pipeline(img, config, 4).mlp);
        o.require(a == b, "repeat run differs");
        o.require(a == c, "worker count changes output");
    }
    return o;
}

Outcome metrics() {
    Outcome o;
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> v(0, 255), bit(0, 1);
    for (int k = 0; k < 200; ++k) {
        GrayImage sal{8, 8, {}};
        Mask gt{8, 8, {}};
        for (int p = 0; p < 64; ++p) {
            sal.data.push_back(static_cast<std::uint8_t>(v(rng)));
            gt.data.push_back(static_cast<std::uint8_t>(bit(rng)));
        }
        if (gt.positives() == 0) gt.data[0] = 1;
        const auto curve = pr_curve(sal, gt);
        for (int t = 0; t < kThresholdCount; ++t) {
            const Confusion c = oracle::confusion(sal, gt, t);
            const double precision = c.tp + c.fp == 0 ? 1.0 : static_cast<double>(c.tp) / (c.tp + c.fp);
            const double recall = static_cast<double>(c.tp) / (c.tp + c.fn);
            o.require(curve[t].precision == precision && curve[t].recall == recall, "curve differs from counting");
            if (t > 0) o.require(curve[t].recall <= curve[t - 1].recall, "recall increases");
        }
    }
    return o;
}

int report(int id, const char* name, const std::function<Outcome()>& run, double budget = 0.0) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o = run();
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget > 0.0 && seconds >= budget) {
        if (o.pass) o.detail = " over time budget;" + o.detail;
        o.pass = false;
    }
    std::printf("%s criterion %d: %s (%.2f s%s)%s%s\n", o.pass ? "PASS" : "FAIL", id, name, seconds,
                budget > 0.0 ? fmt(", budget %.0f s", budget).c_str() : "", o.detail.empty() ? "" : " -", o.detail.c_str());
    std::fflush(stdout);
    return o.pass ? 0 : 1;
}

}  // namespace

int main() {
    int failures = 0;
    CorpusGraphs graphs;
    failures += report(1, "energy solver matches descent oracle", energy_oracle, 10.0);
    failures += report(2, "guided filter matches regression oracle", guided_oracle, 5.0);
    failures += report(3, "pixel objectness matches double loop", objectness_oracle);
    failures += report(4, "graph and segmentation invariants", [&] {
        graphs = corpus_graphs();
        return graphs.graphs;
    });
    failures += report(5, "energy solution range and descent", [&] { return graphs.energy; });
    failures += report(6, "multilayer contracts", multilayer_contracts);
    failures += report(7, "corpus quality regression", quality, 120.0);
    failures += report(8, "determinism across runs and workers", determinism);
    failures += report(9, "pr curve matches counting", metrics);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
