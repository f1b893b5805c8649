#include "mlsal/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

namespace mlsal {

StageError::StageError(int scale, std::string stage, const std::string& what)
    : Error("scale " + std::to_string(scale) + ", " + stage + ": " + what), scale_(scale), stage_(std::move(stage)) {}

int guided_radius_for(const PipelineConfig& config, int width, int height) {
    return config.guided_radius > 0 ? config.guided_radius : default_guided_radius(width, height);
}

ScaleResult run_scale(const LabImage& lab, int region_target, const PipelineConfig& config) {
    ScaleResult r;
    r.region_target = region_target;
    std::string stage;
    try {
        stage = "superpixel";
        r.labeling = slic_segment(lab, {region_target, config.compactness, config.slic_iterations});
        r.features = extract_features(r.labeling, lab, config.corner_fraction);

        stage = "affinity";
        r.graph = build_affinity(r.features, {config.sigma1, config.sigma2, config.squared_distance});

        stage = "corner-prior";
        r.cbp = corner_background_prior(r.graph, region_prior(r.features, config.f_mode));

        stage = "objectness-prior";
        r.windows = propose_windows(lab, r.labeling, r.features, config.h_count);
        r.objectness = pixel_objectness(r.windows, render_regions(r.labeling, r.cbp.values), config.beta);
        region_objectness(r.objectness, r.labeling);

        stage = "optimize-fuse";
        r.cbp_optimized = optimize_energy(r.cbp, binarize_adaptive(r.cbp.values), r.graph, config.literal_log_sign);
        const RegionSaliency& ofp = r.objectness.region_map;
        r.ofp_optimized = optimize_energy(ofp, binarize_adaptive(ofp.values), r.graph, config.literal_log_sign);
        r.slp = fuse_slp(r.cbp_optimized.saliency, r.ofp_optimized.saliency, config.eta);
        r.slp_map = render_regions(r.labeling, r.slp.values);
    } catch (const Error& e) {
        throw StageError(region_target, stage, e.what());
    }
    return r;
}

PipelineResult run_pipeline(const RgbImage& img, const PipelineConfig& config, int jobs) {
    validate(config);
    if (img.width < kMinImageSide || img.height < kMinImageSide) throw Error("run_pipeline: image smaller than 8x8");
    PipelineResult result;
    result.lab = rgb_to_lab(img);

    const std::size_t count = config.scales.size();
    result.scales.resize(count);
    std::vector<std::exception_ptr> errors(count);
    auto work = [&](std::size_t k) {
        try {
            result.scales[k] = run_scale(result.lab, config.scales[k], config);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, count);
    if (workers == 1) {
        for (std::size_t k = 0; k < count; ++k) work(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < count; k = next++) work(k);
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    std::vector<PixelMap> maps;
    maps.reserve(count);
    for (const ScaleResult& s : result.scales) maps.push_back(s.slp_map);
    const int radius = guided_radius_for(config, img.width, img.height);
    result.mean_fusion = refine_map(result.lab, mean_fusion(maps), radius, config.guided_eps);
    result.stack = make_scale_stack(std::move(maps));
    result.mlp = integrate_multilayer(result.stack, result.lab, radius, config.guided_eps);
    return result;
}

}  // namespace mlsal
