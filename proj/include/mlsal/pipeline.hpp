#pragma once

#include <string>
#include <vector>

#include "mlsal/affinity.hpp"
#include "mlsal/config.hpp"
#include "mlsal/energy.hpp"
#include "mlsal/multilayer.hpp"
#include "mlsal/objectness.hpp"

namespace mlsal {

/// Everything computed at one superpixel scale.
struct ScaleResult {
    int region_target = 0;
    SuperpixelLabeling labeling;
    SuperpixelFeatures features;
    AffinityGraph graph;
    RegionSaliency cbp;
    std::vector<WindowCandidate> windows;
    ObjectnessResult objectness;
    OptimizedMap cbp_optimized;
    OptimizedMap ofp_optimized;
    RegionSaliency slp;
    PixelMap slp_map;

    bool degenerate() const { return cbp_optimized.degenerate || ofp_optimized.degenerate; }
};

struct PipelineResult {
    LabImage lab;
    std::vector<ScaleResult> scales;
    ScaleStack stack;
    PixelMap mlp;
    PixelMap mean_fusion;  // averaging baseline, refined the same way
};

/// Error raised by a pipeline stage, tagged with the scale and stage.
class StageError : public Error {
public:
    StageError(int scale, std::string stage, const std::string& what);
    int scale() const { return scale_; }
    const std::string& stage() const { return stage_; }

private:
    int scale_;
    std::string stage_;
};

ScaleResult run_scale(const LabImage& lab, int region_target, const PipelineConfig& config);

/// Runs every configured scale (up to `jobs` concurrently) and integrates them.
/// The result does not depend on `jobs`.
PipelineResult run_pipeline(const RgbImage& img, const PipelineConfig& config, int jobs = 1);

int guided_radius_for(const PipelineConfig& config, int width, int height);

}  // namespace mlsal
