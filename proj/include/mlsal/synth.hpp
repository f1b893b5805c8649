#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mlsal/bench.hpp"

namespace mlsal {

inline constexpr int kSynthWidth = 240;
inline constexpr int kSynthHeight = 180;
inline constexpr double kSynthCornerFraction = 0.15;

/// Deterministic test corpus: one or two shaded ellipses/rectangles in a
/// contrasting color over a textured, gently graded background. Object area
/// is 2-40% of the image and every corner square holds < 5% object pixels.
/// Sample i depends only on (seed, i).
std::vector<EvalSample> synth_corpus(std::uint64_t seed, int count);

/// Writes `images/<name>.png` and `masks/<name>.png` (0/255).
void write_corpus(const std::filesystem::path& dir, const std::vector<EvalSample>& samples);

}  // namespace mlsal
