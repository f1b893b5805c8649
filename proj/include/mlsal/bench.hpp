#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "mlsal/config.hpp"
#include "mlsal/png_io.hpp"

namespace mlsal {

inline constexpr int kThresholdCount = 256;

/// Binary ground truth, one byte (0 or 1) per pixel.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    std::size_t positives() const;
};

/// Pixels >= 128 are foreground.
Mask mask_from_gray(const GrayImage& gray);

struct Confusion {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;

    /// 1 when nothing is predicted positive.
    double precision() const;
    double recall() const;
};

struct PrPoint {
    double precision = 0.0;
    double recall = 0.0;
};

/// Confusion counts for prediction = (saliency >= t), t = 0..255.
std::array<Confusion, kThresholdCount> threshold_confusions(const GrayImage& saliency, const Mask& gt);

/// Precision/recall at every threshold. Throws on an empty ground truth.
std::array<PrPoint, kThresholdCount> pr_curve(const GrayImage& saliency, const Mask& gt);

/// (1 + b2) P R / (b2 P + R); 0 when both are 0.
double f_measure(double precision, double recall, double beta2);

/// Threshold at twice the mean gray level (at most 255). Zero pixels are
/// never predicted positive.
int adaptive_threshold(const GrayImage& saliency);
PrPoint adaptive_pr(const GrayImage& saliency, const Mask& gt);
double adaptive_f(const GrayImage& saliency, const Mask& gt, double beta2);

struct SampleRecord {
    std::string name;
    PrPoint adaptive;
    double adaptive_f = 0.0;
    std::string error;  // non-empty when the sample was skipped
};

struct EvalReport {
    std::array<PrPoint, kThresholdCount> curve{};  // averaged over samples
    PrPoint adaptive;                               // averaged adaptive precision/recall
    double adaptive_f = 0.0;                        // F of the averaged adaptive precision/recall
    double mean_sample_f = 0.0;                     // mean of per-sample adaptive F
    double beta2 = 0.3;
    std::vector<SampleRecord> samples;

    std::size_t evaluated() const;
    std::size_t skipped() const { return samples.size() - evaluated(); }
};

/// Accumulates per-sample curves; the result is independent of insertion order.
class ReportBuilder {
public:
    explicit ReportBuilder(double beta2) : beta2_(beta2) {}

    /// Adds an evaluated sample; throws Error if the ground truth is unusable.
    void add(const std::string& name, const GrayImage& saliency, const Mask& gt);
    void add_failure(const std::string& name, const std::string& error);
    EvalReport finish() const;

private:
    struct Entry {
        SampleRecord record;
        std::array<PrPoint, kThresholdCount> curve{};
    };
    double beta2_;
    std::vector<Entry> entries_;
};

/// CSV: header, 256 `threshold,precision,recall` rows, then the
/// `adaptive_f,beta2,samples` summary. Six decimals, LF line endings.
std::string format_report(const EvalReport& report);
void write_report(const std::filesystem::path& path, const EvalReport& report);

struct EvalSample {
    std::string name;
    RgbImage image;
    Mask mask;
};

struct DatasetEntry {
    std::string name;
    std::filesystem::path image;
    std::filesystem::path mask;
};

/// Pairs `images/*.png` with `masks/*.png` by stem, sorted by name.
/// Images without a mask are returned with an empty mask path.
std::vector<DatasetEntry> list_dataset(const std::filesystem::path& dir);

struct DatasetReports {
    EvalReport mlp;
    EvalReport mean_fusion;
};

/// Runs the pipeline on every sample and evaluates the integrated map and the
/// averaging baseline. Failing samples are recorded and skipped.
DatasetReports evaluate_samples(const std::vector<EvalSample>& samples, const PipelineConfig& config, int jobs = 1);
DatasetReports evaluate_dataset(const std::filesystem::path& dir, const PipelineConfig& config, int jobs = 1);

/// Runs `task(i)` for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task);

}  // namespace mlsal
