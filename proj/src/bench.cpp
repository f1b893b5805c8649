#include "mlsal/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <thread>

#include "mlsal/pipeline.hpp"

namespace mlsal {

std::size_t Mask::positives() const {
    return static_cast<std::size_t>(std::count(data.begin(), data.end(), std::uint8_t{1}));
}

Mask mask_from_gray(const GrayImage& gray) {
    Mask mask{gray.width, gray.height, std::vector<std::uint8_t>(gray.data.size())};
    for (std::size_t i = 0; i < gray.data.size(); ++i) mask.data[i] = gray.data[i] >= 128 ? 1 : 0;
    return mask;
}

double Confusion::precision() const {
    const std::int64_t predicted = tp + fp;
    return predicted == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(predicted);
}

double Confusion::recall() const {
    const std::int64_t actual = tp + fn;
    return actual == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(actual);
}

std::array<Confusion, kThresholdCount> threshold_confusions(const GrayImage& saliency, const Mask& gt) {
    check_same_size(saliency.width, saliency.height, gt.width, gt.height, "pr_curve");
    // Histogram per class, then suffix sums: predicted positive at t means value >= t.
    std::array<std::int64_t, kThresholdCount> fg{};
    std::array<std::int64_t, kThresholdCount> bg{};
    for (std::size_t p = 0; p < saliency.data.size(); ++p) {
        (gt.data[p] ? fg : bg)[saliency.data[p]] += 1;
    }
    const std::int64_t total_fg = static_cast<std::int64_t>(gt.positives());
    const std::int64_t total_bg = static_cast<std::int64_t>(saliency.data.size()) - total_fg;
    std::array<Confusion, kThresholdCount> out{};
    std::int64_t tp = 0, fp = 0;
    for (int t = kThresholdCount - 1; t >= 0; --t) {
        tp += fg[t];
        fp += bg[t];
        out[t] = {tp, fp, total_bg - fp, total_fg - tp};
    }
    return out;
}

std::array<PrPoint, kThresholdCount> pr_curve(const GrayImage& saliency, const Mask& gt) {
    if (gt.positives() == 0) throw Error("pr_curve: empty ground truth");
    const auto confusions = threshold_confusions(saliency, gt);
    std::array<PrPoint, kThresholdCount> out{};
    for (int t = 0; t < kThresholdCount; ++t) out[t] = {confusions[t].precision(), confusions[t].recall()};
    return out;
}

double f_measure(double precision, double recall, double beta2) {
    const double denom = beta2 * precision + recall;
    if (denom <= 0.0) return 0.0;
    return (1.0 + beta2) * precision * recall / denom;
}

int adaptive_threshold(const GrayImage& saliency) {
    if (saliency.data.empty()) return 0;
    std::int64_t total = 0;
    for (const std::uint8_t v : saliency.data) total += v;
    const double mean = static_cast<double>(total) / static_cast<double>(saliency.data.size());
    return static_cast<int>(std::min(255.0, std::ceil(2.0 * mean)));
}

PrPoint adaptive_pr(const GrayImage& saliency, const Mask& gt) {
    check_same_size(saliency.width, saliency.height, gt.width, gt.height, "adaptive_f");
    if (gt.positives() == 0) throw Error("adaptive_f: empty ground truth");
    const int threshold = std::max(1, adaptive_threshold(saliency));
    Confusion c;
    for (std::size_t p = 0; p < saliency.data.size(); ++p) {
        const bool predicted = saliency.data[p] >= threshold;
        if (predicted) (gt.data[p] ? c.tp : c.fp) += 1;
        else (gt.data[p] ? c.fn : c.tn) += 1;
    }
    return {c.precision(), c.recall()};
}

double adaptive_f(const GrayImage& saliency, const Mask& gt, double beta2) {
    const PrPoint pr = adaptive_pr(saliency, gt);
    return f_measure(pr.precision, pr.recall, beta2);
}

std::size_t EvalReport::evaluated() const {
    return static_cast<std::size_t>(
        std::count_if(samples.begin(), samples.end(), [](const SampleRecord& s) { return s.error.empty(); }));
}

void ReportBuilder::add(const std::string& name, const GrayImage& saliency, const Mask& gt) {
    Entry entry;
    entry.curve = pr_curve(saliency, gt);
    entry.record.name = name;
    entry.record.adaptive = adaptive_pr(saliency, gt);
    entry.record.adaptive_f = f_measure(entry.record.adaptive.precision, entry.record.adaptive.recall, beta2_);
    entries_.push_back(std::move(entry));
}

void ReportBuilder::add_failure(const std::string& name, const std::string& error) {
    Entry entry;
    entry.record.name = name;
    entry.record.error = error.empty() ? "unknown error" : error;
    entries_.push_back(std::move(entry));
}

EvalReport ReportBuilder::finish() const {
    std::vector<const Entry*> ordered;
    for (const Entry& e : entries_) ordered.push_back(&e);
    // Sum in name order so the report does not depend on insertion order.
    std::stable_sort(ordered.begin(), ordered.end(), [](const Entry* a, const Entry* b) {
        if (a->record.name != b->record.name) return a->record.name < b->record.name;
        return a->record.error < b->record.error;
    });

    EvalReport report;
    report.beta2 = beta2_;
    std::size_t n = 0;
    double sum_f = 0.0;
    for (const Entry* e : ordered) {
        report.samples.push_back(e->record);
        if (!e->record.error.empty()) continue;
        ++n;
        for (int t = 0; t < kThresholdCount; ++t) {
            report.curve[t].precision += e->curve[t].precision;
            report.curve[t].recall += e->curve[t].recall;
        }
        report.adaptive.precision += e->record.adaptive.precision;
        report.adaptive.recall += e->record.adaptive.recall;
        sum_f += e->record.adaptive_f;
    }
    if (n > 0) {
        const double inv = 1.0 / static_cast<double>(n);
        for (PrPoint& p : report.curve) {
            p.precision *= inv;
            p.recall *= inv;
        }
        report.adaptive.precision *= inv;
        report.adaptive.recall *= inv;
        report.adaptive_f = f_measure(report.adaptive.precision, report.adaptive.recall, beta2_);
        report.mean_sample_f = sum_f * inv;
    }
    return report;
}

std::string format_report(const EvalReport& report) {
    std::string out = "threshold,precision,recall\n";
    char line[128];
    for (int t = 0; t < kThresholdCount; ++t) {
        std::snprintf(line, sizeof(line), "%d,%.6f,%.6f\n", t, report.curve[t].precision, report.curve[t].recall);
        out += line;
    }
    out += "adaptive_f,beta2,samples\n";
    std::snprintf(line, sizeof(line), "%.6f,%.6f,%zu\n", report.adaptive_f, report.beta2, report.evaluated());
    out += line;
    return out;
}

void write_report(const std::filesystem::path& path, const EvalReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write report '" + path.string() + "'");
    out << format_report(report);
}

std::vector<DatasetEntry> list_dataset(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    const fs::path images = dir / "images";
    const fs::path masks = dir / "masks";
    if (!fs::is_directory(images)) throw Error("dataset: missing directory '" + images.string() + "'");
    std::map<std::string, DatasetEntry> entries;
    for (const auto& item : fs::directory_iterator(images)) {
        if (!item.is_regular_file() || item.path().extension() != ".png") continue;
        const std::string stem = item.path().stem().string();
        entries[stem] = {stem, item.path(), {}};
    }
    if (fs::is_directory(masks)) {
        for (auto& [stem, entry] : entries) {
            const fs::path mask = masks / (stem + ".png");
            if (fs::is_regular_file(mask)) entry.mask = mask;
        }
    }
    if (entries.empty()) throw Error("dataset: no images in '" + images.string() + "'");
    std::vector<DatasetEntry> out;
    for (auto& [stem, entry] : entries) out.push_back(std::move(entry));
    return out;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) task(i);
        });
    }
}

namespace {

struct SampleOutcome {
    GrayImage mlp;
    GrayImage mean_fusion;
    std::string error;
};

DatasetReports collect(const std::vector<std::string>& names, const std::vector<const Mask*>& masks,
                       const std::vector<SampleOutcome>& outcomes, double beta2) {
    ReportBuilder mlp(beta2);
    ReportBuilder mean(beta2);
    for (std::size_t i = 0; i < names.size(); ++i) {
        const SampleOutcome& o = outcomes[i];
        if (!o.error.empty()) {
            mlp.add_failure(names[i], o.error);
            mean.add_failure(names[i], o.error);
            continue;
        }
        try {
            mlp.add(names[i], o.mlp, *masks[i]);
            mean.add(names[i], o.mean_fusion, *masks[i]);
        } catch (const Error& e) {
            mlp.add_failure(names[i], e.what());
            mean.add_failure(names[i], e.what());
        }
    }
    return {mlp.finish(), mean.finish()};
}

SampleOutcome process(const RgbImage& image, const Mask& mask, const PipelineConfig& config) {
    SampleOutcome out;
    try {
        check_same_size(image.width, image.height, mask.width, mask.height, "mask");
        if (mask.positives() == 0) throw Error("empty ground truth");
        const PipelineResult result = run_pipeline(image, config, 1);
        out.mlp = quantize_map(result.mlp);
        out.mean_fusion = quantize_map(result.mean_fusion);
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

}  // namespace

DatasetReports evaluate_samples(const std::vector<EvalSample>& samples, const PipelineConfig& config, int jobs) {
    validate(config);
    std::vector<SampleOutcome> outcomes(samples.size());
    parallel_for(samples.size(), jobs, [&](std::size_t i) {
        outcomes[i] = process(samples[i].image, samples[i].mask, config);
    });
    std::vector<std::string> names;
    std::vector<const Mask*> masks;
    for (const EvalSample& s : samples) {
        names.push_back(s.name);
        masks.push_back(&s.mask);
    }
    return collect(names, masks, outcomes, config.beta2);
}

DatasetReports evaluate_dataset(const std::filesystem::path& dir, const PipelineConfig& config, int jobs) {
    validate(config);
    const std::vector<DatasetEntry> entries = list_dataset(dir);
    std::vector<SampleOutcome> outcomes(entries.size());
    std::vector<Mask> masks(entries.size());
    parallel_for(entries.size(), jobs, [&](std::size_t i) {
        try {
            if (entries[i].mask.empty()) throw Error("no mask for '" + entries[i].name + "'");
            masks[i] = mask_from_gray(read_gray(entries[i].mask));
            const RgbImage image = read_image(entries[i].image);
            outcomes[i] = process(image, masks[i], config);
        } catch (const std::exception& e) {
            outcomes[i].error = e.what();
        }
    });
    std::vector<std::string> names;
    std::vector<const Mask*> mask_ptrs;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        names.push_back(entries[i].name);
        mask_ptrs.push_back(&masks[i]);
    }
    return collect(names, mask_ptrs, outcomes, config.beta2);
}

}  // namespace mlsal
