#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mlsal/bench.hpp"
#include "mlsal/config.hpp"
#include "mlsal/pipeline.hpp"
#include "mlsal/png_io.hpp"
#include "mlsal/synth.hpp"

namespace fs = std::filesystem;
using namespace mlsal;

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kUsage = 2;

struct ConfigOptions {
    std::string path;
    std::map<std::string, std::string> overrides;
};

// One flag per config key, named like the key.
void add_config_options(CLI::App& cmd, ConfigOptions& opts) {
    cmd.add_option("-c,--config", opts.path, "Config file (key = value lines)")->check(CLI::ExistingFile);
    for (const std::string& key : config_keys()) {
        cmd.add_option_function<std::string>(
               "--" + key, [&opts, key](const std::string& v) { opts.overrides[key] = v; }, "Override '" + key + "'")
            ->group("Config overrides");
    }
}

PipelineConfig resolve_config(const ConfigOptions& opts) {
    PipelineConfig config = opts.path.empty() ? PipelineConfig{} : load_config(opts.path);
    for (const auto& [key, value] : opts.overrides) set_config_value(config, key, value);
    validate(config);
    return config;
}

std::vector<fs::path> list_inputs(const fs::path& input) {
    if (fs::is_regular_file(input)) return {input};
    if (!fs::is_directory(input)) throw Error("input '" + input.string() + "' does not exist");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(input)) {
        if (entry.is_regular_file() && entry.path().extension() == ".png") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error("no .png files in '" + input.string() + "'");
    return files;
}

std::string scale_name(const fs::path& out, const std::string& stem, const char* what, int n) {
    return (out / (stem + "_" + what + "_N" + std::to_string(n) + ".png")).string();
}

std::string text_name(const fs::path& out, const std::string& stem, const char* what, int n) {
    return (out / (stem + "_" + what + "_N" + std::to_string(n) + ".txt")).string();
}

std::FILE* open_text(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error("cannot write '" + path + "'");
    return f;
}

// Labels, affinity triplets, window list and the pixel objectness map.
void write_debug(const fs::path& out, const std::string& stem, const ScaleResult& s) {
    const int n = s.region_target;
    write_gray16(scale_name(out, stem, "labels", n), s.labeling.width, s.labeling.height, labels_u16(s.labeling));
    write_map(scale_name(out, stem, "objectness", n), s.objectness.pixel_map);

    std::FILE* w = open_text(text_name(out, stem, "affinity", n));
    for (int k = 0; k < s.graph.weights.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(s.graph.weights, k); it; ++it) {
            std::fprintf(w, "%d %d %.17g\n", static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        }
    }
    std::fclose(w);

    std::FILE* win = open_text(text_name(out, stem, "windows", n));
    for (std::size_t k = 0; k < s.windows.size(); ++k) {
        const WindowCandidate& c = s.windows[k];
        std::fprintf(win, "%d %d %d %d %.17g %.17g\n", c.x0, c.y0, c.x1, c.y1, c.score, s.objectness.accuracy[k]);
    }
    std::fclose(win);
}

void write_scale(const fs::path& out, const std::string& stem, const ScaleResult& s, bool intermediates) {
    if (intermediates) {
        write_map(scale_name(out, stem, "cbp", s.region_target), render_regions(s.labeling, s.cbp.values));
        write_map(scale_name(out, stem, "ofp", s.region_target),
                  render_regions(s.labeling, s.objectness.region_map.values));
        write_debug(out, stem, s);
    }
    write_map(scale_name(out, stem, "slp", s.region_target), s.slp_map);
}

struct DetectArgs {
    std::string input;
    std::string output;
    ConfigOptions config;
    bool intermediates = false;
    int single_scale = 0;
    int jobs = 1;
};

int cmd_detect(const DetectArgs& args) {
    PipelineConfig config;
    std::vector<fs::path> inputs;
    try {
        config = resolve_config(args.config);
        inputs = list_inputs(args.input);
        fs::create_directories(args.output);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    }

    const fs::path out = args.output;
    // A single image gets the workers for its scales instead.
    const int inner_jobs = inputs.size() == 1 ? args.jobs : 1;
    std::vector<std::string> failures(inputs.size());
    parallel_for(inputs.size(), args.jobs, [&](std::size_t i) {
        const std::string stem = inputs[i].stem().string();
        try {
            const RgbImage img = read_image(inputs[i]);
            if (args.single_scale > 0) {
                const ScaleResult s = run_scale(rgb_to_lab(img), args.single_scale, config);
                write_scale(out, stem, s, args.intermediates);
                return;
            }
            const PipelineResult r = run_pipeline(img, config, inner_jobs);
            if (args.intermediates) {
                for (const ScaleResult& s : r.scales) write_scale(out, stem, s, true);
            }
            write_map(out / (stem + "_mlp.png"), r.mlp);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    });

    int failed = 0;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (failures[i].empty()) continue;
        std::fprintf(stderr, "failed: %s: %s\n", inputs[i].string().c_str(), failures[i].c_str());
        ++failed;
    }
    std::printf("%zu of %zu images processed\n", inputs.size() - failed, inputs.size());
    return failed == 0 ? kOk : kPartial;
}

struct EvalArgs {
    std::string dataset;
    std::string report;
    ConfigOptions config;
    int jobs = 1;
};

fs::path baseline_path(const fs::path& report) {
    return report.parent_path() / (report.stem().string() + "_mean" + report.extension().string());
}

int cmd_eval(const EvalArgs& args) {
    PipelineConfig config;
    DatasetReports reports;
    try {
        config = resolve_config(args.config);
        reports = evaluate_dataset(args.dataset, config, args.jobs);
        const fs::path report = args.report;
        if (report.has_parent_path()) fs::create_directories(report.parent_path());
        write_report(report, reports.mlp);
        write_report(baseline_path(report), reports.mean_fusion);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    }

    for (const SampleRecord& s : reports.mlp.samples) {
        if (!s.error.empty()) std::fprintf(stderr, "skipped: %s: %s\n", s.name.c_str(), s.error.c_str());
    }
    std::printf("samples %zu evaluated, %zu skipped\n", reports.mlp.evaluated(), reports.mlp.skipped());
    std::printf("mlp adaptive F %.4f\n", reports.mlp.adaptive_f);
    std::printf("mean fusion adaptive F %.4f\n", reports.mean_fusion.adaptive_f);
    return reports.mlp.skipped() == 0 ? kOk : kPartial;
}

struct SynthArgs {
    std::uint64_t seed = 7;
    int count = 0;
    std::string output;
};

int cmd_synth(const SynthArgs& args) {
    if (args.count <= 0) {
        std::fprintf(stderr, "error: --count must be positive\n");
        return kUsage;
    }
    try {
        write_corpus(args.output, synth_corpus(args.seed, args.count));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kPartial;
    }
    std::printf("wrote %d samples to %s\n", args.count, args.output.c_str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-scale salient object detection"};
    app.require_subcommand(1);

    DetectArgs detect;
    CLI::App* d = app.add_subcommand("detect", "Compute saliency maps for a PNG or a directory of PNGs");
    d->add_option("input", detect.input, "Image file or directory")->required();
    d->add_option("-o,--output", detect.output, "Output directory")->required();
    d->add_flag("--dump-intermediates", detect.intermediates, "Also write per-scale CBP, OFP and SLP maps");
    d->add_option("--single-scale", detect.single_scale, "Run one scale and write its SLP only")
        ->check(CLI::PositiveNumber);
    d->add_option("--jobs", detect.jobs, "Worker threads")->check(CLI::PositiveNumber);
    add_config_options(*d, detect.config);

    EvalArgs eval;
    CLI::App* e = app.add_subcommand("eval", "Evaluate on a dataset with images/ and masks/");
    e->add_option("dataset", eval.dataset, "Dataset directory")->required();
    e->add_option("-r,--report", eval.report, "Report path; the averaging baseline goes next to it")->required();
    e->add_option("--jobs", eval.jobs, "Worker threads")->check(CLI::PositiveNumber);
    add_config_options(*e, eval.config);

    SynthArgs synth;
    CLI::App* s = app.add_subcommand("synth", "Write the synthetic corpus");
    s->add_option("--seed", synth.seed, "Corpus seed");
    s->add_option("--count", synth.count, "Number of samples")->required();
    s->add_option("-o,--output", synth.output, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kOk : kUsage;
    }

    if (d->parsed()) return cmd_detect(detect);
    if (e->parsed()) return cmd_eval(eval);
    return cmd_synth(synth);
}
