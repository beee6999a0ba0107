// stemnoise: block-wise stem noise energy features for no-reference image
// quality analysis. Subcommands cover per-image analysis (snem, features,
// hist, segment), synthetic degradations (distort), and dataset evaluation
// against opinion scores (eval, footprint).

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stemnoise/ar_core.hpp"
#include "stemnoise/distortions.hpp"
#include "stemnoise/errors.hpp"
#include "stemnoise/evaluation.hpp"
#include "stemnoise/features.hpp"
#include "stemnoise/imageio.hpp"
#include "stemnoise/normalization.hpp"

namespace {

using namespace stemnoise;

struct PipelineFlags {
    std::string acf_mode = "excluded";
    double epsilon = kDefaultEpsilon;
    std::string window_weights = "uniform";
    double c = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--acf-mode", acf_mode, "Lag-1 estimator: excluded or full")
            ->check(CLI::IsMember({"excluded", "full"}))
            ->capture_default_str();
        cmd->add_option("--epsilon", epsilon, "Degenerate-block guard for the Yule-Walker solve")
            ->capture_default_str();
        cmd->add_option("--window-weights", window_weights, "Normalization window preset")
            ->check(CLI::IsMember({"uniform", "gaussian"}))
            ->capture_default_str();
        cmd->add_option("--c", c, "Normalization stabilizer constant")
            ->capture_default_str();
    }

    PipelineConfig config() const {
        PipelineConfig cfg;
        cfg.normalization = window_weights == "gaussian" ? NormalizationConfig::gaussian()
                                                         : NormalizationConfig::uniform();
        cfg.normalization.stabilizer = c;
        cfg.acf_mode = acf_mode == "full" ? AcfMode::full_r1 : AcfMode::excluded_r1;
        cfg.epsilon = epsilon;
        return cfg;
    }
};

EnergyAnalysis analyze(const std::string& input, const PipelineConfig& cfg,
                       NormalizedImage* norm_out = nullptr) {
    const LuminanceImage img = load_image(input);
    NormalizedImage norm = normalize(img, cfg.normalization);
    EnergyAnalysis analysis = compute_energy_map(norm, cfg.acf_mode, cfg.epsilon);
    if (norm_out) *norm_out = std::move(norm);
    return analysis;
}

std::string features_json(const std::string& input, const ImageFeatures& f,
                          int width, int height, const BlockLayout& layout) {
    nlohmann::ordered_json root;
    root["path"] = input;
    root["width"] = width;
    root["height"] = height;
    root["blocks"] = {{"down", layout.blocks_down},
                      {"across", layout.blocks_across},
                      {"count", layout.block_count}};
    root["energy"] = {{"mean", f.energy.mean},
                      {"variance", f.energy.variance},
                      {"mean_abs", f.energy.mean_abs}};
    const auto coeff = [](const CoeffStats& s) {
        return nlohmann::ordered_json{{"mean", s.mean}, {"variance", s.variance}};
    };
    root["ar"] = {{"pooled", coeff(f.ar.pooled)},
                  {"horizontal", coeff(f.ar.horizontal)},
                  {"vertical", coeff(f.ar.vertical)},
                  {"main_diagonal", coeff(f.ar.main_diagonal)},
                  {"secondary_diagonal", coeff(f.ar.secondary_diagonal)}};
    return root.dump(2) + "\n";
}

int run_snem(const std::string& input, const std::string& output, const PipelineFlags& flags) {
    const EnergyAnalysis analysis = analyze(input, flags.config());
    write_gray(render_snem(analysis.energy), output);
    return 0;
}

int run_features(const std::string& input, const std::string& output, const PipelineFlags& flags) {
    const PipelineConfig cfg = flags.config();
    const LuminanceImage img = load_image(input);
    const NormalizedImage norm = normalize(img, cfg.normalization);
    const BlockView view = partition_blocks(norm);
    const EnergyAnalysis analysis = compute_energy_map(norm, cfg.acf_mode, cfg.epsilon);
    ImageFeatures f;
    f.energy = energy_stats(analysis.energy);
    f.ar = ar_statistics(analysis.params, view);
    const std::string text = features_json(input, f, img.width, img.height, view.layout());
    if (output.empty())
        std::cout << text;
    else
        write_text_file_atomic(output, text);
    return 0;
}

int run_hist(const std::string& input, const std::string& output, int bins,
             const std::vector<double>& range, const PipelineFlags& flags) {
    const EnergyAnalysis analysis = analyze(input, flags.config());
    std::optional<std::pair<double, double>> r;
    if (!range.empty()) r = std::make_pair(range[0], range[1]);
    const Histogram hist = energy_histogram(analysis.energy, bins, r);

    std::ostringstream csv;
    csv << "bin_lo,bin_hi,height\n";
    char buf[96];
    for (std::size_t i = 0; i < hist.heights.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", hist.bin_edges[i],
                      hist.bin_edges[i + 1], hist.heights[i]);
        csv << buf;
    }
    write_text_file_atomic(output, csv.str());
    return 0;
}

int run_segment(const std::string& input, const std::string& output, int classes,
                const PipelineFlags& flags) {
    const EnergyAnalysis analysis = analyze(input, flags.config());
    const LabelMap labels = threshold_segment(analysis.energy, classes);
    write_gray(render_labels(labels), output);
    return 0;
}

int run_distort(const std::string& input, const std::string& output, const std::string& kind,
                double severity, std::uint64_t seed) {
    const LuminanceImage img = load_image(input);
    LuminanceImage result;
    if (kind == "awgn") {
        result = add_white_noise(img, severity, seed);
    } else if (kind == "blur") {
        result = gaussian_blur(img, severity);
    } else { // blockify
        const int side = static_cast<int>(std::llround(severity));
        if (side < 1 || std::abs(severity - side) > 1e-9)
            throw Error("blockify severity must be a positive integer tile side");
        result = blockify(img, side);
    }
    GrayImage out;
    out.width = result.width;
    out.height = result.height;
    out.data.resize(result.data.size());
    for (std::size_t i = 0; i < result.data.size(); ++i) {
        const double v = std::clamp(result.data[i], 0.0, 255.0);
        out.data[i] = static_cast<std::uint8_t>(std::floor(v + 0.5));
    }
    write_gray(out, output);
    return 0;
}

int run_eval(const std::string& manifest_path, const std::string& output,
             const PipelineFlags& flags) {
    const DatasetManifest manifest = parse_manifest(manifest_path);
    const CorrelationReport report = evaluate_dataset(manifest, flags.config());
    write_text_file_atomic(output, report_to_json(report));
    std::cout << report_to_text(report);
    return 0;
}

int run_footprint(const std::string& manifest_path, const std::string& output,
                  const PipelineFlags& flags) {
    const DatasetManifest manifest = parse_manifest(manifest_path);
    const PipelineConfig cfg = flags.config();
    const std::size_t n = manifest.entries.size();
    std::vector<ImageFeatures> features(n);
    std::vector<std::string> failures(n);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        try {
            features[i] = compute_features(load_image(manifest.resolve(manifest.entries[i])), cfg);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!failures[i].empty())
            throw IoError("while evaluating " + manifest.entries[i].path + ": " + failures[i]);

    std::ostringstream csv;
    csv << "path,subset,mean,variance,mean_abs\n";
    char buf[128];
    for (std::size_t i = 0; i < n; ++i) {
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g\n", features[i].energy.mean,
                      features[i].energy.variance, features[i].energy.mean_abs);
        csv << manifest.entries[i].path << ',' << manifest.entries[i].subset << buf;
    }
    write_text_file_atomic(output, csv.str());
    return 0;
}

} // namespace

namespace {

int run_main(int argc, char** argv) {
    CLI::App app{"Stem noise energy features for no-reference image quality analysis"};
    app.require_subcommand(1);

    std::string input, output, manifest_path;
    PipelineFlags flags;
    int bins = 64;
    std::vector<double> range;
    int classes = 2;
    std::string kind;
    double severity = 0.0;
    std::uint64_t seed = 0;

    CLI::App* snem = app.add_subcommand("snem", "Render the stem noise energy map as a grayscale image");
    snem->add_option("input", input, "Input image (PNG, BMP, or PGM)")->required();
    snem->add_option("-o,--output", output, "Output image (.png or .pgm)")->required();
    PipelineFlags snem_flags;
    snem_flags.attach(snem);

    CLI::App* feat = app.add_subcommand("features", "Print per-image energy and AR statistics as JSON");
    feat->add_option("input", input, "Input image")->required();
    feat->add_option("-o,--output", output, "Output JSON file (default: stdout)");
    PipelineFlags feat_flags;
    feat_flags.attach(feat);

    CLI::App* hist = app.add_subcommand("hist", "Export the normalized energy histogram as CSV");
    hist->add_option("input", input, "Input image")->required();
    hist->add_option("-o,--output", output, "Output CSV file")->required();
    hist->add_option("--bins", bins, "Number of equal-width bins")->capture_default_str();
    hist->add_option("--range", range, "Histogram range LO HI (default: data range)")
        ->expected(2);
    PipelineFlags hist_flags;
    hist_flags.attach(hist);

    CLI::App* seg = app.add_subcommand("segment", "Multi-level Otsu segmentation of the energy map");
    seg->add_option("input", input, "Input image")->required();
    seg->add_option("-o,--output", output, "Output label image (.png or .pgm)")->required();
    seg->add_option("--k", classes, "Number of classes")->required()->check(CLI::Range(2, 256));
    PipelineFlags seg_flags;
    seg_flags.attach(seg);

    CLI::App* dist = app.add_subcommand("distort", "Generate a degraded copy of an image");
    dist->add_option("input", input, "Input image")->required();
    dist->add_option("-o,--output", output, "Output image (.png or .pgm)")->required();
    dist->add_option("--kind", kind, "awgn, blur, or blockify")
        ->required()
        ->check(CLI::IsMember({"awgn", "blur", "blockify"}));
    dist->add_option("--severity", severity,
                     "Noise std-dev / blur std-dev / tile side in pixels")
        ->required();
    dist->add_option("--seed", seed, "RNG seed (awgn only)")->capture_default_str();

    CLI::App* eval = app.add_subcommand("eval", "Correlate features with opinion scores over a dataset");
    eval->add_option("--manifest", manifest_path, "CSV manifest: path,subset,dmos")->required();
    eval->add_option("-o,--output", output, "Output JSON report")->required();
    PipelineFlags eval_flags;
    eval_flags.attach(eval);

    CLI::App* foot = app.add_subcommand("footprint", "Export per-image (mean, variance) energy points as CSV");
    foot->add_option("--manifest", manifest_path, "CSV manifest: path,subset,dmos")->required();
    foot->add_option("-o,--output", output, "Output CSV file")->required();
    PipelineFlags foot_flags;
    foot_flags.attach(foot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (snem->parsed()) return run_snem(input, output, snem_flags);
        if (feat->parsed()) return run_features(input, output, feat_flags);
        if (hist->parsed()) return run_hist(input, output, bins, range, hist_flags);
        if (seg->parsed()) return run_segment(input, output, classes, seg_flags);
        if (dist->parsed()) return run_distort(input, output, kind, severity, seed);
        if (eval->parsed()) return run_eval(manifest_path, output, eval_flags);
        if (foot->parsed()) return run_footprint(manifest_path, output, foot_flags);
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (...) {
        std::cerr << "error: unexpected failure\n";
        return 2;
    }
}
