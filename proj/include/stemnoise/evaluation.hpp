#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stemnoise/ar_core.hpp"
#include "stemnoise/features.hpp"
#include "stemnoise/normalization.hpp"

namespace stemnoise {

/// One dataset row: an image plus its human opinion score.
struct ManifestEntry {
    std::string path;   // as written in the file
    std::string subset; // distortion subset name
    double dmos = 0.0;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    std::filesystem::path base_dir; // manifest directory; relative paths resolve against it

    std::filesystem::path resolve(const ManifestEntry& entry) const {
        std::filesystem::path p(entry.path);
        return p.is_absolute() ? p : base_dir / p;
    }
};

/// Parse a `path,subset,dmos` CSV (header required). Throws FormatError with
/// the offending line number on malformed rows, and for files with no data
/// rows at all.
DatasetManifest parse_manifest(const std::filesystem::path& path);

/// Spearman rank-order correlation: Pearson correlation of average ranks
/// (ties share their midrank). Throws DegenerateInputError on length
/// mismatch, fewer than two samples, or constant input.
double srocc(std::span<const double> x, std::span<const double> y);

/// Everything the analysis pipeline needs besides the image itself.
struct PipelineConfig {
    NormalizationConfig normalization = NormalizationConfig::uniform();
    AcfMode acf_mode = AcfMode::excluded_r1;
    double epsilon = kDefaultEpsilon;
};

/// All per-image scalar features: energy statistics plus AR-space statistics.
struct ImageFeatures {
    EnergyStats energy;
    ArStats ar;
};

/// normalize -> compute_energy_map -> reductions, in one call.
ImageFeatures compute_features(const LuminanceImage& image, const PipelineConfig& cfg);

/// Fixed catalog of scalar features, in report row order.
struct FeatureDef {
    const char* key;   // machine name (JSON)
    const char* label; // human name (text table)
    double (*value)(const ImageFeatures&);
};

std::span<const FeatureDef> feature_catalog();

/// Correlations for one distortion subset. `srocc_by_feature` is aligned
/// with feature_catalog(); an entry is empty when the correlation is
/// undefined (constant feature or constant score within the subset).
struct SubsetReport {
    std::string subset;
    std::size_t sample_count = 0;
    std::vector<std::optional<double>> srocc_by_feature;
    bool skipped = false; // subset had fewer than 2 images
};

struct CorrelationReport {
    std::vector<SubsetReport> subsets; // manifest first-appearance order
};

/// Run the full pipeline on every manifest image (in parallel), group by
/// subset, and correlate each feature against the scores. Subsets with
/// fewer than two images are reported as skipped. Throws IoError naming the
/// first unloadable image.
CorrelationReport evaluate_dataset(const DatasetManifest& manifest, const PipelineConfig& cfg);

/// Report renderings: machine JSON `{subset: {feature: {srocc, n}}}` and an
/// aligned text table.
std::string report_to_json(const CorrelationReport& report);
std::string report_to_text(const CorrelationReport& report);

} // namespace stemnoise
