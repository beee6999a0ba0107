#include "stemnoise/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "stemnoise/errors.hpp"
#include "stemnoise/imageio.hpp"

namespace stemnoise {

namespace {

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

} // namespace

DatasetManifest parse_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path.string());

    DatasetManifest manifest;
    manifest.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");

    std::string line;
    if (!std::getline(in, line))
        throw FormatError("manifest is empty: " + path.string());
    if (split_csv_line(strip_cr(line)) != std::vector<std::string>{"path", "subset", "dmos"})
        throw FormatError("manifest " + path.string() + " line 1: header must be path,subset,dmos");

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        const std::string where = "manifest " + path.string() + " line " + std::to_string(line_no);
        if (fields.size() != 3) throw FormatError(where + ": expected 3 columns");
        if (fields[0].empty()) throw FormatError(where + ": empty path");
        if (fields[1].empty()) throw FormatError(where + ": empty subset");
        ManifestEntry entry;
        entry.path = fields[0];
        entry.subset = fields[1];
        const std::string& num = fields[2];
        const auto result = std::from_chars(num.data(), num.data() + num.size(), entry.dmos);
        if (result.ec != std::errc{} || result.ptr != num.data() + num.size())
            throw FormatError(where + ": dmos is not a number: '" + num + "'");
        manifest.entries.push_back(std::move(entry));
    }
    if (manifest.entries.empty())
        throw FormatError("manifest has no data rows: " + path.string());
    return manifest;
}

namespace {

// Average ranks, ties sharing their midrank.
std::vector<double> average_ranks(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = midrank;
        i = j + 1;
    }
    return ranks;
}

} // namespace

double srocc(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DegenerateInputError("srocc inputs differ in length");
    if (x.size() < 2) throw DegenerateInputError("srocc needs at least two samples");

    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = rx[i] - mx;
        const double dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DegenerateInputError("srocc input is constant");
    return sxy / std::sqrt(sxx * syy);
}

ImageFeatures compute_features(const LuminanceImage& image, const PipelineConfig& cfg) {
    const NormalizedImage norm = normalize(image, cfg.normalization);
    const EnergyAnalysis analysis = compute_energy_map(norm, cfg.acf_mode, cfg.epsilon);
    ImageFeatures out;
    out.energy = energy_stats(analysis.energy);
    out.ar = ar_statistics(analysis.params, partition_blocks(norm));
    return out;
}

std::span<const FeatureDef> feature_catalog() {
    static const FeatureDef defs[] = {
        {"mean_ar", "Mean of AR Coeffs.", [](const ImageFeatures& f) { return f.ar.pooled.mean; }},
        {"variance_ar", "Variance of AR Coeffs.", [](const ImageFeatures& f) { return f.ar.pooled.variance; }},
        {"mean_horizontal_ar", "Mean of Horizontal AR Coeffs.", [](const ImageFeatures& f) { return f.ar.horizontal.mean; }},
        {"variance_horizontal_ar", "Variance of Horizontal AR Coeffs.", [](const ImageFeatures& f) { return f.ar.horizontal.variance; }},
        {"mean_vertical_ar", "Mean of Vertical AR Coeffs.", [](const ImageFeatures& f) { return f.ar.vertical.mean; }},
        {"variance_vertical_ar", "Variance of Vertical AR Coeffs.", [](const ImageFeatures& f) { return f.ar.vertical.variance; }},
        {"mean_main_diagonal_ar", "Mean of Main-Diagonal AR Coeffs.", [](const ImageFeatures& f) { return f.ar.main_diagonal.mean; }},
        {"variance_main_diagonal_ar", "Variance of Main-Diagonal AR Coeffs.", [](const ImageFeatures& f) { return f.ar.main_diagonal.variance; }},
        {"mean_secondary_diagonal", "Mean of Secondary-Diagonal Products", [](const ImageFeatures& f) { return f.ar.secondary_diagonal.mean; }},
        {"variance_secondary_diagonal", "Variance of Secondary-Diagonal Products", [](const ImageFeatures& f) { return f.ar.secondary_diagonal.variance; }},
        {"mean_energy", "Mean of Stem Noise Energy", [](const ImageFeatures& f) { return f.energy.mean; }},
        {"variance_energy", "Variance of Stem Noise Energy", [](const ImageFeatures& f) { return f.energy.variance; }},
        {"mean_abs_energy", "Mean of |Stem Noise Energy|", [](const ImageFeatures& f) { return f.energy.mean_abs; }},
    };
    return defs;
}

CorrelationReport evaluate_dataset(const DatasetManifest& manifest, const PipelineConfig& cfg) {
    const std::size_t n = manifest.entries.size();
    std::vector<ImageFeatures> features(n);
    std::vector<std::string> failures(n);

    // images are independent; the inner kernels fall back to serial inside
    // this parallel region
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        try {
            const LuminanceImage img = load_image(manifest.resolve(manifest.entries[i]));
            features[i] = compute_features(img, cfg);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!failures[i].empty())
            throw IoError("while evaluating " + manifest.entries[i].path + ": " + failures[i]);

    // group by subset, first-appearance order
    std::vector<std::string> subset_order;
    std::map<std::string, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& name = manifest.entries[i].subset;
        auto [it, inserted] = members.try_emplace(name);
        if (inserted) subset_order.push_back(name);
        it->second.push_back(i);
    }

    const auto catalog = feature_catalog();
    CorrelationReport report;
    for (const std::string& name : subset_order) {
        const std::vector<std::size_t>& idx = members[name];
        SubsetReport sub;
        sub.subset = name;
        sub.sample_count = idx.size();
        if (idx.size() < 2) {
            sub.skipped = true;
            report.subsets.push_back(std::move(sub));
            continue;
        }
        std::vector<double> dmos(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) dmos[k] = manifest.entries[idx[k]].dmos;

        sub.srocc_by_feature.resize(catalog.size());
        std::vector<double> values(idx.size());
        for (std::size_t f = 0; f < catalog.size(); ++f) {
            for (std::size_t k = 0; k < idx.size(); ++k)
                values[k] = catalog[f].value(features[idx[k]]);
            try {
                sub.srocc_by_feature[f] = srocc(values, dmos);
            } catch (const DegenerateInputError&) {
                sub.srocc_by_feature[f] = std::nullopt; // constant feature or scores
            }
        }
        report.subsets.push_back(std::move(sub));
    }
    return report;
}

std::string report_to_json(const CorrelationReport& report) {
    nlohmann::ordered_json root;
    const auto catalog = feature_catalog();
    for (const SubsetReport& sub : report.subsets) {
        nlohmann::ordered_json entry;
        if (sub.skipped) {
            entry["warning"] = "subset has fewer than 2 images";
            entry["n"] = sub.sample_count;
        } else {
            for (std::size_t f = 0; f < catalog.size(); ++f) {
                nlohmann::ordered_json cell;
                if (sub.srocc_by_feature[f])
                    cell["srocc"] = *sub.srocc_by_feature[f];
                else
                    cell["srocc"] = nullptr;
                cell["n"] = sub.sample_count;
                entry[catalog[f].key] = std::move(cell);
            }
        }
        root[sub.subset] = std::move(entry);
    }
    return root.dump(2) + "\n";
}

std::string report_to_text(const CorrelationReport& report) {
    const auto catalog = feature_catalog();
    std::size_t label_width = 0;
    for (const FeatureDef& def : catalog) label_width = std::max(label_width, std::strlen(def.label));

    std::ostringstream out;
    out << std::string(label_width, ' ');
    for (const SubsetReport& sub : report.subsets)
        if (!sub.skipped) out << "  " << sub.subset << "(n=" << sub.sample_count << ")";
    out << "\n";

    char cell[64];
    for (std::size_t f = 0; f < catalog.size(); ++f) {
        out << catalog[f].label
            << std::string(label_width - std::strlen(catalog[f].label), ' ');
        for (const SubsetReport& sub : report.subsets) {
            if (sub.skipped) continue;
            const std::size_t col_width = sub.subset.size() + std::to_string(sub.sample_count).size() + 5;
            if (sub.srocc_by_feature[f])
                std::snprintf(cell, sizeof cell, "%+.4f", *sub.srocc_by_feature[f]);
            else
                std::snprintf(cell, sizeof cell, "n/a");
            out << "  " << std::string(col_width > std::strlen(cell) + 2 ? col_width - std::strlen(cell) - 2 : 0, ' ')
                << cell;
        }
        out << "\n";
    }
    for (const SubsetReport& sub : report.subsets)
        if (sub.skipped)
            out << "warning: subset '" << sub.subset << "' has fewer than 2 images; skipped\n";
    return out.str();
}

} // namespace stemnoise
