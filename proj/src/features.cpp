#include "stemnoise/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stemnoise/errors.hpp"

namespace stemnoise {

namespace {

// Two-pass population mean/variance; order-insensitive enough to stay
// deterministic in a serial reduction.
CoeffStats mean_variance(const std::vector<double>& v) {
    CoeffStats out;
    if (v.empty()) return out;
    double sum = 0.0;
    for (double x : v) sum += x;
    out.mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) {
        const double d = x - out.mean;
        ss += d * d;
    }
    out.variance = ss / static_cast<double>(v.size());
    return out;
}

} // namespace

EnergyStats energy_stats(const EnergyMap& map) {
    if (map.values.empty()) throw DimensionError("energy map is empty");
    EnergyStats out;
    out.block_count = map.values.size();
    const double n = static_cast<double>(out.block_count);
    double sum = 0.0, sum_abs = 0.0;
    for (double e : map.values) {
        sum += e;
        sum_abs += std::abs(e);
    }
    out.mean = sum / n;
    out.mean_abs = sum_abs / n;
    double ss = 0.0;
    for (double e : map.values) {
        const double d = e - out.mean;
        ss += d * d;
    }
    out.variance = ss / n;
    return out;
}

Histogram energy_histogram(const EnergyMap& map, int bins,
                           std::optional<std::pair<double, double>> range) {
    if (map.values.empty()) throw DimensionError("energy map is empty");
    if (bins < 1) throw Error("histogram needs at least one bin");

    double lo, hi;
    if (range) {
        lo = range->first;
        hi = range->second;
        if (!(lo < hi)) throw Error("histogram range must have lo < hi");
    } else {
        const auto [mn, mx] = std::minmax_element(map.values.begin(), map.values.end());
        lo = *mn;
        hi = *mx + 1e-12; // top edge widened so the maximum lands in the last bin
    }

    Histogram out;
    out.bin_edges.resize(bins + 1);
    const double width = hi - lo;
    for (int i = 0; i <= bins; ++i)
        out.bin_edges[i] = lo + width * static_cast<double>(i) / bins;
    out.heights.assign(bins, 0.0);

    const double inv_count = 1.0 / static_cast<double>(map.values.size());
    for (double v : map.values) {
        int idx = 0;
        if (width > 0.0) {
            // values on an interior edge land in the upper bin; out-of-range
            // values clamp into the end bins
            idx = static_cast<int>(std::floor((v - lo) / width * bins));
            idx = std::clamp(idx, 0, bins - 1);
        }
        out.heights[idx] += inv_count;
    }
    return out;
}

GrayImage render_snem(const EnergyMap& map) {
    if (map.values.empty()) throw DimensionError("energy map is empty");
    GrayImage out;
    out.width = map.blocks_across;
    out.height = map.blocks_down;
    out.data.resize(map.values.size());

    const auto [mn, mx] = std::minmax_element(map.values.begin(), map.values.end());
    const double lo = *mn, hi = *mx;
    if (!(hi > lo)) {
        std::fill(out.data.begin(), out.data.end(), std::uint8_t{0});
        return out;
    }
    const double span = hi - lo;
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        const double t = (map.values[i] - lo) / span * 255.0;
        out.data[i] = static_cast<std::uint8_t>(std::floor(t + 0.5)); // half-up
    }
    return out;
}

ArStats ar_statistics(const ArParamsGrid& params, const BlockView& blocks) {
    if (params.params.empty()) throw DimensionError("AR parameter grid is empty");
    if (params.params.size() != blocks.count())
        throw DimensionError("AR parameter grid does not match the block grid");

    const std::size_t s = params.params.size();
    std::vector<double> a1(s), a2(s), a3(s), pooled, secondary(s);
    pooled.reserve(3 * s);
    for (std::size_t i = 0; i < s; ++i) {
        a1[i] = params.params[i].a1;
        a2[i] = params.params[i].a2;
        a3[i] = params.params[i].a3;
        const BlockSequence b = blocks.block(i);
        secondary[i] = b.values[2] * b.values[1]; // x[n-1] * x[n-2]
    }
    pooled.insert(pooled.end(), a1.begin(), a1.end());
    pooled.insert(pooled.end(), a2.begin(), a2.end());
    pooled.insert(pooled.end(), a3.begin(), a3.end());

    ArStats out;
    out.horizontal = mean_variance(a1);
    out.vertical = mean_variance(a2);
    out.main_diagonal = mean_variance(a3);
    out.pooled = mean_variance(pooled);
    out.secondary_diagonal = mean_variance(secondary);
    return out;
}

namespace {

constexpr int kOtsuBins = 256;

struct OtsuPrefix {
    std::array<double, kOtsuBins> weight{};
    std::array<double, kOtsuBins> moment{};

    double w(int i, int j) const { return weight[j] - (i > 0 ? weight[i - 1] : 0.0); }
    double m(int i, int j) const { return moment[j] - (i > 0 ? moment[i - 1] : 0.0); }
    // contribution of one class [i..j]: w * mu^2 == m^2 / w
    double score(int i, int j) const {
        const double wij = w(i, j);
        return wij > 0.0 ? m(i, j) * m(i, j) / wij : 0.0;
    }
};

} // namespace

LabelMap threshold_segment(const EnergyMap& map, int classes) {
    if (map.values.empty()) throw DimensionError("energy map is empty");
    if (classes < 2) throw Error("segmentation needs at least 2 classes");

    // distinct-value precheck
    {
        std::vector<double> sorted(map.values);
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        if (static_cast<int>(sorted.size()) < classes)
            throw DegenerateInputError("energy map has fewer distinct values than classes");
    }

    const auto [mn, mx] = std::minmax_element(map.values.begin(), map.values.end());
    const double lo = *mn;
    const double hi = *mx + 1e-12;
    const double width = hi - lo;

    std::array<double, kOtsuBins> hist{};
    const double inv_count = 1.0 / static_cast<double>(map.values.size());
    for (double v : map.values) {
        int idx = static_cast<int>(std::floor((v - lo) / width * kOtsuBins));
        hist[std::clamp(idx, 0, kOtsuBins - 1)] += inv_count;
    }

    OtsuPrefix pre;
    double cw = 0.0, cm = 0.0;
    for (int i = 0; i < kOtsuBins; ++i) {
        const double center = lo + width * (i + 0.5) / kOtsuBins;
        cw += hist[i];
        cm += hist[i] * center;
        pre.weight[i] = cw;
        pre.moment[i] = cm;
    }

    int occupied = 0;
    for (int i = 0; i < kOtsuBins; ++i) occupied += hist[i] > 0.0;
    if (occupied < classes)
        throw DegenerateInputError(
            "energy map occupies fewer histogram bins than classes");

    // Maximizing between-class variance is equivalent to maximizing
    // sum_c w_c * mu_c^2. Dynamic program over cut positions; every class is
    // required to contain at least one occupied bin.
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> best(classes, std::vector<double>(kOtsuBins, kNegInf));
    std::vector<std::vector<int>> from(classes, std::vector<int>(kOtsuBins, -1));
    for (int j = 0; j < kOtsuBins; ++j)
        if (pre.w(0, j) > 0.0) best[0][j] = pre.score(0, j);
    for (int c = 1; c < classes; ++c) {
        for (int j = c; j < kOtsuBins; ++j) {
            double bh = kNegInf;
            int bi = -1;
            for (int i = c; i <= j; ++i) {
                if (best[c - 1][i - 1] == kNegInf) continue;
                if (!(pre.w(i, j) > 0.0)) continue;
                const double v = best[c - 1][i - 1] + pre.score(i, j);
                if (v > bh) {
                    bh = v;
                    bi = i;
                }
            }
            best[c][j] = bh;
            from[c][j] = bi;
        }
    }
    if (best[classes - 1][kOtsuBins - 1] == kNegInf)
        throw DegenerateInputError("energy map cannot be split into the requested classes");

    LabelMap out;
    out.blocks_down = map.blocks_down;
    out.blocks_across = map.blocks_across;
    out.thresholds.resize(classes - 1);
    int j = kOtsuBins - 1;
    for (int c = classes - 1; c >= 1; --c) {
        const int i = from[c][j];
        out.thresholds[c - 1] = lo + width * static_cast<double>(i) / kOtsuBins;
        j = i - 1;
    }

    // a value exactly on a cut goes to the upper class, matching the
    // histogram's upper-bin edge convention
    out.labels.resize(map.values.size());
    for (std::size_t n = 0; n < map.values.size(); ++n) {
        int label = 0;
        while (label < classes - 1 && map.values[n] >= out.thresholds[label]) ++label;
        out.labels[n] = label;
    }
    return out;
}

GrayImage render_labels(const LabelMap& labels) {
    GrayImage out;
    out.width = labels.blocks_across;
    out.height = labels.blocks_down;
    out.data.resize(labels.labels.size());
    const int classes = static_cast<int>(labels.thresholds.size()) + 1;
    const double step = classes > 1 ? 255.0 / (classes - 1) : 0.0;
    for (std::size_t i = 0; i < labels.labels.size(); ++i)
        out.data[i] = static_cast<std::uint8_t>(std::floor(labels.labels[i] * step + 0.5));
    return out;
}

} // namespace stemnoise
