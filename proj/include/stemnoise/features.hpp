#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "stemnoise/ar_core.hpp"
#include "stemnoise/image.hpp"

namespace stemnoise {

/// First and second order statistics of an energy map. Variance is the
/// population variance (divide by the block count).
struct EnergyStats {
    double mean = 0.0;
    double variance = 0.0;
    double mean_abs = 0.0;
    std::size_t block_count = 0;
};

EnergyStats energy_stats(const EnergyMap& map);

/// Normalized histogram: heights sum to 1, edges ascending, no underflow or
/// overflow (out-of-range values are clamped into the end bins).
struct Histogram {
    std::vector<double> bin_edges; // bins + 1 values
    std::vector<double> heights;   // counts / block_count
};

/// Equal-width histogram over [range.lo, range.hi), defaulting to the data
/// range widened by 1e-12 at the top so the maximum lands in the last bin.
/// A value sitting exactly on an interior edge goes to the upper bin.
Histogram energy_histogram(const EnergyMap& map, int bins,
                           std::optional<std::pair<double, double>> range = std::nullopt);

/// Min-max scale energies to 8-bit gray, rounding half-up. A constant map
/// renders all-zero. The output is invariant under positive affine
/// transforms of the energies.
GrayImage render_snem(const EnergyMap& map);

struct CoeffStats {
    double mean = 0.0;
    double variance = 0.0;
};

/// Per-direction statistics of the AR coefficient grid. Lags map to
/// directions of the 2x2 scan: a1 horizontal, a2 vertical, a3 main diagonal.
/// The secondary diagonal has no coefficient of its own in an order-3 model;
/// the per-block product of the two secondary-diagonal pixels (bottom-left *
/// top-right, the pair the excluded_r1 mode leaves out of R(1)) is reported
/// in its place.
struct ArStats {
    CoeffStats pooled; // over all of a1, a2, a3
    CoeffStats horizontal;
    CoeffStats vertical;
    CoeffStats main_diagonal;
    CoeffStats secondary_diagonal; // pixel product, not a model coefficient
};

ArStats ar_statistics(const ArParamsGrid& params, const BlockView& blocks);

/// Multi-level threshold segmentation of an energy map.
struct LabelMap {
    int blocks_down = 0;
    int blocks_across = 0;
    std::vector<int> labels;        // 0 .. classes-1, dense
    std::vector<double> thresholds; // classes-1 ascending cut points
};

/// Otsu thresholds over a 256-bin histogram of the map, maximizing
/// between-class variance; labels assigned by interval (values above a
/// threshold take the higher label). Throws DegenerateInputError when the
/// map cannot support `classes` non-empty classes.
LabelMap threshold_segment(const EnergyMap& map, int classes);

/// Scale a label map to 8-bit gray, classes spread evenly over 0..255.
GrayImage render_labels(const LabelMap& labels);

/// The (mean, variance) coordinate of one image in energy space.
inline std::pair<double, double> footprint_point(const EnergyStats& stats) {
    return {stats.mean, stats.variance};
}

} // namespace stemnoise
