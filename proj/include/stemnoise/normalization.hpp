#pragma once

#include <vector>

#include "stemnoise/image.hpp"

namespace stemnoise {

/// Weighted local window for the mean/deviation maps. Weights are laid out
/// row-major over a (2K+1) x (2L+1) neighborhood and must sum to 1.
struct NormalizationConfig {
    int half_height = 1;          // K: rows above/below the center
    int half_width = 1;           // L: columns left/right of the center
    std::vector<double> weights;  // (2K+1) * (2L+1), row-major
    double stabilizer = 1.0;      // c, added to the deviation before dividing

    /// 3x3 window, all weights 1/9. The default.
    static NormalizationConfig uniform();
    /// 3x3 binomial window [1 2 1; 2 4 2; 1 2 1] / 16.
    static NormalizationConfig gaussian();

    /// Throws Error if weights are negative, missized, or do not sum to 1
    /// (within 1e-12), or if the stabilizer is not positive.
    void validate() const;
};

/// Per-pixel weighted mean and standard deviation maps.
struct LocalMoments {
    std::vector<double> mean;
    std::vector<double> stddev;
};

/// Locally normalized image: values = (source - mean) / (stddev + c),
/// with the moment maps kept for inspection.
struct NormalizedImage {
    int width = 0;
    int height = 0;
    std::vector<double> values;
    std::vector<double> mean_map;
    std::vector<double> std_map;

    double at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
};

/// Weighted local mean and standard deviation under mirror (reflect-without-
/// repeat) border padding. Rows are processed in parallel; every output is
/// written to a fixed position, so the result is schedule-independent.
LocalMoments local_moments(const LuminanceImage& image, const NormalizationConfig& cfg);

/// Full local normalization. The stabilizer keeps the division defined on
/// locally constant regions, where the output is exactly zero.
NormalizedImage normalize(const LuminanceImage& image, const NormalizationConfig& cfg);
NormalizedImage normalize(const LuminanceImage& image);

} // namespace stemnoise
