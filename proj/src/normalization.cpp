#include "stemnoise/normalization.hpp"

#include <cmath>
#include <cstdlib>

#include "stemnoise/errors.hpp"
#include "reflect.hpp"

namespace stemnoise {

NormalizationConfig NormalizationConfig::uniform() {
    NormalizationConfig cfg;
    cfg.weights.assign(9, 1.0 / 9.0);
    return cfg;
}

NormalizationConfig NormalizationConfig::gaussian() {
    NormalizationConfig cfg;
    cfg.weights = {1.0 / 16, 2.0 / 16, 1.0 / 16,
                   2.0 / 16, 4.0 / 16, 2.0 / 16,
                   1.0 / 16, 2.0 / 16, 1.0 / 16};
    return cfg;
}

void NormalizationConfig::validate() const {
    if (half_height < 0 || half_width < 0)
        throw Error("normalization window half-extents must be non-negative");
    const std::size_t expected =
        static_cast<std::size_t>(2 * half_height + 1) * (2 * half_width + 1);
    if (weights.size() != expected)
        throw Error("normalization weight grid does not match the window size");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw Error("normalization weights must be non-negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw Error("normalization weights must sum to 1");
    if (!(stabilizer > 0.0))
        throw Error("normalization stabilizer must be positive");
}

namespace {

// Weighted mean and deviation at one pixel, window mirrored at the borders.
inline void moments_at(const LuminanceImage& img, const NormalizationConfig& cfg,
                       int row, int col, double& mean_out, double& std_out) {
    const int K = cfg.half_height;
    const int L = cfg.half_width;
    const int W = 2 * L + 1;
    double mu = 0.0;
    for (int k = -K; k <= K; ++k) {
        const int r = detail::reflect_index(row + k, img.height);
        const double* w = cfg.weights.data() + static_cast<std::size_t>(k + K) * W;
        for (int l = -L; l <= L; ++l)
            mu += w[l + L] * img.at(r, detail::reflect_index(col + l, img.width));
    }
    double var = 0.0;
    for (int k = -K; k <= K; ++k) {
        const int r = detail::reflect_index(row + k, img.height);
        const double* w = cfg.weights.data() + static_cast<std::size_t>(k + K) * W;
        for (int l = -L; l <= L; ++l) {
            const double d = img.at(r, detail::reflect_index(col + l, img.width)) - mu;
            var += w[l + L] * d * d;
        }
    }
    mean_out = mu;
    std_out = std::sqrt(var);
}

} // namespace

LocalMoments local_moments(const LuminanceImage& image, const NormalizationConfig& cfg) {
    cfg.validate();
    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    LocalMoments out;
    out.mean.resize(n);
    out.stddev.resize(n);
#pragma omp parallel for schedule(static)
    for (int row = 0; row < image.height; ++row) {
        for (int col = 0; col < image.width; ++col) {
            const std::size_t i = static_cast<std::size_t>(row) * image.width + col;
            moments_at(image, cfg, row, col, out.mean[i], out.stddev[i]);
        }
    }
    return out;
}

NormalizedImage normalize(const LuminanceImage& image, const NormalizationConfig& cfg) {
    LocalMoments moments = local_moments(image, cfg);
    NormalizedImage out;
    out.width = image.width;
    out.height = image.height;
    const std::size_t n = static_cast<std::size_t>(image.width) * image.height;
    out.values.resize(n);
#pragma omp parallel for schedule(static)
    for (int row = 0; row < image.height; ++row) {
        for (int col = 0; col < image.width; ++col) {
            const std::size_t i = static_cast<std::size_t>(row) * image.width + col;
            out.values[i] = (image.data[i] - moments.mean[i]) / (moments.stddev[i] + cfg.stabilizer);
        }
    }
    out.mean_map = std::move(moments.mean);
    out.std_map = std::move(moments.stddev);
    return out;
}

NormalizedImage normalize(const LuminanceImage& image) {
    return normalize(image, NormalizationConfig::uniform());
}

} // namespace stemnoise
