#include "stemnoise/reference.hpp"

#include <cmath>
#include <vector>

#include "stemnoise/errors.hpp"
#include "reflect.hpp"

namespace stemnoise::reference {

LocalMoments local_moments(const LuminanceImage& image, const NormalizationConfig& cfg) {
    cfg.validate();
    const int K = cfg.half_height;
    const int L = cfg.half_width;
    LocalMoments out;
    out.mean.resize(static_cast<std::size_t>(image.width) * image.height);
    out.stddev.resize(out.mean.size());
    for (int row = 0; row < image.height; ++row) {
        for (int col = 0; col < image.width; ++col) {
            double mu = 0.0;
            for (int k = -K; k <= K; ++k)
                for (int l = -L; l <= L; ++l)
                    mu += cfg.weights[static_cast<std::size_t>(k + K) * (2 * L + 1) + (l + L)] *
                          image.at(detail::reflect_index(row + k, image.height),
                                   detail::reflect_index(col + l, image.width));
            double var = 0.0;
            for (int k = -K; k <= K; ++k)
                for (int l = -L; l <= L; ++l) {
                    const double d =
                        image.at(detail::reflect_index(row + k, image.height),
                                 detail::reflect_index(col + l, image.width)) -
                        mu;
                    var += cfg.weights[static_cast<std::size_t>(k + K) * (2 * L + 1) + (l + L)] * d * d;
                }
            const std::size_t i = static_cast<std::size_t>(row) * image.width + col;
            out.mean[i] = mu;
            out.stddev[i] = std::sqrt(var);
        }
    }
    return out;
}

NormalizedImage normalize(const LuminanceImage& image, const NormalizationConfig& cfg) {
    LocalMoments moments = reference::local_moments(image, cfg);
    NormalizedImage out;
    out.width = image.width;
    out.height = image.height;
    out.values.resize(moments.mean.size());
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = (image.data[i] - moments.mean[i]) / (moments.stddev[i] + cfg.stabilizer);
    out.mean_map = std::move(moments.mean);
    out.std_map = std::move(moments.stddev);
    return out;
}

EnergyAnalysis compute_energy_map(const NormalizedImage& norm, AcfMode mode, double epsilon) {
    const BlockView view = partition_blocks(norm);
    const BlockLayout& layout = view.layout();
    EnergyAnalysis out;
    out.energy.blocks_down = layout.blocks_down;
    out.energy.blocks_across = layout.blocks_across;
    out.energy.values.resize(layout.block_count);
    out.params.blocks_down = layout.blocks_down;
    out.params.blocks_across = layout.blocks_across;
    out.params.params.resize(layout.block_count);
    for (std::size_t i = 0; i < layout.block_count; ++i) {
        const AcfEstimate acf = estimate_acf(view.block(i), mode);
        const ArParams ar = solve_yule_walker(acf, epsilon);
        out.params.params[i] = ar;
        out.energy.values[i] = stem_noise_energy(acf, ar);
    }
    return out;
}

LuminanceImage gaussian_blur(const LuminanceImage& image, double sigma) {
    if (sigma < 0.0) throw Error("blur standard deviation must be non-negative");
    if (sigma == 0.0) return image;
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        kernel[k + radius] = std::exp(-(static_cast<double>(k) * k) / (2.0 * sigma * sigma));
        sum += kernel[k + radius];
    }
    for (double& w : kernel) w /= sum;

    const int w = image.width, h = image.height;
    LuminanceImage tmp = LuminanceImage::filled(w, h, 0.0);
    for (int row = 0; row < h; ++row)
        for (int col = 0; col < w; ++col) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * image.at(row, detail::reflect_index(col + k, w));
            tmp.at(row, col) = acc;
        }
    LuminanceImage out = LuminanceImage::filled(w, h, 0.0);
    for (int row = 0; row < h; ++row)
        for (int col = 0; col < w; ++col) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * tmp.at(detail::reflect_index(row + k, h), col);
            out.at(row, col) = acc;
        }
    return out;
}

} // namespace stemnoise::reference
