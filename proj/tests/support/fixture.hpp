#pragma once

#include <algorithm>
#include <cmath>

#include "stemnoise/image.hpp"
#include "stemnoise/reference.hpp"
#include "test_rng.hpp"

namespace testsupport {

// Synthetic natural-looking scene: smooth sinusoidal shading, a handful of
// soft disks, and fine blurred-noise texture. Values stay mid-range
// ([lo, lo+span]) so that strong additive noise rarely clips.
inline stemnoise::LuminanceImage make_natural_image(int width = 512, int height = 512,
                                                    std::uint64_t seed = 20240901,
                                                    double lo = 70.0, double span = 115.0,
                                                    double texture_amp = 11.0) {
    Rng rng(seed);
    const double tau = 2.0 * 3.141592653589793238462643383279502884;

    stemnoise::LuminanceImage base = stemnoise::LuminanceImage::filled(width, height, 0.0);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const double u = static_cast<double>(c) / width;
            const double v = static_cast<double>(r) / height;
            base.at(r, c) = 0.5 + 0.17 * std::sin(tau * (1.7 * u + 0.6 * v) + 0.7) +
                            0.11 * std::cos(tau * (0.4 * u + 2.3 * v) + 2.1) +
                            0.07 * std::sin(tau * (3.1 * u - 1.2 * v) + 4.0);
        }
    }
    for (int i = 0; i < 12; ++i) {
        const double cx = rng.uniform(0.0, width);
        const double cy = rng.uniform(0.0, height);
        const double rad = rng.uniform(20.0, 80.0);
        const double amp = rng.uniform(-0.16, 0.16);
        for (int r = 0; r < height; ++r)
            for (int c = 0; c < width; ++c) {
                const double d = std::hypot(c - cx, r - cy);
                const double t = std::max(0.0, 1.0 - d / rad);
                base.at(r, c) += amp * t * t;
            }
    }

    stemnoise::LuminanceImage noise = stemnoise::LuminanceImage::filled(width, height, 0.0);
    for (double& v : noise.data) v = rng.normal();
    const stemnoise::LuminanceImage texture = stemnoise::reference::gaussian_blur(noise, 1.0);
    double mean = 0.0;
    for (double v : texture.data) mean += v;
    mean /= static_cast<double>(texture.data.size());
    double var = 0.0;
    for (double v : texture.data) var += (v - mean) * (v - mean);
    var /= static_cast<double>(texture.data.size());
    const double scale = (texture_amp / span) / std::sqrt(var);

    stemnoise::LuminanceImage out = stemnoise::LuminanceImage::filled(width, height, 0.0);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        const double t = std::clamp(base.data[i] + scale * (texture.data[i] - mean), 0.0, 1.0);
        out.data[i] = lo + span * t;
    }
    return out;
}

} // namespace testsupport
