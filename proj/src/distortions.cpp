#include "stemnoise/distortions.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "stemnoise/errors.hpp"
#include "reflect.hpp"

namespace stemnoise {

namespace {

// splitmix64: spreads arbitrary user seeds before feeding the engine
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Gaussian deviates via Box-Muller over explicit 53-bit uniforms; avoids the
// implementation-defined std::normal_distribution so a seed pins the bytes.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) {
        std::uint64_t s = seed;
        engine_.seed(splitmix64(s));
    }

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * kPi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    static constexpr double kPi = 3.141592653589793238462643383279502884;

    double uniform_open() {
        // (0, 1]: never 0, so log() stays finite
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        const double w = std::exp(-(static_cast<double>(k) * k) / (2.0 * sigma * sigma));
        kernel[k + radius] = w;
        sum += w;
    }
    for (double& w : kernel) w /= sum;
    return kernel;
}

} // namespace

LuminanceImage add_white_noise(const LuminanceImage& image, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw Error("noise standard deviation must be non-negative");
    LuminanceImage out = image;
    if (sigma == 0.0) return out;
    GaussianSource gauss(seed);
    for (double& v : out.data)
        v = std::clamp(v + sigma * gauss.next(), 0.0, 255.0);
    return out;
}

LuminanceImage gaussian_blur(const LuminanceImage& image, double sigma) {
    if (sigma < 0.0) throw Error("blur standard deviation must be non-negative");
    if (sigma == 0.0) return image;

    const std::vector<double> kernel = gaussian_kernel(sigma);
    const int radius = (static_cast<int>(kernel.size()) - 1) / 2;
    const int w = image.width, h = image.height;

    LuminanceImage tmp = LuminanceImage::filled(w, h, 0.0);
#pragma omp parallel for schedule(static)
    for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * image.at(row, detail::reflect_index(col + k, w));
            tmp.at(row, col) = acc;
        }
    }
    LuminanceImage out = LuminanceImage::filled(w, h, 0.0);
#pragma omp parallel for schedule(static)
    for (int row = 0; row < h; ++row) {
        for (int col = 0; col < w; ++col) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * tmp.at(detail::reflect_index(row + k, h), col);
            out.at(row, col) = acc;
        }
    }
    return out;
}

LuminanceImage blockify(const LuminanceImage& image, int block_side) {
    if (block_side < 1) throw Error("tile side must be at least 1");
    if (block_side == 1) return image;
    LuminanceImage out = image;
    for (int r0 = 0; r0 < image.height; r0 += block_side) {
        const int r1 = std::min(r0 + block_side, image.height);
        for (int c0 = 0; c0 < image.width; c0 += block_side) {
            const int c1 = std::min(c0 + block_side, image.width);
            // constant tiles stay untouched, which makes the operation
            // exactly idempotent
            bool constant = true;
            double sum = 0.0;
            for (int r = r0; r < r1; ++r)
                for (int c = c0; c < c1; ++c) {
                    constant &= image.at(r, c) == image.at(r0, c0);
                    sum += image.at(r, c);
                }
            if (constant) continue;
            const double mean = sum / (static_cast<double>(r1 - r0) * (c1 - c0));
            for (int r = r0; r < r1; ++r)
                for (int c = c0; c < c1; ++c) out.at(r, c) = mean;
        }
    }
    return out;
}

} // namespace stemnoise
