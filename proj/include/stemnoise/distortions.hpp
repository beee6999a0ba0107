#pragma once

#include <cstdint>

#include "stemnoise/image.hpp"

namespace stemnoise {

/// Add i.i.d. zero-mean Gaussian noise of the given standard deviation,
/// clamped to [0, 255]. Samples come from a splitmix64-seeded mt19937_64
/// through a Box-Muller transform, so a seed fully determines the output.
LuminanceImage add_white_noise(const LuminanceImage& image, double sigma, std::uint64_t seed);

/// Separable Gaussian convolution, kernel radius ceil(3*sigma), kernel
/// normalized to sum 1, mirror-padded borders. sigma = 0 is the identity.
LuminanceImage gaussian_blur(const LuminanceImage& image, double sigma);

/// Replace every block_side x block_side tile by its mean (trailing partial
/// tiles included). A codec-free stand-in for block-coding artifacts.
/// Idempotent; block_side = 1 is the identity.
LuminanceImage blockify(const LuminanceImage& image, int block_side);

} // namespace stemnoise
