#pragma once

#include "stemnoise/ar_core.hpp"
#include "stemnoise/distortions.hpp"
#include "stemnoise/normalization.hpp"

// Plain serial implementations of the parallel kernels. These are the
// reference the unit tests compare the OpenMP paths against (results must be
// bit-identical) and the baseline for the benchmark target. Straight loops,
// no pragmas.
namespace stemnoise::reference {

LocalMoments local_moments(const LuminanceImage& image, const NormalizationConfig& cfg);

NormalizedImage normalize(const LuminanceImage& image, const NormalizationConfig& cfg);

EnergyAnalysis compute_energy_map(const NormalizedImage& norm,
                                  AcfMode mode = AcfMode::excluded_r1,
                                  double epsilon = kDefaultEpsilon);

LuminanceImage gaussian_blur(const LuminanceImage& image, double sigma);

} // namespace stemnoise::reference
