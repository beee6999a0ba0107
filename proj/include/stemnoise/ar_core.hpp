#pragma once

#include <array>
#include <cstddef>

#include "stemnoise/normalization.hpp"

namespace stemnoise {

/// Which lag-1 products enter the autocorrelation estimate.
/// excluded_r1 drops the bottom-left * top-right product (the pair that is
/// also the secondary diagonal of the block); full_r1 keeps all three.
enum class AcfMode {
    excluded_r1,
    full_r1,
};

/// Non-overlapping 2x2 block grid over a normalized image. A trailing odd
/// row or column of pixels is left out.
struct BlockLayout {
    int model_order = 3; // AR order r; block side is sqrt(r + 1)
    int block_side = 2;
    int blocks_down = 0;   // floor(height / 2)
    int blocks_across = 0; // floor(width / 2)
    std::size_t block_count = 0;
};

/// One block flattened to a scan-order sequence: top-down, each row left to
/// right. values[3] is the newest sample x[n] (bottom-right pixel) and
/// values[0] the oldest x[n-3] (top-left pixel).
struct BlockSequence {
    std::array<double, 4> values{};
};

/// Random-access view over the block grid of a normalized image.
/// The image must outlive the view.
class BlockView {
public:
    BlockView(const NormalizedImage& norm, const BlockLayout& layout)
        : norm_(&norm), layout_(layout) {}

    const BlockLayout& layout() const { return layout_; }
    std::size_t count() const { return layout_.block_count; }

    BlockSequence block(int block_row, int block_col) const {
        const int r = 2 * block_row;
        const int c = 2 * block_col;
        return BlockSequence{{norm_->at(r, c), norm_->at(r, c + 1),
                              norm_->at(r + 1, c), norm_->at(r + 1, c + 1)}};
    }

    BlockSequence block(std::size_t index) const {
        return block(static_cast<int>(index / layout_.blocks_across),
                     static_cast<int>(index % layout_.blocks_across));
    }

private:
    const NormalizedImage* norm_;
    BlockLayout layout_;
};

/// Throws DimensionError if the image holds no complete 2x2 block.
BlockView partition_blocks(const NormalizedImage& norm);

/// Sample autocorrelation lags R(0..3) of one block sequence. Each lag is
/// the arithmetic mean of its included products: 4 squares for R(0), two or
/// three products for R(1) depending on the mode, two for R(2), and the
/// single product x[n]*x[n-3] for R(3).
struct AcfEstimate {
    std::array<double, 4> lags{};
    AcfMode mode = AcfMode::excluded_r1;
};

AcfEstimate estimate_acf(const BlockSequence& block, AcfMode mode);

/// AR(3) parameters of one block. The leading coefficient a0 is fixed at 1;
/// b0_sq is the innovation gain. Degenerate blocks (see solve_yule_walker)
/// carry a1 = a2 = a3 = 0 and b0_sq = R(0).
struct ArParams {
    static constexpr double a0 = 1.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double b0_sq = 0.0;
    bool degenerate = false;
};

/// Guard threshold for the Levinson recursion. Four samples per block make
/// near-singular sample autocorrelations common; prediction-error terms
/// below epsilon * R(0) in magnitude flag the block degenerate instead of
/// amplifying noise into huge coefficients.
inline constexpr double kDefaultEpsilon = 0.05;

/// Solve the order-3 Yule-Walker system
///   [R0 R1 R2; R1 R0 R1; R2 R1 R0] * (a1,a2,a3)' = -(R1,R2,R3)'
/// by Levinson-Durbin recursion, then b0_sq = R0 + a1 R1 + a2 R2 + a3 R3.
/// The sample lags need not form a positive-definite sequence; the recursion
/// only requires every prediction-error denominator to stay at or above
/// epsilon * R(0) in magnitude. If R(0) <= epsilon or a denominator falls
/// under the guard, the block is flagged degenerate and the zero-coefficient
/// fallback applies. That is a signal of a locally constant or numerically
/// singular block, not a failure.
ArParams solve_yule_walker(const AcfEstimate& acf, double epsilon = kDefaultEpsilon);

/// Stem noise energy of one block: the quadratic form
///   R0*(a0^2+a1^2+a2^2+a3^2) + 2 R1*(a0 a1 + a1 a2 + a2 a3)
///   + 2 R2*(a0 a2 + a1 a3) + 2 R3 * a0 a3
/// with a0 = 1. Sample lags may be indefinite, so the value can be negative.
/// Term order is fixed: lag groups are accumulated left to right and combined
/// as R0*s0 + 2*R1*s1 + 2*R2*s2 + 2*R3*s3.
double stem_noise_energy(const AcfEstimate& acf, const ArParams& ar);

/// Per-block stem noise energy over the block grid.
struct EnergyMap {
    int blocks_down = 0;
    int blocks_across = 0;
    std::vector<double> values;

    double at(int block_row, int block_col) const {
        return values[static_cast<std::size_t>(block_row) * blocks_across + block_col];
    }
};

struct ArParamsGrid {
    int blocks_down = 0;
    int blocks_across = 0;
    std::vector<ArParams> params;
};

struct EnergyAnalysis {
    EnergyMap energy;
    ArParamsGrid params;
};

/// Run estimate_acf -> solve_yule_walker -> stem_noise_energy over every
/// block. Blocks are independent and written to fixed grid positions, so the
/// parallel loop is deterministic. Throws DimensionError via partition_blocks.
EnergyAnalysis compute_energy_map(const NormalizedImage& norm,
                                  AcfMode mode = AcfMode::excluded_r1,
                                  double epsilon = kDefaultEpsilon);

} // namespace stemnoise
