#include "stemnoise/ar_core.hpp"

#include <cmath>

#include "stemnoise/errors.hpp"

namespace stemnoise {

BlockView partition_blocks(const NormalizedImage& norm) {
    if (norm.width < 2 || norm.height < 2)
        throw DimensionError("image holds no complete 2x2 block");
    BlockLayout layout;
    layout.blocks_down = norm.height / 2;
    layout.blocks_across = norm.width / 2;
    layout.block_count =
        static_cast<std::size_t>(layout.blocks_down) * layout.blocks_across;
    return BlockView(norm, layout);
}

AcfEstimate estimate_acf(const BlockSequence& block, AcfMode mode) {
    // values[0..3] are x[n-3], x[n-2], x[n-1], x[n] in scan order
    const double v0 = block.values[0];
    const double v1 = block.values[1];
    const double v2 = block.values[2];
    const double v3 = block.values[3];

    AcfEstimate acf;
    acf.mode = mode;
    acf.lags[0] = (v3 * v3 + v2 * v2 + v1 * v1 + v0 * v0) / 4.0;
    // lag-1 products: x[n]x[n-1], x[n-1]x[n-2] (the secondary-diagonal pair,
    // excluded by default), x[n-2]x[n-3]
    if (mode == AcfMode::excluded_r1)
        acf.lags[1] = (v3 * v2 + v1 * v0) / 2.0;
    else
        acf.lags[1] = (v3 * v2 + v2 * v1 + v1 * v0) / 3.0;
    acf.lags[2] = (v3 * v1 + v2 * v0) / 2.0;
    acf.lags[3] = v3 * v0;
    return acf;
}

ArParams solve_yule_walker(const AcfEstimate& acf, double epsilon) {
    const double r0 = acf.lags[0];
    const double r1 = acf.lags[1];
    const double r2 = acf.lags[2];
    const double r3 = acf.lags[3];

    ArParams out;
    const auto fallback = [&] {
        out.a1 = out.a2 = out.a3 = 0.0;
        out.b0_sq = r0;
        out.degenerate = true;
        return out;
    };

    if (r0 <= epsilon) return fallback();
    const double guard = epsilon * r0;

    // order 1
    const double k1 = -r1 / r0;
    double e = r0 * (1.0 - k1 * k1);
    if (std::abs(e) < guard) return fallback();
    double a1 = k1;

    // order 2
    const double k2 = -(r2 + a1 * r1) / e;
    e *= 1.0 - k2 * k2;
    if (std::abs(e) < guard) return fallback();
    double a2 = k2;
    a1 += k2 * a1;

    // order 3
    const double k3 = -(r3 + a1 * r2 + a2 * r1) / e;
    out.a1 = a1 + k3 * a2;
    out.a2 = a2 + k3 * a1;
    out.a3 = k3;
    out.b0_sq = r0 + out.a1 * r1 + out.a2 * r2 + out.a3 * r3;
    out.degenerate = false;
    return out;
}

double stem_noise_energy(const AcfEstimate& acf, const ArParams& ar) {
    const double a0 = ArParams::a0;
    const double a1 = ar.a1;
    const double a2 = ar.a2;
    const double a3 = ar.a3;
    const double s0 = a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3;
    const double s1 = a0 * a1 + a1 * a2 + a2 * a3;
    const double s2 = a0 * a2 + a1 * a3;
    const double s3 = a0 * a3;
    return acf.lags[0] * s0 + 2.0 * acf.lags[1] * s1 + 2.0 * acf.lags[2] * s2 +
           2.0 * acf.lags[3] * s3;
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

#pragma omp parallel for schedule(static)
    for (int by = 0; by < layout.blocks_down; ++by) {
        for (int bx = 0; bx < layout.blocks_across; ++bx) {
            const std::size_t i =
                static_cast<std::size_t>(by) * layout.blocks_across + bx;
            const AcfEstimate acf = estimate_acf(view.block(by, bx), mode);
            const ArParams ar = solve_yule_walker(acf, epsilon);
            out.params.params[i] = ar;
            out.energy.values[i] = stem_noise_energy(acf, ar);
        }
    }
    return out;
}

} // namespace stemnoise
