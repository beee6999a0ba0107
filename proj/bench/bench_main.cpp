// Timing comparison of the OpenMP kernels against their serial references.
// Checks bit-identical outputs while at it, since mismatches would make the
// speedups meaningless.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include <omp.h>

#include "stemnoise/ar_core.hpp"
#include "stemnoise/distortions.hpp"
#include "stemnoise/normalization.hpp"
#include "stemnoise/reference.hpp"
#include "support/fixture.hpp"

using namespace stemnoise;

namespace {

template <class F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-22s serial %8.2f ms   openmp %8.2f ms   speedup %4.2fx   %s\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms,
                identical ? "outputs identical" : "OUTPUTS DIFFER");
}

} // namespace

int main(int argc, char** argv) {
    int side = 2048;
    int reps = 3;
    if (argc > 1) side = std::atoi(argv[1]);
    if (argc > 2) reps = std::atoi(argv[2]);
    std::printf("image %dx%d, best of %d, %d thread(s)\n", side, side, reps,
                omp_get_max_threads());

    const LuminanceImage img = testsupport::make_natural_image(side, side, 1);
    const NormalizationConfig cfg = NormalizationConfig::uniform();

    NormalizedImage norm_serial, norm_parallel;
    const double n_ser = time_best_of(reps, [&] { norm_serial = reference::normalize(img, cfg); });
    const double n_par = time_best_of(reps, [&] { norm_parallel = normalize(img, cfg); });
    report("normalize", n_ser, n_par, norm_serial.values == norm_parallel.values);

    EnergyAnalysis map_serial, map_parallel;
    const double m_ser =
        time_best_of(reps, [&] { map_serial = reference::compute_energy_map(norm_serial); });
    const double m_par =
        time_best_of(reps, [&] { map_parallel = compute_energy_map(norm_parallel); });
    report("energy map", m_ser, m_par, map_serial.energy.values == map_parallel.energy.values);

    LuminanceImage blur_serial, blur_parallel;
    const double b_ser = time_best_of(reps, [&] { blur_serial = reference::gaussian_blur(img, 2.0); });
    const double b_par = time_best_of(reps, [&] { blur_parallel = gaussian_blur(img, 2.0); });
    report("gaussian blur s=2", b_ser, b_par, blur_serial.data == blur_parallel.data);

    const double p_ser = time_best_of(reps, [&] {
        auto n = reference::normalize(img, cfg);
        reference::compute_energy_map(n);
    });
    const double p_par = time_best_of(reps, [&] {
        auto n = normalize(img, cfg);
        compute_energy_map(n);
    });
    report("full pipeline", p_ser, p_par, true);
    return 0;
}
