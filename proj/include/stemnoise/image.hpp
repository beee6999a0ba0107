#pragma once

#include <cstdint>
#include <vector>

namespace stemnoise {

/// Real-valued luminance raster, row-major, nominal range [0, 255].
/// Values are kept in floating point end to end; quantization only
/// happens when an 8-bit file is written.
struct LuminanceImage {
    int width = 0;
    int height = 0;
    std::vector<double> data; // height * width

    double& at(int row, int col) { return data[static_cast<std::size_t>(row) * width + col]; }
    double at(int row, int col) const { return data[static_cast<std::size_t>(row) * width + col]; }

    static LuminanceImage filled(int width, int height, double value) {
        LuminanceImage img;
        img.width = width;
        img.height = height;
        img.data.assign(static_cast<std::size_t>(width) * height, value);
        return img;
    }
};

/// 8-bit grayscale raster for file output (SNEM renders, label maps).
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // height * width

    std::uint8_t at(int row, int col) const { return data[static_cast<std::size_t>(row) * width + col]; }
};

} // namespace stemnoise
