#include <doctest.h>

#include <cmath>

#include "stemnoise/distortions.hpp"
#include "stemnoise/reference.hpp"
#include "support/test_rng.hpp"

using namespace stemnoise;

TEST_SUITE("distortions") {

TEST_CASE("zero-sigma noise is the identity") {
    const auto img = LuminanceImage::filled(8, 8, 99.5);
    const auto out = add_white_noise(img, 0.0, 123);
    CHECK(out.data == img.data);
}

TEST_CASE("the seed pins the noise bytes") {
    const auto img = LuminanceImage::filled(32, 32, 128.0);
    const auto a = add_white_noise(img, 15.0, 77);
    const auto b = add_white_noise(img, 15.0, 77);
    CHECK(a.data == b.data);
    const auto c = add_white_noise(img, 15.0, 78);
    CHECK(a.data != c.data);
}

TEST_CASE("sample deviation tracks the requested sigma at mid-gray") {
    const auto img = LuminanceImage::filled(512, 512, 128.0);
    const auto out = add_white_noise(img, 20.0, 4242);
    double mean = 0.0;
    for (std::size_t i = 0; i < out.data.size(); ++i) mean += out.data[i] - img.data[i];
    mean /= static_cast<double>(out.data.size());
    double var = 0.0;
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        const double d = out.data[i] - img.data[i] - mean;
        var += d * d;
    }
    var /= static_cast<double>(out.data.size());
    CHECK(std::sqrt(var) == doctest::Approx(20.0).epsilon(0.02));
}

TEST_CASE("noise output is clamped to [0, 255]") {
    const auto dark = add_white_noise(LuminanceImage::filled(64, 64, 2.0), 50.0, 5);
    const auto bright = add_white_noise(LuminanceImage::filled(64, 64, 253.0), 50.0, 5);
    for (double v : dark.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 255.0);
    }
    for (double v : bright.data) CHECK(v <= 255.0);
}

TEST_CASE("zero-sigma blur is the identity") {
    auto img = LuminanceImage::filled(5, 4, 0.0);
    testsupport::Rng rng(1);
    for (double& v : img.data) v = rng.uniform(0, 255);
    CHECK(gaussian_blur(img, 0.0).data == img.data);
}

TEST_CASE("unit-sum kernel leaves constant images unchanged") {
    const auto img = LuminanceImage::filled(16, 16, 42.0);
    const auto out = gaussian_blur(img, 2.5);
    for (double v : out.data) CHECK(v == doctest::Approx(42.0).epsilon(1e-12));
}

TEST_CASE("impulse response center matches the normalized kernel") {
    auto img = LuminanceImage::filled(15, 15, 0.0);
    img.at(7, 7) = 1.0;
    const auto out = gaussian_blur(img, 1.0);
    // radius 3; center weight of the separable 2-D response is the square of
    // the 1-D center, about 0.159241
    double sum = 0.0;
    for (int k = -3; k <= 3; ++k) sum += std::exp(-0.5 * k * k);
    const double center_1d = 1.0 / sum;
    CHECK(out.at(7, 7) == doctest::Approx(center_1d * center_1d).epsilon(1e-12));
    CHECK(out.at(7, 7) == doctest::Approx(0.159241).epsilon(1e-4));
}

TEST_CASE("blur preserves the global mean of constant-border images") {
    // with a constant band wider than the kernel radius, mirror padding
    // reflects only the constant and the convolution moves no mass
    const double sigma = 1.5;
    const int band = 6; // kernel radius ceil(3 * 1.5) = 5; reflection reaches one past it
    auto img = LuminanceImage::filled(128, 128, 90.0);
    testsupport::Rng rng(8);
    for (int r = band; r < 128 - band; ++r)
        for (int c = band; c < 128 - band; ++c) img.at(r, c) = rng.uniform(0, 255);
    const auto out = gaussian_blur(img, sigma);
    double before = 0.0, after = 0.0;
    for (double v : img.data) before += v;
    for (double v : out.data) after += v;
    CHECK(after / before == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("parallel blur equals the serial reference bit for bit") {
    auto img = LuminanceImage::filled(97, 53, 0.0);
    testsupport::Rng rng(12);
    for (double& v : img.data) v = rng.uniform(0, 255);
    for (double sigma : {0.5, 1.0, 3.0}) {
        const auto par = gaussian_blur(img, sigma);
        const auto ser = reference::gaussian_blur(img, sigma);
        CHECK(par.data == ser.data);
    }
}

TEST_CASE("unit tile side is the identity") {
    auto img = LuminanceImage::filled(6, 6, 0.0);
    testsupport::Rng rng(3);
    for (double& v : img.data) v = rng.uniform(0, 255);
    CHECK(blockify(img, 1).data == img.data);
}

TEST_CASE("tiles collapse to their mean, partial tiles included") {
    auto img = LuminanceImage::filled(2, 2, 0.0);
    img.data = {0, 100, 50, 50};
    const auto out = blockify(img, 2);
    for (double v : out.data) CHECK(v == 50.0);

    auto odd = LuminanceImage::filled(3, 3, 0.0);
    odd.data = {0, 0, 9, 0, 0, 9, 3, 3, 6};
    const auto tiled = blockify(odd, 2);
    CHECK(tiled.at(0, 0) == 0.0);
    CHECK(tiled.at(0, 2) == 9.0); // 1x2 partial tile
    CHECK(tiled.at(2, 0) == 3.0); // 2x1 partial tile
    CHECK(tiled.at(2, 2) == 6.0); // 1x1 corner
}

TEST_CASE("blockify is idempotent") {
    auto img = LuminanceImage::filled(37, 29, 0.0);
    testsupport::Rng rng(9);
    for (double& v : img.data) v = rng.uniform(0, 255);
    const auto once = blockify(img, 8);
    const auto twice = blockify(once, 8);
    CHECK(once.data == twice.data);
}

TEST_CASE("constant images are fixed points of every generator") {
    const auto img = LuminanceImage::filled(20, 20, 77.0);
    for (double v : gaussian_blur(img, 1.0).data)
        CHECK(v == doctest::Approx(77.0).epsilon(1e-12));
    CHECK(blockify(img, 4).data == img.data); // integer tile means stay exact
}

} // TEST_SUITE
